//! Command-line front end: parse a format spec, certify one rank or sweep
//! ranks, and print text or line-JSON certificates.
//!
//! Exit codes: 0 certified (or sweep completed), 1 inconclusive,
//! 2 observed rank deficit, 64 usage or input error.

use clap::error::ErrorKind;
use clap::Parser;
use std::path::PathBuf;
use terracini::certify::{certify, max_k_sweep, CertifyConfig, Verdict};
use terracini::primes::validate_witness_prime;
use terracini::report::{render_text, CertificateRecord};
use terracini::variety::parse_spec;
use terracini::witness::WitnessConfig;

#[derive(Parser, Debug)]
#[command(
    name = "terracini",
    version,
    about = "Certify identifiability of generic low-rank tensor decompositions"
)]
struct Args {
    /// Format to certify: segre:D1,D2,... | veronese:N,D | sv:N1,N2/D1,D2 | gauss:D
    #[arg(long)]
    spec: String,

    /// Rank to certify (exactly one of --k and --sweep)
    #[arg(
        long,
        conflicts_with = "sweep",
        required_unless_present = "sweep",
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    k: Option<u64>,

    /// Certify k = 1, 2, ... up to one past the first non-certified rank
    #[arg(long)]
    sweep: bool,

    /// Prime modulus for witness runs (must be a prime in [2^31, 2^62))
    #[arg(long)]
    prime: Option<u64>,

    /// Seed for the witness point stream
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Extra witness attempts with fresh primes before accepting a deficit
    #[arg(long, default_value_t = 3)]
    retries: u32,

    /// Emit one JSON record per line instead of text
    #[arg(long)]
    json: bool,

    /// Use only characteristic-free criteria; no witnesses are run
    #[arg(long)]
    char_free: bool,

    /// Write the report to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 64;
        }
    };
    match execute(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            64
        }
    }
}

fn execute(args: &Args) -> Result<i32, String> {
    let spec = parse_spec(&args.spec).map_err(|e| e.to_string())?;
    let mut witness = WitnessConfig {
        seed: args.seed,
        max_retries: args.retries,
        ..WitnessConfig::default()
    };
    if let Some(p) = args.prime {
        validate_witness_prime(p).map_err(|e| e.to_string())?;
        witness.prime = p;
    }
    let config = CertifyConfig { witness, char_free: args.char_free };

    let (report, code) = if args.sweep {
        let certs = max_k_sweep(&spec, &config);
        let mut report = String::new();
        for cert in &certs {
            if args.json {
                report.push_str(&CertificateRecord::from_certificate(cert).to_json_line());
                report.push('\n');
            } else {
                if !report.is_empty() {
                    report.push('\n');
                }
                report.push_str(&render_text(cert));
            }
        }
        (report, 0)
    } else {
        let k = args.k.expect("clap enforces --k unless --sweep");
        let cert = certify(&spec, k, &config);
        let report = if args.json {
            let mut line = CertificateRecord::from_certificate(&cert).to_json_line();
            line.push('\n');
            line
        } else {
            render_text(&cert)
        };
        let code = match cert.verdict {
            Verdict::CertifiedNotWeaklyDefective | Verdict::CertifiedIdentifiable => 0,
            Verdict::Inconclusive => 1,
            Verdict::ObservedDefective { .. } => 2,
        };
        (report, code)
    };

    match &args.output {
        Some(path) => std::fs::write(path, &report)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{report}"),
    }
    Ok(code)
}

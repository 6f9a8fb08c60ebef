//! Flat, stable serialization of certificates.
//!
//! [`CertificateRecord`] is the external schema: field order is fixed,
//! optional fields are always present (`null` when absent), and integers are
//! emitted exactly. Two runs with equal inputs produce byte-identical JSON.

use crate::certify::{Certificate, Verdict};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub prime: u64,
    pub seed: u64,
    pub level: u64,
    pub rank: u64,
    pub expected: u64,
    pub retries: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub prime: u64,
    pub seed: u64,
    pub prime_list: Vec<u64>,
    pub max_retries: u32,
    pub char_free: bool,
}

/// One certificate, flattened for storage or line-oriented streaming.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub spec_string: String,
    pub k: u64,
    pub verdict: String,
    pub theorem: Option<String>,
    pub backing: String,
    pub witness: Option<WitnessRecord>,
    pub bounds: BTreeMap<String, i64>,
    pub reasons: Vec<String>,
    pub tool_version: String,
    pub config: ConfigRecord,
}

impl CertificateRecord {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let witness = cert.evidence.witness.as_ref().map(|w| WitnessRecord {
            prime: w.prime,
            seed: w.seed,
            level: w.level,
            rank: w.rank,
            expected: w.expected,
            retries: w.retries_used,
        });
        CertificateRecord {
            spec_string: cert.spec.to_string(),
            k: cert.k,
            verdict: cert.verdict.label().to_string(),
            theorem: cert.theorem.map(|t| t.label().to_string()),
            backing: cert.evidence.backing.label().to_string(),
            witness,
            bounds: cert.evidence.bounds.clone(),
            reasons: cert.reasons.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: ConfigRecord {
                prime: cert.config.witness.prime,
                seed: cert.config.witness.seed,
                prime_list: cert.config.witness.prime_list.clone(),
                max_retries: cert.config.witness.max_retries,
                char_free: cert.config.char_free,
            },
        }
    }

    /// Single-line JSON, suitable for one-record-per-line streams.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Human-readable rendering of a certificate.
pub fn render_text(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("spec:     {}\n", cert.spec));
    out.push_str(&format!("k:        {}\n", cert.k));
    out.push_str(&format!("verdict:  {}\n", cert.verdict.label()));
    if let Verdict::ObservedDefective { level, rank, deficit } = &cert.verdict {
        out.push_str(&format!(
            "          level {level}: rank {rank}, deficit {deficit}\n"
        ));
    }
    match cert.theorem {
        Some(t) => out.push_str(&format!("theorem:  {t}\n")),
        None => out.push_str("theorem:  none\n"),
    }
    out.push_str(&format!("backing:  {}\n", cert.evidence.backing));
    match &cert.evidence.witness {
        Some(w) => out.push_str(&format!(
            "witness:  level {}, rank {}/{}, prime {}, seed {}, retries {}\n",
            w.level, w.rank, w.expected, w.prime, w.seed, w.retries_used
        )),
        None => out.push_str("witness:  none\n"),
    }
    if !cert.evidence.bounds.is_empty() {
        let parts: Vec<String> = cert
            .evidence
            .bounds
            .iter()
            .map(|(key, value)| format!("{key} = {value}"))
            .collect();
        out.push_str(&format!("bounds:   {}\n", parts.join(", ")));
    }
    out.push_str("reasons:\n");
    for r in &cert.reasons {
        out.push_str(&format!("  - {r}\n"));
    }
    out
}

//! End-to-end acceptance checks, one test per criterion. Each test prints a
//! single `acceptance criterion N: PASS` line on success (visible with
//! `cargo test --test acceptance -- --nocapture`); a failing criterion fails
//! its test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use terracini::certify::{
    certify, certify_ipx, certify_with_provider, closed_form_e1, closed_form_ii2,
    closed_form_ip4, e1_k_max, ii1_bound, ii2_k_max, max_k_sweep, unbalanced_check,
    veronese_defectivity, Backing, CertifyConfig, TheoremId, Verdict, VeroneseStatus,
};
use terracini::embedding::{gaussian_moments, jet_check, sample_point};
use terracini::field::{PrimeField, Rationals};
use terracini::linalg::rank_exact_rational;
use terracini::primes::DEFAULT_PRIME;
use terracini::report::CertificateRecord;
use terracini::variety::{parse_spec, VarietySpec};
use terracini::witness::{
    expected_rank, secant_dim_witness, terracini_matrix, CachingWitnessProvider, Witness,
    WitnessConfig, WitnessProvider,
};

fn spec(s: &str) -> VarietySpec {
    parse_spec(s).unwrap()
}

#[test]
fn criterion_1_defectivity_detection() {
    let config = WitnessConfig::default();
    for (s, k, rank, expected) in
        [("segre:1,1,1,1", 3u64, 14u64, 15u64), ("segre:2,2,2", 4, 26, 27)]
    {
        let v = spec(s);
        let start = Instant::now();
        let w = secant_dim_witness(&v, k, &config);
        let elapsed = start.elapsed();
        assert_eq!((w.rank, w.expected), (rank, expected), "{s}");
        assert!(elapsed < Duration::from_secs(1), "{s} took {elapsed:?}");

        // Independent confirmation: exact rational elimination at one
        // explicit integer point configuration.
        let field = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let points: Vec<_> = (0..k).map(|_| sample_point(&v, &field, &mut rng)).collect();
        let matrix = terracini_matrix(&v, &field, &points);
        assert_eq!(rank_exact_rational(&matrix) as u64, rank, "{s} exact oracle");
    }
    println!("acceptance criterion 1: PASS");
}

#[test]
fn criterion_2_binary_tensor_pipeline() {
    let start = Instant::now();
    let config = CertifyConfig::default();
    for s in 5u32..=10 {
        let v = spec(&format!("segre:{}", vec!["1"; s as usize].join(",")));
        let k_max = closed_form_ip4(s).unwrap();
        let n = u64::from(s);
        let coords = 1u64 << s;
        let mut provider = CachingWitnessProvider::new(config.witness.clone());
        for k in 1..=k_max {
            let cert = certify_with_provider(&v, k, &config, &mut provider);
            assert!(cert.verdict.is_certified(), "s = {s}, k = {k}: {:?}", cert.verdict);
            let level = k + n - 1;
            if level * (n + 1) - 1 < coords - 1 {
                assert_eq!(cert.theorem, Some(TheoremId::Ip3), "s = {s}, k = {k}");
                let w = cert.evidence.witness.as_ref().unwrap();
                assert_eq!(w.level, level, "s = {s}, k = {k}");
                assert_eq!(w.rank, w.expected, "s = {s}, k = {k}");
            } else {
                assert_eq!(cert.theorem, Some(TheoremId::Ip4Closed), "s = {s}, k = {k}");
                assert_eq!(cert.evidence.backing, Backing::Literature);
            }
            // The identifiability-only path agrees exactly (cache hit on the
            // same level, so this is cheap).
            let ipx = certify_ipx(&v, k, &config, &mut provider);
            assert_eq!(ipx.verdict, Verdict::CertifiedIdentifiable, "s = {s}, k = {k}");
            assert_eq!(ipx.evidence.witness, cert.evidence.witness, "s = {s}, k = {k}");
        }
    }
    assert_eq!(closed_form_ip4(7), Some(9));
    assert_eq!(closed_form_ip4(10), Some(84));
    // One past the bound is never certified (checked at cheap sizes).
    for s in [5u32, 6] {
        let v = spec(&format!("segre:{}", vec!["1"; s as usize].join(",")));
        let cert = certify(&v, closed_form_ip4(s).unwrap() + 1, &config);
        assert!(!cert.verdict.is_certified(), "s = {s}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "pipeline took {elapsed:?}");
    println!("acceptance criterion 2: PASS");
}

#[test]
fn criterion_3_negative_control() {
    let cert = certify(&spec("segre:2,2,5"), 5, &CertifyConfig::default());
    assert_eq!(cert.verdict, Verdict::Inconclusive);
    assert_eq!(cert.theorem, None);
    println!("acceptance criterion 3: PASS");
}

#[test]
fn criterion_4_gaussian_moment_surface() {
    let config = CertifyConfig::default();
    for d in 6u64..=20 {
        let v = spec(&format!("gauss:{d}"));
        let mut provider = CachingWitnessProvider::new(config.witness.clone());

        // Non-defectivity: every level with 3k - 1 <= d achieves.
        let mut k = 1;
        while 3 * k - 1 <= d {
            let w = provider.witness(&v, k);
            assert!(w.achieved(), "gauss:{d} level {k}: {}/{}", w.rank, w.expected);
            assert_eq!(w.rank, 3 * k, "gauss:{d} level {k}");
            k += 1;
        }

        // Certification fires exactly when 3(k+1) - 1 < d; in the gap where
        // only 2(k+1) < d holds, the verdict stays inconclusive and the
        // discrepancy is surfaced.
        let mut k = 1;
        loop {
            let fires = 3 * (k + 1) - 1 < d;
            let count_only = 2 * (k + 1) < d;
            if !fires && !count_only {
                break;
            }
            let cert = certify_with_provider(&v, k, &config, &mut provider);
            if fires {
                assert_eq!(
                    cert.verdict,
                    Verdict::CertifiedNotWeaklyDefective,
                    "gauss:{d} k = {k}"
                );
                assert_eq!(cert.theorem, Some(TheoremId::Ip1), "gauss:{d} k = {k}");
            } else {
                assert_eq!(cert.verdict, Verdict::Inconclusive, "gauss:{d} k = {k}");
                assert!(
                    cert.reasons.join("\n").contains("2(k+1) < d"),
                    "gauss:{d} k = {k}: {:?}",
                    cert.reasons
                );
            }
            k += 1;
        }
    }
    println!("acceptance criterion 4: PASS");
}

#[test]
fn criterion_5_veronese_exceptional_list() {
    // Deficits are deterministic facts about the frozen seed and prime, so
    // the retry budget stays at zero to keep the sweep single-pass.
    let config = WitnessConfig { max_retries: 0, ..WitnessConfig::default() };
    let mut band_cases = 0usize;
    let mut sporadics = BTreeSet::new();
    let mut checked = 0usize;
    for n in 1u32..=30 {
        let mut d = 2u32;
        while let Ok(v) = parse_spec(&format!("veronese:{n},{d}")) {
            let coords = v.ambient().coords;
            if coords > 500 {
                break;
            }
            let n64 = u64::from(n);
            let fill = coords.div_ceil(n64 + 1);
            let mut provider = CachingWitnessProvider::new(config.clone());
            for k in 1..=fill + 1 {
                let w = provider.witness(&v, k);
                checked += 1;
                match veronese_defectivity(n, d, k).unwrap() {
                    VeroneseStatus::NonDefective => {
                        assert!(
                            w.achieved(),
                            "veronese:{n},{d} k = {k}: rank {}/{}",
                            w.rank,
                            w.expected
                        );
                    }
                    VeroneseStatus::KnownDefective { deficit } => {
                        assert_eq!(
                            w.expected - w.rank,
                            deficit,
                            "veronese:{n},{d} k = {k}"
                        );
                        if d == 2 {
                            band_cases += 1;
                            assert_eq!(w.rank, k * (n64 + 1) - k * (k - 1) / 2);
                        } else {
                            sporadics.insert((n, d, k));
                        }
                    }
                }
            }
            d += 1;
        }
    }
    assert!(band_cases > 0, "quadric band never exercised");
    assert_eq!(
        sporadics,
        BTreeSet::from([(2, 4, 5), (3, 4, 9), (4, 3, 7), (4, 4, 14)]),
        "sporadic exceptional cases"
    );
    assert!(checked > 2000, "only {checked} triples enumerated");
    println!("acceptance criterion 5: PASS");
}

#[test]
fn criterion_6_closed_forms_exact() {
    assert_eq!(e1_k_max(3, 4), 5);
    assert_eq!(e1_k_max(2, 4), 1);
    assert_eq!(e1_k_max(2, 5), 12);
    assert!(closed_form_e1(3, 4, 5) && !closed_form_e1(3, 4, 6));
    assert!(closed_form_e1(2, 5, 12) && !closed_form_e1(2, 5, 13));

    assert_eq!(ii2_k_max(&[1, 1], &[3, 3]).unwrap().k_max, 4);
    assert_eq!(ii2_k_max(&[2], &[4]).unwrap().k_max, 3);
    assert_eq!(closed_form_ii2(&[1, 1], &[3, 3], &[2, 2], &[1, 1], 4), Ok(true));
    assert_eq!(closed_form_ii2(&[2], &[4], &[3], &[1], 3), Ok(true));

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let h0 = rng.gen_range(-50i64..2000);
        let dim_v = rng.gen_range(-50i64..2000);
        let n = rng.gen_range(0i64..60);
        assert_eq!(ii1_bound(h0, dim_v, n), h0.min(dim_v - n - 2).max(0));
    }

    assert!(unbalanced_check(&[6, 2, 2]));
    assert!(!unbalanced_check(&[5, 2, 2]));

    for s in 5u32..=12 {
        let cap = 2u64.pow(s) - 1;
        let brute = (0..=cap)
            .filter(|&k| (k + u64::from(s) - 1) * (u64::from(s) + 1) <= cap)
            .max()
            .unwrap();
        assert_eq!(closed_form_ip4(s), Some(brute), "s = {s}");
    }
    println!("acceptance criterion 6: PASS");
}

struct AlwaysDeficient;

impl WitnessProvider for AlwaysDeficient {
    fn witness(&mut self, spec: &VarietySpec, level: u64) -> Witness {
        let expected = expected_rank(spec, level);
        Witness {
            spec_string: spec.to_string(),
            level,
            prime: 31,
            seed: 0,
            rank: expected.saturating_sub(1),
            expected,
            retries_used: 3,
        }
    }
}

struct DeficientAbove {
    cutoff: u64,
}

impl WitnessProvider for DeficientAbove {
    fn witness(&mut self, spec: &VarietySpec, level: u64) -> Witness {
        let expected = expected_rank(spec, level);
        let rank = if level <= self.cutoff { expected } else { expected - 1 };
        Witness {
            spec_string: spec.to_string(),
            level,
            prime: 31,
            seed: 0,
            rank,
            expected,
            retries_used: 0,
        }
    }
}

/// Central moment of a 1D Gaussian by the classical binomial and
/// double-factorial expansion, exact in integers.
fn moment_oracle(mu: i64, var: i64, j: u32) -> i64 {
    let mut total: i128 = 0;
    for i in 0..=(j / 2) {
        let mut choose: i128 = 1;
        for t in 0..(2 * i) {
            choose = choose * i128::from(j - t) / (i128::from(t) + 1);
        }
        let double_fact: i128 = (1..=i128::from(i)).map(|t| 2 * t - 1).product();
        total += choose
            * double_fact
            * i128::from(mu).pow(j - 2 * i)
            * i128::from(var).pow(i);
    }
    i64::try_from(total).expect("oracle fits in i64")
}

#[test]
fn criterion_7_property_suites() {
    // Jets: for every family, the tangent frame matches first-order
    // recomputation in each chart direction at random points.
    let field = PrimeField::new(DEFAULT_PRIME).unwrap();
    let families = [
        "segre:1,1",
        "segre:2,2",
        "segre:1,1,1,1",
        "segre:3,2,1",
        "veronese:2,3",
        "veronese:3,4",
        "sv:1,1/3,3",
        "sv:2,1/1,2",
        "sv:1,2,1/2,1,3",
        "gauss:8",
    ];
    for s in families {
        let v = spec(s);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let point = sample_point(&v, &field, &mut rng);
            assert!(jet_check(&v, &field, &point), "{s}");
        }
    }
    let rationals = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for s in ["gauss:8", "veronese:2,3"] {
        let v = spec(s);
        let point = sample_point(&v, &rationals, &mut rng);
        assert!(jet_check(&v, &rationals, &point), "{s} over the rationals");
    }

    // Rank monotonicity and the min(level * (n + 1), coords) cap.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pool = [
        "segre:1,1,1",
        "segre:2,2",
        "segre:1,2,1",
        "veronese:2,4",
        "veronese:3,3",
        "sv:1,1/2,2",
        "sv:2,1/1,3",
        "gauss:9",
        "gauss:14",
        "segre:1,1,1,1",
    ];
    for i in 0..200 {
        let v = spec(pool[i % pool.len()]);
        let config = WitnessConfig {
            seed: rng.gen(),
            max_retries: 0,
            ..WitnessConfig::default()
        };
        let mut provider = CachingWitnessProvider::new(config);
        let low = rng.gen_range(1u64..8);
        let high = low + rng.gen_range(0u64..5);
        let r_low = provider.witness(&v, low).rank;
        let r_high = provider.witness(&v, high).rank;
        assert!(r_low <= r_high, "{} levels {low}..{high}", pool[i % pool.len()]);
        assert!(r_low <= expected_rank(&v, low));
        assert!(r_high <= expected_rank(&v, high));
    }

    // Moment recursion vs the double-factorial oracle, exact over Q.
    for d in 3u32..=12 {
        for (mu, var) in [(0i64, 1i64), (2, 3), (-3, 5), (7, 1), (1, -2)] {
            let moments = gaussian_moments(
                &rationals,
                &rationals.from_i64(mu),
                &rationals.from_i64(var),
                d,
            );
            for (j, m) in moments.iter().enumerate() {
                assert_eq!(
                    *m,
                    rationals.from_i64(moment_oracle(mu, var, j as u32)),
                    "d = {d}, mu = {mu}, var = {var}, j = {j}"
                );
            }
        }
    }

    // Soundness gate: deficient witnesses can never produce a certificate.
    let config = CertifyConfig::default();
    for (s, k) in [("gauss:20", 5u64), ("veronese:2,8", 13)] {
        let v = spec(s);
        let cert = certify_with_provider(&v, k, &config, &mut AlwaysDeficient);
        assert!(!cert.verdict.is_certified(), "{s} k = {k}: {:?}", cert.verdict);
        let cert = certify_with_provider(&v, k, &config, &mut DeficientAbove { cutoff: k });
        assert_eq!(cert.verdict, Verdict::Inconclusive, "{s} k = {k}");
    }

    // Byte-identical reruns under fixed seed and prime.
    for (s, k) in [("sv:1,1/3,3", 2u64), ("segre:2,2,5", 5), ("gauss:20", 6), ("segre:1,1,1,1", 3)]
    {
        let v = spec(s);
        let once = CertificateRecord::from_certificate(&certify(&v, k, &config)).to_json_line();
        let twice = CertificateRecord::from_certificate(&certify(&v, k, &config)).to_json_line();
        assert_eq!(once, twice, "{s}");
    }
    let sweep_lines = || {
        max_k_sweep(&spec("veronese:2,4"), &config)
            .iter()
            .map(|c| CertificateRecord::from_certificate(c).to_json_line())
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(sweep_lines(), sweep_lines());

    println!("acceptance criterion 7: PASS");
}

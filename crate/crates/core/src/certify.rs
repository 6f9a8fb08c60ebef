//! The decision procedure.
//!
//! For a format and a rank `k`, [`certify`] tries a fixed sequence of
//! identifiability criteria, strongest conclusion first:
//!
//! 1. witness-backed tangent criteria (labels `IP1`, `IP3`, `IP5`) proving
//!    the variety is not weakly `j`-defective for any `j <= k`;
//! 2. a witness-backed criterion (`IPX`) proving `j`-identifiability;
//! 3. closed-form bounds (`IP4_CLOSED`, `E1_CLOSED` backed by published
//!    non-defectivity results; `II2_CLOSED` valid in any characteristic).
//!
//! The first success wins. If nothing applies, the rank of the level-`k`
//! Terracini matrix is probed directly: a deficit is reported as
//! [`Verdict::ObservedDefective`] (probabilistic evidence, never a
//! certificate), and otherwise the verdict is [`Verdict::Inconclusive`] with
//! every failed clause listed.

use crate::variety::{checked_binom, VarietySpec};
use crate::witness::{CachingWitnessProvider, Witness, WitnessConfig, WitnessProvider};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Labels of the supported criteria; these names are stable identifiers in
/// serialized certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    Ip1,
    Ip3,
    Ip5,
    Ipx,
    Ip4Closed,
    E1Closed,
    Ii2Closed,
    Ii1Bound,
}

impl TheoremId {
    pub fn label(self) -> &'static str {
        match self {
            TheoremId::Ip1 => "IP1",
            TheoremId::Ip3 => "IP3",
            TheoremId::Ip5 => "IP5",
            TheoremId::Ipx => "IPX",
            TheoremId::Ip4Closed => "IP4_CLOSED",
            TheoremId::E1Closed => "E1_CLOSED",
            TheoremId::Ii2Closed => "II2_CLOSED",
            TheoremId::Ii1Bound => "II1_BOUND",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// What class of evidence backs a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backing {
    /// An explicit full-rank witness computed in this run.
    Witness,
    /// A published non-defectivity result, no witness run.
    Literature,
    /// A characteristic-free counting bound.
    CharFree,
}

impl Backing {
    pub fn label(self) -> &'static str {
        match self {
            Backing::Witness => "witness",
            Backing::Literature => "literature",
            Backing::CharFree => "char-free",
        }
    }
}

impl fmt::Display for Backing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Strong conclusion: not weakly `j`-defective for every `j <= k`.
    CertifiedNotWeaklyDefective,
    /// `j`-identifiable for every `j <= k`.
    CertifiedIdentifiable,
    /// No criterion fired; nothing is claimed either way.
    Inconclusive,
    /// The level-`k` witness showed a rank deficit. Probabilistic evidence
    /// only: a deficit can in principle be an artifact of the point choice
    /// or the prime.
    ObservedDefective { level: u64, rank: u64, deficit: u64 },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(
            self,
            Verdict::CertifiedNotWeaklyDefective | Verdict::CertifiedIdentifiable
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::CertifiedNotWeaklyDefective => "certified_not_weakly_defective",
            Verdict::CertifiedIdentifiable => "certified_identifiable",
            Verdict::Inconclusive => "inconclusive",
            Verdict::ObservedDefective { .. } => "observed_defective",
        }
    }
}

/// Evidence attached to a certificate: the decisive witness if one ran, the
/// closed-form numbers consulted, and the evidence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub witness: Option<Witness>,
    pub bounds: BTreeMap<String, i64>,
    pub backing: Backing,
}

/// Witness policy plus mode switches for a certification run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertifyConfig {
    pub witness: WitnessConfig,
    /// Restrict to characteristic-free criteria; no witnesses are run and
    /// no literature-backed non-defectivity is assumed.
    pub char_free: bool,
}

/// The auditable outcome of a certification query.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub spec: VarietySpec,
    pub k: u64,
    pub verdict: Verdict,
    /// The criterion that fired, when the verdict is a certification.
    pub theorem: Option<TheoremId>,
    pub evidence: Evidence,
    pub reasons: Vec<String>,
    pub config: CertifyConfig,
}

fn clamp_i64(x: u128) -> i64 {
    i64::try_from(x).unwrap_or(i64::MAX)
}

fn diff_i64(a: u128, b: u128) -> i64 {
    if a >= b {
        clamp_i64(a - b)
    } else {
        -clamp_i64(b - a)
    }
}

/// Outcome of the shared tangent-space numeric condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericCheck {
    pub holds: bool,
    /// The probed level, `k + n - 1`.
    pub level: u64,
    /// Projective dimension of the level parameter space,
    /// `(k + n - 1)(n + 1) - 1`.
    pub param_dim: u64,
    /// Projective dimension of the ambient space.
    pub ambient_dim: u64,
    pub witness: Option<Witness>,
    pub reason: Option<String>,
}

/// The numeric core shared by the witness-backed criteria: the level
/// `k + n - 1` parameter count must sit strictly below the ambient
/// dimension, and a witness at that level must achieve the expected rank.
/// When the dimension count already fails, no witness is run.
pub fn numeric_condition<P: WitnessProvider>(
    spec: &VarietySpec,
    k: u64,
    provider: &mut P,
) -> NumericCheck {
    let a = spec.ambient();
    let n = a.variety_dim;
    let level = k.saturating_add(n).saturating_sub(1);
    let param_dim = level.saturating_mul(n + 1).saturating_sub(1);
    let ambient_dim = a.projective_dim();
    if param_dim >= ambient_dim {
        return NumericCheck {
            holds: false,
            level,
            param_dim,
            ambient_dim,
            witness: None,
            reason: Some(format!(
                "numeric condition fails at level {level}: parameter dimension {param_dim} \
                 is not below ambient dimension {ambient_dim}"
            )),
        };
    }
    let w = provider.witness(spec, level);
    if w.achieved() {
        NumericCheck {
            holds: true,
            level,
            param_dim,
            ambient_dim,
            reason: None,
            witness: Some(w),
        }
    } else {
        let reason = format!(
            "witness deficit at level {level}: rank {} < expected {} \
             (prime {}, seed {}, retries {})",
            w.rank, w.expected, w.prime, w.seed, w.retries_used
        );
        NumericCheck {
            holds: false,
            level,
            param_dim,
            ambient_dim,
            witness: Some(w),
            reason: Some(reason),
        }
    }
}

/// Internal result of one criterion: pass/fail plus everything needed to
/// assemble a certificate.
struct PathCheck {
    ok: bool,
    witness: Option<Witness>,
    bounds: BTreeMap<String, i64>,
    reasons: Vec<String>,
}

impl PathCheck {
    fn fail(reasons: Vec<String>) -> Self {
        PathCheck { ok: false, witness: None, bounds: BTreeMap::new(), reasons }
    }
}

fn numeric_path<P: WitnessProvider>(
    theorem: TheoremId,
    spec: &VarietySpec,
    k: u64,
    provider: &mut P,
    mut reasons: Vec<String>,
    hypotheses_hold: bool,
) -> PathCheck {
    let nc = numeric_condition(spec, k, provider);
    let mut bounds = BTreeMap::new();
    bounds.insert("level".to_string(), clamp_i64(nc.level.into()));
    bounds.insert("param_dim".to_string(), clamp_i64(nc.param_dim.into()));
    bounds.insert("ambient_dim".to_string(), clamp_i64(nc.ambient_dim.into()));
    if nc.holds && hypotheses_hold {
        let w = nc.witness.as_ref().expect("achieved witness");
        reasons.push(format!(
            "{theorem}: numeric condition holds at level {}: parameter dimension {} < \
             ambient dimension {}; witness rank {} achieved (prime {}, seed {})",
            nc.level, nc.param_dim, nc.ambient_dim, w.rank, w.prime, w.seed
        ));
    } else if let Some(r) = nc.reason {
        reasons.push(format!("{theorem}: {r}"));
    }
    PathCheck { ok: nc.holds && hypotheses_hold, witness: nc.witness, bounds, reasons }
}

fn check_ip1<P: WitnessProvider>(spec: &VarietySpec, k: u64, provider: &mut P) -> PathCheck {
    if spec.is_uniruled_by_lines() {
        return PathCheck::fail(vec![
            "IP1: inapplicable: the variety is uniruled by lines".to_string(),
        ]);
    }
    numeric_path(
        TheoremId::Ip1,
        spec,
        k,
        provider,
        vec!["IP1: the variety is not uniruled by lines".to_string()],
        true,
    )
}

fn check_ip3<P: WitnessProvider>(spec: &VarietySpec, k: u64, provider: &mut P) -> PathCheck {
    let Some((dims, _)) = spec.factors() else {
        return PathCheck::fail(vec![
            "IP3: wrong family: applies only to products of projective spaces".to_string(),
        ]);
    };
    if !spec.is_segre() {
        return PathCheck::fail(vec![
            "IP3: wrong family: applies only to products embedded in degree one".to_string(),
        ]);
    }
    let mut reasons = Vec::new();
    let unmatched: BTreeSet<u32> = dims
        .iter()
        .copied()
        .filter(|&n| dims.iter().filter(|&&m| m == n).count() < 2)
        .collect();
    for n in &unmatched {
        reasons.push(format!(
            "IP3: factor dimension {n} occurs only once; every dimension must appear at least twice"
        ));
    }
    numeric_path(TheoremId::Ip3, spec, k, provider, reasons, unmatched.is_empty())
}

fn check_ip5<P: WitnessProvider>(spec: &VarietySpec, k: u64, provider: &mut P) -> PathCheck {
    let Some((dims, degs)) = spec.factors() else {
        return PathCheck::fail(vec![
            "IP5: wrong family: applies only to product formats".to_string(),
        ]);
    };
    let mut reasons = Vec::new();
    for (i, (&n, &d)) in dims.iter().zip(degs).enumerate() {
        if d != 1 {
            continue;
        }
        let matched = dims
            .iter()
            .zip(degs)
            .enumerate()
            .any(|(j, (&nj, &dj))| j != i && dj == 1 && nj == n);
        if !matched {
            reasons.push(format!(
                "IP5: lone degree-1 factor {i} (dimension {n}) has no degree-1 partner of \
                 equal dimension"
            ));
        }
    }
    let hypotheses = reasons.is_empty();
    numeric_path(TheoremId::Ip5, spec, k, provider, reasons, hypotheses)
}

fn check_ipx<P: WitnessProvider>(spec: &VarietySpec, k: u64, provider: &mut P) -> PathCheck {
    if !spec.is_segre() {
        return PathCheck::fail(vec![
            "IPX: wrong family: applies only to products embedded in degree one".to_string(),
        ]);
    }
    numeric_path(TheoremId::Ipx, spec, k, provider, Vec::new(), true)
}

/// Largest `k` with `(k + s - 1)(s + 1) <= 2^s - 1`, the closed-form
/// identifiability bound for products of `s` projective lines; `None` below
/// the bound's range of validity (`s <= 4`).
pub fn closed_form_ip4(s: u32) -> Option<u64> {
    if s < 5 {
        return None;
    }
    let cap = 2u128.checked_pow(s)? - 1;
    let k = (cap / (u128::from(s) + 1)).saturating_sub(u128::from(s) - 1);
    Some(clamp_i64(k).max(0) as u64)
}

fn check_ip4(spec: &VarietySpec, k: u64) -> PathCheck {
    let Some((dims, _)) = spec.factors() else {
        return PathCheck::fail(vec![
            "IP4: inapplicable: requires a product of projective lines".to_string(),
        ]);
    };
    if !spec.is_segre() || dims.iter().any(|&n| n != 1) {
        return PathCheck::fail(vec![
            "IP4: inapplicable: requires a product of projective lines".to_string(),
        ]);
    }
    let s = dims.len() as u32;
    let Some(k_max) = closed_form_ip4(s) else {
        return PathCheck::fail(vec![format!(
            "IP4: inapplicable: needs at least 5 line factors, got {s}"
        )]);
    };
    let cap = 2u128.pow(s) - 1;
    let used = (u128::from(k) + u128::from(s) - 1) * (u128::from(s) + 1);
    let mut bounds = BTreeMap::new();
    bounds.insert("k_max".to_string(), clamp_i64(k_max.into()));
    bounds.insert("slack".to_string(), diff_i64(cap, used));
    let ok = k <= k_max;
    let reasons = if ok {
        vec![format!(
            "IP4: closed form accepts k = {k} <= k_max = {k_max} ((k+s-1)(s+1) <= 2^s - 1, \
             nonstrict); identifiability of line products backed by published \
             non-defectivity, no witness run"
        )]
    } else {
        vec![format!(
            "IP4: k = {k} exceeds the closed-form bound k_max = {k_max}"
        )]
    };
    PathCheck { ok, witness: None, bounds, reasons }
}

fn e1_parts(m: u64, s: u32) -> Option<(u128, u128, u128, u128)> {
    let mp1 = u128::from(m) + 1;
    let coords = mp1.checked_pow(s)?;
    let n = u128::from(m) * u128::from(s);
    let a = coords / (n + 1);
    Some((coords, n, a, a % mp1))
}

/// Closed-form identifiability test for a product of `s` copies of
/// projective `m`-space, `m >= 2`.
pub fn closed_form_e1(m: u64, s: u32, k: u64) -> bool {
    assert!(m >= 2, "the balanced-product closed form needs m >= 2");
    let Some((coords, n, a, eps)) = e1_parts(m, s) else {
        return false;
    };
    let k = u128::from(k);
    if k == 0 {
        return false;
    }
    let mut accept = if eps > 0 {
        k + n - 1 <= a - eps
    } else if (n + 1) * a == coords {
        k + n <= a // k + n - 1 <= a - 1
    } else {
        // Ambiguous middle case: take the conservative reading requiring the
        // k-dependent count to clear the ambient dimension outright.
        (k + n) * (n + 1) < coords && k + n - 1 <= a
    };
    if s == 3 {
        let m = u128::from(m);
        accept = accept || 3 * m * (k + 3 * m - 1) < (m + 1).pow(3);
    }
    accept
}

/// Largest `k` accepted by [`closed_form_e1`] (0 when it accepts nothing).
pub fn e1_k_max(m: u64, s: u32) -> u64 {
    assert!(m >= 2, "the balanced-product closed form needs m >= 2");
    let Some((_, n, a, eps)) = e1_parts(m, s) else {
        return 0;
    };
    // Both eps = 0 cases land on a - n: exact division lowers a by one but
    // gains the +1 slack back; inexact division keeps a yet loses the slack
    // to the conjunct count condition.
    let mut k_max = if eps > 0 { (a - eps + 1).saturating_sub(n) } else { a.saturating_sub(n) };
    if s == 3 {
        let m = u128::from(m);
        let k3 = (((m + 1).pow(3) - 1) / (3 * m)).saturating_sub(3 * m - 1);
        k_max = k_max.max(k3);
    }
    clamp_i64(k_max).max(0) as u64
}

fn check_e1(spec: &VarietySpec, k: u64) -> PathCheck {
    let Some((dims, _)) = spec.factors() else {
        return PathCheck::fail(vec![
            "E1: inapplicable: requires a product format".to_string(),
        ]);
    };
    if !spec.is_segre() {
        return PathCheck::fail(vec![
            "E1: inapplicable: requires a degree-one product".to_string(),
        ]);
    }
    let m = dims[0];
    if dims.iter().any(|&d| d != m) {
        return PathCheck::fail(vec![
            "E1: inapplicable: factor dimensions are not all equal".to_string(),
        ]);
    }
    if m < 2 {
        return PathCheck::fail(vec![
            "E1: inapplicable: needs factor dimension at least 2".to_string(),
        ]);
    }
    let m = u64::from(m);
    let s = dims.len() as u32;
    let (_, _, a, eps) = e1_parts(m, s).expect("validated format fits");
    let a_prime = if eps > 0 {
        a - eps
    } else if (u128::from(m) * u128::from(s) + 1) * a == (u128::from(m) + 1).pow(s) {
        a - 1
    } else {
        a
    };
    let k_max = e1_k_max(m, s);
    let ok = closed_form_e1(m, s, k);
    let mut bounds = BTreeMap::new();
    bounds.insert("a".to_string(), clamp_i64(a));
    bounds.insert("eps".to_string(), clamp_i64(eps));
    bounds.insert("a_prime".to_string(), clamp_i64(a_prime));
    bounds.insert("k_max".to_string(), clamp_i64(k_max.into()));
    let reasons = if ok {
        vec![format!(
            "E1: closed form accepts k = {k} <= k_max = {k_max} for the balanced product \
             (a = {a}, eps = {eps}); backed by published non-defectivity, no witness run"
        )]
    } else {
        vec![format!(
            "E1: k = {k} exceeds the closed-form bound k_max = {k_max} (a = {a}, eps = {eps})"
        )]
    };
    PathCheck { ok, witness: None, bounds, reasons }
}

/// Rejected degree splits for the characteristic-free bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitError {
    LengthMismatch,
    ZeroBase { index: usize },
    WrongSum { index: usize },
    NoResidual,
}

impl fmt::Display for SplitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitError::LengthMismatch => {
                write!(f, "split vectors must match the number of factors")
            }
            SplitError::ZeroBase { index } => {
                write!(f, "split base degree at factor {index} must be at least 1")
            }
            SplitError::WrongSum { index } => {
                write!(f, "split parts at factor {index} do not sum to the degree")
            }
            SplitError::NoResidual => {
                write!(f, "at least one residual degree must be positive")
            }
        }
    }
}

impl std::error::Error for SplitError {}

fn ii2_split_bounds(dims: &[u32], b: &[u32], c: &[u32]) -> Option<(i64, i64)> {
    let n: u128 = dims.iter().map(|&x| u128::from(x)).sum();
    let mut span: u128 = 1;
    let mut residual: u128 = 1;
    for ((&ni, &bi), &ci) in dims.iter().zip(b).zip(c) {
        let ni = u64::from(ni);
        span = span.checked_mul(u128::from(checked_binom(ni + u64::from(bi), ni)?))?;
        residual = residual.checked_mul(u128::from(checked_binom(ni + u64::from(ci), ni)?))?;
    }
    Some((diff_i64(span, n + 2), clamp_i64(residual)))
}

/// The characteristic-free split bound: writing each degree as
/// `d_i = b_i + c_i` with `b_i >= 1` and some `c_j > 0`, rank `k` is
/// identifiable whenever `k` is at most both the span bound
/// `prod binom(n_i + b_i, n_i) - n - 2` and the residual bound
/// `prod binom(n_i + c_i, n_i)`.
pub fn closed_form_ii2(
    dims: &[u32],
    degs: &[u32],
    b: &[u32],
    c: &[u32],
    k: u64,
) -> Result<bool, SplitError> {
    if dims.len() != degs.len() || b.len() != dims.len() || c.len() != dims.len() {
        return Err(SplitError::LengthMismatch);
    }
    for (index, ((&di, &bi), &ci)) in degs.iter().zip(b).zip(c).enumerate() {
        if bi == 0 {
            return Err(SplitError::ZeroBase { index });
        }
        if bi + ci != di {
            return Err(SplitError::WrongSum { index });
        }
    }
    if c.iter().all(|&ci| ci == 0) {
        return Err(SplitError::NoResidual);
    }
    let Some((span_bound, residual_bound)) = ii2_split_bounds(dims, b, c) else {
        return Ok(false);
    };
    let bound = span_bound.min(residual_bound);
    Ok(k >= 1 && i64::try_from(k).is_ok_and(|k| k <= bound))
}

/// The best split found for a format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ii2Best {
    pub k_max: i64,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub span_bound: i64,
    pub residual_bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ii2Failure {
    /// Every degree is 1, so no split has a positive residual.
    NoValidSplit,
    /// The split search space exceeds the enumeration budget.
    TooManySplits { combinations: u128 },
}

const II2_SPLIT_BUDGET: u128 = 1_000_000;

/// Maximizes the split bound of [`closed_form_ii2`] over all valid splits.
pub fn ii2_k_max(dims: &[u32], degs: &[u32]) -> Result<Ii2Best, Ii2Failure> {
    assert_eq!(dims.len(), degs.len());
    let combinations = degs
        .iter()
        .try_fold(1u128, |acc, &d| acc.checked_mul(u128::from(d)))
        .unwrap_or(u128::MAX);
    if combinations > II2_SPLIT_BUDGET {
        return Err(Ii2Failure::TooManySplits { combinations });
    }
    if degs.iter().all(|&d| d == 1) {
        return Err(Ii2Failure::NoValidSplit);
    }
    let mut b: Vec<u32> = vec![1; degs.len()];
    let mut best: Option<Ii2Best> = None;
    loop {
        if b.iter().zip(degs).any(|(&bi, &di)| bi < di) {
            let c: Vec<u32> = degs.iter().zip(&b).map(|(&di, &bi)| di - bi).collect();
            if let Some((span_bound, residual_bound)) = ii2_split_bounds(dims, &b, &c) {
                let k_max = span_bound.min(residual_bound);
                if best.as_ref().is_none_or(|x| k_max > x.k_max) {
                    best = Some(Ii2Best {
                        k_max,
                        b: b.clone(),
                        c,
                        span_bound,
                        residual_bound,
                    });
                }
            }
        }
        // Advance the mixed-radix counter over b_i in [1, d_i].
        let mut i = 0;
        loop {
            if i == b.len() {
                return Ok(best.expect("some degree exceeds 1"));
            }
            b[i] += 1;
            if b[i] <= degs[i] {
                break;
            }
            b[i] = 1;
            i += 1;
        }
    }
}

fn join_u32(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn check_ii2(spec: &VarietySpec, k: u64) -> PathCheck {
    let Some((dims, degs)) = spec.factors() else {
        return PathCheck::fail(vec![
            "II2: wrong family: split bounds apply only to product formats".to_string(),
        ]);
    };
    let best = match ii2_k_max(dims, degs) {
        Err(Ii2Failure::NoValidSplit) => {
            return PathCheck::fail(vec![
                "II2: inapplicable: every degree is 1, so no split leaves a positive residual"
                    .to_string(),
            ]);
        }
        Err(Ii2Failure::TooManySplits { combinations }) => {
            return PathCheck::fail(vec![format!(
                "II2: inapplicable: {combinations} degree splits exceed the enumeration budget"
            )]);
        }
        Ok(best) => best,
    };
    let mut bounds = BTreeMap::new();
    bounds.insert("k_max".to_string(), best.k_max);
    bounds.insert("span_bound".to_string(), best.span_bound);
    bounds.insert("residual_bound".to_string(), best.residual_bound);
    let ok = i64::try_from(k).is_ok_and(|k| k <= best.k_max);
    let split = format!("b=({}), c=({})", join_u32(&best.b), join_u32(&best.c));
    let reasons = if ok {
        vec![format!(
            "II2: split {split} certifies k = {k} <= {} in any characteristic",
            best.k_max
        )]
    } else {
        vec![format!(
            "II2: k = {k} exceeds the best split bound k_max = {} ({split})",
            best.k_max
        )]
    };
    PathCheck { ok, witness: None, bounds, reasons }
}

/// `min(h0R, dimV - n - 2)`, floored at zero: the rank bound from a line
/// bundle with `h0R` sections on a variety spanning a `dimV`-dimensional
/// space.
pub fn ii1_bound(h0_r: i64, dim_v: i64, n: i64) -> i64 {
    h0_r.min(dim_v.saturating_sub(n).saturating_sub(2)).max(0)
}

fn balance(dims: &[u32]) -> (u64, u64) {
    debug_assert!(dims.len() >= 2);
    let mut sorted: Vec<u64> = dims.iter().map(|&x| u64::from(x)).collect();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    let mut prod: u128 = 1;
    let mut sum: u128 = 0;
    for &a in &sorted[1..] {
        prod = prod.saturating_mul(u128::from(a) + 1);
        sum += u128::from(a);
    }
    (sorted[0], clamp_i64(prod.saturating_sub(sum)).max(0) as u64)
}

/// Whether a product format is unbalanced: after sorting dimensions
/// descending, `a_1 > prod_{i>=2}(a_i + 1) - sum_{i>=2} a_i`. Equality is
/// the "almost unbalanced" boundary, surfaced separately as a diagnostic.
pub fn unbalanced_check(dims: &[u32]) -> bool {
    let (a1, bound) = balance(dims);
    a1 > bound
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VeroneseStatus {
    NonDefective,
    KnownDefective { deficit: u64 },
}

/// The classical classification of defective Veronese secants: quadrics in
/// the band `2 <= k <= n` plus four sporadic cases, everything else
/// non-defective. Degrees below 2 are out of scope (`None`).
pub fn veronese_defectivity(n: u32, d: u32, k: u64) -> Option<VeroneseStatus> {
    if d < 2 {
        return None;
    }
    let n64 = u64::from(n);
    if d == 2 && k >= 2 && k <= n64 {
        let coords = checked_binom(n64 + 2, 2)?;
        let expected = (k * (n64 + 1)).min(coords);
        let actual = k * (n64 + 1) - k * (k - 1) / 2;
        return Some(VeroneseStatus::KnownDefective { deficit: expected - actual });
    }
    let sporadic = [(2u32, 4u32, 5u64), (3, 4, 9), (4, 3, 7), (4, 4, 14)];
    if sporadic.contains(&(n, d, k)) {
        Some(VeroneseStatus::KnownDefective { deficit: 1 })
    } else {
        Some(VeroneseStatus::NonDefective)
    }
}

fn diagnostics(spec: &VarietySpec, k: u64) -> Vec<String> {
    let mut out = Vec::new();
    if let Some((dims, _)) = spec.factors() {
        if spec.is_segre() && dims.len() >= 2 {
            let (a1, bound) = balance(dims);
            if a1 > bound {
                out.push(format!(
                    "diagnostic: the format is unbalanced: largest dimension {a1} exceeds \
                     the product bound {bound}; identifiability is known to fail in this regime"
                ));
            } else if a1 == bound {
                out.push(format!(
                    "diagnostic: the format is almost unbalanced: largest dimension {a1} \
                     equals the product bound {bound}; known non-identifiable formats sit \
                     on this boundary"
                ));
            }
        }
    }
    if let VarietySpec::GaussianMoment1D { d } = spec {
        let d = u64::from(*d);
        if 2 * (k + 1) < d && 3 * (k + 1) > d {
            out.push(format!(
                "diagnostic: the count condition 2(k+1) < d holds at k = {k}, d = {d}, but \
                 the tangent-space criterion requires 3(k+1)-1 < d; the gap is left \
                 uncertified by design"
            ));
        }
    }
    out
}

fn certified(
    spec: &VarietySpec,
    k: u64,
    config: &CertifyConfig,
    theorem: TheoremId,
    verdict: Verdict,
    backing: Backing,
    check: PathCheck,
) -> Certificate {
    debug_assert!(check.ok);
    Certificate {
        spec: spec.clone(),
        k,
        verdict,
        theorem: Some(theorem),
        evidence: Evidence { witness: check.witness, bounds: check.bounds, backing },
        reasons: check.reasons,
        config: config.clone(),
    }
}

fn inconclusive(
    spec: &VarietySpec,
    k: u64,
    config: &CertifyConfig,
    reasons: Vec<String>,
    witness: Option<Witness>,
    bounds: BTreeMap<String, i64>,
    backing: Backing,
) -> Certificate {
    Certificate {
        spec: spec.clone(),
        k,
        verdict: Verdict::Inconclusive,
        theorem: None,
        evidence: Evidence { witness, bounds, backing },
        reasons,
        config: config.clone(),
    }
}

/// Single-criterion entry point for the tangent-contact criterion.
pub fn certify_ip1<P: WitnessProvider>(
    spec: &VarietySpec,
    k: u64,
    config: &CertifyConfig,
    provider: &mut P,
) -> Certificate {
    let check = check_ip1(spec, k, provider);
    if check.ok {
        certified(
            spec,
            k,
            config,
            TheoremId::Ip1,
            Verdict::CertifiedNotWeaklyDefective,
            Backing::Witness,
            check,
        )
    } else {
        inconclusive(spec, k, config, check.reasons, check.witness, check.bounds, Backing::Witness)
    }
}

/// Single-criterion entry point for the matched-dimensions product
/// criterion.
pub fn certify_ip3<P: WitnessProvider>(
    spec: &VarietySpec,
    k: u64,
    config: &CertifyConfig,
    provider: &mut P,
) -> Certificate {
    let check = check_ip3(spec, k, provider);
    if check.ok {
        certified(
            spec,
            k,
            config,
            TheoremId::Ip3,
            Verdict::CertifiedNotWeaklyDefective,
            Backing::Witness,
            check,
        )
    } else {
        inconclusive(spec, k, config, check.reasons, check.witness, check.bounds, Backing::Witness)
    }
}

/// Single-criterion entry point for the matched degree-1 factors criterion.
pub fn certify_ip5<P: WitnessProvider>(
    spec: &VarietySpec,
    k: u64,
    config: &CertifyConfig,
    provider: &mut P,
) -> Certificate {
    let check = check_ip5(spec, k, provider);
    if check.ok {
        certified(
            spec,
            k,
            config,
            TheoremId::Ip5,
            Verdict::CertifiedNotWeaklyDefective,
            Backing::Witness,
            check,
        )
    } else {
        inconclusive(spec, k, config, check.reasons, check.witness, check.bounds, Backing::Witness)
    }
}

/// Single-criterion entry point for the unconditional product
/// identifiability criterion.
pub fn certify_ipx<P: WitnessProvider>(
    spec: &VarietySpec,
    k: u64,
    config: &CertifyConfig,
    provider: &mut P,
) -> Certificate {
    let check = check_ipx(spec, k, provider);
    if check.ok {
        certified(
            spec,
            k,
            config,
            TheoremId::Ipx,
            Verdict::CertifiedIdentifiable,
            Backing::Witness,
            check,
        )
    } else {
        inconclusive(spec, k, config, check.reasons, check.witness, check.bounds, Backing::Witness)
    }
}

fn certify_char_free(spec: &VarietySpec, k: u64, config: &CertifyConfig) -> Certificate {
    let mode = "char-free mode: witness-based and literature-backed criteria are disabled"
        .to_string();
    let check = check_ii2(spec, k);
    if check.ok {
        let mut cert = certified(
            spec,
            k,
            config,
            TheoremId::Ii2Closed,
            Verdict::CertifiedIdentifiable,
            Backing::CharFree,
            check,
        );
        cert.reasons.insert(0, mode);
        return cert;
    }
    let mut reasons = vec![mode];
    reasons.extend(check.reasons);
    inconclusive(spec, k, config, reasons, None, check.bounds, Backing::CharFree)
}

/// Certifies with an externally supplied witness provider. Shared providers
/// make repeated queries on the same format incremental.
pub fn certify_with_provider<P: WitnessProvider>(
    spec: &VarietySpec,
    k: u64,
    config: &CertifyConfig,
    provider: &mut P,
) -> Certificate {
    assert!(k >= 1, "rank k must be at least 1");
    if config.char_free {
        return certify_char_free(spec, k, config);
    }
    let mut reasons: Vec<String> = Vec::new();

    let check = check_ip1(spec, k, provider);
    if check.ok {
        return certified(
            spec,
            k,
            config,
            TheoremId::Ip1,
            Verdict::CertifiedNotWeaklyDefective,
            Backing::Witness,
            check,
        );
    }
    reasons.extend(check.reasons);

    match spec.factors() {
        Some(_) if spec.is_segre() => {
            let check = check_ip3(spec, k, provider);
            if check.ok {
                return certified(
                    spec,
                    k,
                    config,
                    TheoremId::Ip3,
                    Verdict::CertifiedNotWeaklyDefective,
                    Backing::Witness,
                    check,
                );
            }
            reasons.extend(check.reasons);
            let check = check_ipx(spec, k, provider);
            if check.ok {
                return certified(
                    spec,
                    k,
                    config,
                    TheoremId::Ipx,
                    Verdict::CertifiedIdentifiable,
                    Backing::Witness,
                    check,
                );
            }
            reasons.extend(check.reasons);
        }
        Some(_) => {
            let check = check_ip5(spec, k, provider);
            if check.ok {
                return certified(
                    spec,
                    k,
                    config,
                    TheoremId::Ip5,
                    Verdict::CertifiedNotWeaklyDefective,
                    Backing::Witness,
                    check,
                );
            }
            reasons.extend(check.reasons);
        }
        None => {
            reasons.push(
                "IP3/IP5/IPX: wrong family: the product-format criteria do not apply to the \
                 moment variety"
                    .to_string(),
            );
        }
    }

    let check = check_ip4(spec, k);
    if check.ok {
        return certified(
            spec,
            k,
            config,
            TheoremId::Ip4Closed,
            Verdict::CertifiedIdentifiable,
            Backing::Literature,
            check,
        );
    }
    reasons.extend(check.reasons);

    let check = check_e1(spec, k);
    if check.ok {
        return certified(
            spec,
            k,
            config,
            TheoremId::E1Closed,
            Verdict::CertifiedIdentifiable,
            Backing::Literature,
            check,
        );
    }
    reasons.extend(check.reasons);

    let check = check_ii2(spec, k);
    if check.ok {
        return certified(
            spec,
            k,
            config,
            TheoremId::Ii2Closed,
            Verdict::CertifiedIdentifiable,
            Backing::CharFree,
            check,
        );
    }
    reasons.extend(check.reasons);

    // No criterion fired; probe the requested level directly.
    let w = provider.witness(spec, k);
    if !w.achieved() {
        let deficit = w.deficit();
        reasons.push(format!(
            "observed rank deficit at level {k}: rank {} < expected {} (prime {}, seed {}); \
             probabilistic evidence only — deficits are never certified",
            w.rank, w.expected, w.prime, w.seed
        ));
        let verdict = Verdict::ObservedDefective { level: k, rank: w.rank, deficit };
        return Certificate {
            spec: spec.clone(),
            k,
            verdict,
            theorem: None,
            evidence: Evidence {
                witness: Some(w),
                bounds: BTreeMap::new(),
                backing: Backing::Witness,
            },
            reasons,
            config: config.clone(),
        };
    }
    reasons.extend(diagnostics(spec, k));
    reasons.push(format!(
        "witness at level {k}: rank {} meets the expected secant dimension; no deficit \
         observed and no identifiability criterion applied",
        w.rank
    ));
    inconclusive(spec, k, config, reasons, Some(w), BTreeMap::new(), Backing::Witness)
}

/// Decides identifiability of generic rank-`k` decompositions for the
/// format, producing an auditable certificate.
pub fn certify(spec: &VarietySpec, k: u64, config: &CertifyConfig) -> Certificate {
    let mut provider = CachingWitnessProvider::new(config.witness.clone());
    certify_with_provider(spec, k, config, &mut provider)
}

/// Sweep variant of [`certify`]: certificates for `k = 1, 2, ...` up to one
/// past the first rank where every criterion fails, with downward monotone
/// consistency enforced (a certified entry's conclusion covers every smaller
/// rank).
pub fn max_k_sweep(spec: &VarietySpec, config: &CertifyConfig) -> Vec<Certificate> {
    let mut provider = CachingWitnessProvider::new(config.witness.clone());
    max_k_sweep_with_provider(spec, config, &mut provider)
}

pub fn max_k_sweep_with_provider<P: WitnessProvider>(
    spec: &VarietySpec,
    config: &CertifyConfig,
    provider: &mut P,
) -> Vec<Certificate> {
    let mut certs = Vec::new();
    let mut k = 1;
    loop {
        let cert = certify_with_provider(spec, k, config, provider);
        let ok = cert.verdict.is_certified();
        certs.push(cert);
        if !ok {
            certs.push(certify_with_provider(spec, k + 1, config, provider));
            break;
        }
        k += 1;
    }
    for i in (1..certs.len()).rev() {
        if certs[i].verdict.is_certified() && !certs[i - 1].verdict.is_certified() {
            let mut filled = certs[i].clone();
            filled.k = certs[i - 1].k;
            filled.reasons = vec![format!(
                "implied by the certificate at k = {}: its conclusion covers every rank j <= {}",
                certs[i].k, certs[i].k
            )];
            certs[i - 1] = filled;
        }
    }
    certs
}

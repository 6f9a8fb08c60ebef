//! Monomial embeddings, tangent frames, and Gaussian moment vectors.
//!
//! Points live in a fixed affine chart: each projective factor is given by a
//! vector `(1, a_1, ..., a_n)`. All formulas are ring arithmetic over a
//! [`Field`] context, so the same code produces witness rows mod `p`, exact
//! rational rows for cross-checks, and dual-number jets for validating the
//! hand-coded derivatives.

use crate::field::{Dual, DualElem, Field, SampleField};
use crate::variety::VarietySpec;
use rand::Rng;

/// A parameter-space point for a format.
#[derive(Clone, Debug, PartialEq)]
pub enum ParameterPoint<E> {
    /// One affine chart vector per projective factor, each of length
    /// `n_i + 1` with leading coordinate 1.
    MultiAffine { factors: Vec<Vec<E>> },
    /// Mean and variance of a univariate Gaussian.
    GaussianMoment { mean: E, variance: E },
}

/// Exponent vectors of the degree-`d` monomials in `n + 1` variables, in
/// lexicographically decreasing order. The first entry is `x_0^d`, so a
/// chart vector `(1, a_1, ..., a_n)` always embeds with leading coordinate 1.
pub fn monomial_exponents(n: u32, d: u32) -> Vec<Vec<u32>> {
    fn rec(vars_left: u32, deg_left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars_left == 0 {
            current.push(deg_left);
            out.push(current.clone());
            current.pop();
            return;
        }
        for e in (0..=deg_left).rev() {
            current.push(e);
            rec(vars_left - 1, deg_left - e, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n as usize + 1), &mut out);
    out
}

fn powers<F: Field>(field: &F, x: &F::Elem, d: u32) -> Vec<F::Elem> {
    let mut pows = Vec::with_capacity(d as usize + 1);
    pows.push(field.one());
    for _ in 0..d {
        let last = pows.last().unwrap();
        pows.push(field.mul(last, x));
    }
    pows
}

/// Values of all degree-`d` monomials at a chart vector.
fn mono_vector<F: Field>(field: &F, chart: &[F::Elem], d: u32) -> Vec<F::Elem> {
    let n = (chart.len() - 1) as u32;
    let pows: Vec<Vec<F::Elem>> = chart.iter().map(|x| powers(field, x, d)).collect();
    monomial_exponents(n, d)
        .iter()
        .map(|expo| {
            expo.iter()
                .enumerate()
                .fold(field.one(), |acc, (v, &e)| field.mul(&acc, &pows[v][e as usize]))
        })
        .collect()
}

/// Derivative of [`mono_vector`] with respect to chart coordinate `var`
/// (which must not be the chart's leading 1).
fn mono_vector_deriv<F: Field>(field: &F, chart: &[F::Elem], d: u32, var: usize) -> Vec<F::Elem> {
    assert!(var >= 1 && var < chart.len());
    let n = (chart.len() - 1) as u32;
    let pows: Vec<Vec<F::Elem>> = chart.iter().map(|x| powers(field, x, d)).collect();
    monomial_exponents(n, d)
        .iter()
        .map(|expo| {
            let e = expo[var];
            if e == 0 {
                return field.zero();
            }
            let rest = expo.iter().enumerate().fold(field.one(), |acc, (v, &ev)| {
                let pw = if v == var { ev as usize - 1 } else { ev as usize };
                field.mul(&acc, &pows[v][pw])
            });
            field.scale(u64::from(e), &rest)
        })
        .collect()
}

/// Kronecker product: `out[i * v.len() + j] = u[i] * v[j]`.
pub fn kron<F: Field>(field: &F, u: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(field.mul(a, b));
        }
    }
    out
}

/// Moments `m_0, ..., m_d` of a Gaussian with the given mean and variance,
/// by the recursion `m_j = mean * m_{j-1} + (j-1) * variance * m_{j-2}`.
pub fn gaussian_moments<F: Field>(
    field: &F,
    mean: &F::Elem,
    variance: &F::Elem,
    d: u32,
) -> Vec<F::Elem> {
    let mut m = Vec::with_capacity(d as usize + 1);
    m.push(field.one());
    if d >= 1 {
        m.push(mean.clone());
    }
    for j in 2..=d as usize {
        let a = field.mul(mean, &m[j - 1]);
        let b = field.mul(variance, &m[j - 2]);
        m.push(field.add(&a, &field.scale((j - 1) as u64, &b)));
    }
    m
}

fn gaussian_frame<F: Field>(
    field: &F,
    mean: &F::Elem,
    variance: &F::Elem,
    d: u32,
) -> Vec<Vec<F::Elem>> {
    let m = gaussian_moments(field, mean, variance, d);
    // d(m_j)/d(mean) and d(m_j)/d(variance), by differentiating the moment
    // recursion term by term.
    let mut u = vec![field.zero(), field.one()];
    let mut v = vec![field.zero(), field.zero()];
    for j in 2..=d as usize {
        let du = field.add(
            &m[j - 1],
            &field.add(
                &field.mul(mean, &u[j - 1]),
                &field.scale((j - 1) as u64, &field.mul(variance, &u[j - 2])),
            ),
        );
        u.push(du);
        let dv = field.add(
            &field.mul(mean, &v[j - 1]),
            &field.scale(
                (j - 1) as u64,
                &field.add(&m[j - 2], &field.mul(variance, &v[j - 2])),
            ),
        );
        v.push(dv);
    }
    vec![m, u, v]
}

fn multi_affine<'a, E>(spec: &VarietySpec, point: &'a ParameterPoint<E>) -> &'a [Vec<E>] {
    let ParameterPoint::MultiAffine { factors } = point else {
        panic!("point kind does not match format");
    };
    let (dims, _) = spec.factors().expect("product format");
    assert_eq!(factors.len(), dims.len(), "factor count mismatch");
    for (f, &n) in factors.iter().zip(dims) {
        assert_eq!(f.len(), n as usize + 1, "chart length mismatch");
    }
    factors
}

/// Coordinates of the embedded point, of length `spec.ambient().coords`.
/// Factor 0 is the outermost Kronecker factor.
pub fn embed<F: Field>(
    spec: &VarietySpec,
    field: &F,
    point: &ParameterPoint<F::Elem>,
) -> Vec<F::Elem> {
    match spec {
        VarietySpec::SegreVeronese { degs, .. } => {
            let factors = multi_affine(spec, point);
            let mut out = vec![field.one()];
            for (chart, &d) in factors.iter().zip(degs) {
                out = kron(field, &out, &mono_vector(field, chart, d));
            }
            out
        }
        VarietySpec::GaussianMoment1D { d } => {
            let ParameterPoint::GaussianMoment { mean, variance } = point else {
                panic!("point kind does not match format");
            };
            gaussian_moments(field, mean, variance, *d)
        }
    }
}

/// Basis of the affine tangent space at the embedded point, as rows of an
/// `(n + 1) x coords` matrix: the embedding itself, then the partial
/// derivative along every chart coordinate (factor by factor for products;
/// mean then variance for the moment variety).
pub fn tangent_frame<F: Field>(
    spec: &VarietySpec,
    field: &F,
    point: &ParameterPoint<F::Elem>,
) -> Vec<Vec<F::Elem>> {
    match spec {
        VarietySpec::SegreVeronese { degs, .. } => {
            let factors = multi_affine(spec, point);
            let values: Vec<Vec<F::Elem>> = factors
                .iter()
                .zip(degs)
                .map(|(chart, &d)| mono_vector(field, chart, d))
                .collect();
            let assemble = |replace: Option<(usize, &Vec<F::Elem>)>| -> Vec<F::Elem> {
                let mut out = vec![field.one()];
                for (i, value) in values.iter().enumerate() {
                    let part = match &replace {
                        Some((fi, deriv)) if *fi == i => deriv,
                        _ => value,
                    };
                    out = kron(field, &out, part);
                }
                out
            };
            let mut rows = vec![assemble(None)];
            for (i, (chart, &d)) in factors.iter().zip(degs).enumerate() {
                for var in 1..chart.len() {
                    let deriv = mono_vector_deriv(field, chart, d, var);
                    rows.push(assemble(Some((i, &deriv))));
                }
            }
            rows
        }
        VarietySpec::GaussianMoment1D { d } => {
            let ParameterPoint::GaussianMoment { mean, variance } = point else {
                panic!("point kind does not match format");
            };
            gaussian_frame(field, mean, variance, *d)
        }
    }
}

/// Samples a parameter point with independent uniform chart coordinates.
pub fn sample_point<F: SampleField, R: Rng>(
    spec: &VarietySpec,
    field: &F,
    rng: &mut R,
) -> ParameterPoint<F::Elem> {
    match spec {
        VarietySpec::SegreVeronese { dims, .. } => ParameterPoint::MultiAffine {
            factors: dims
                .iter()
                .map(|&n| {
                    let mut chart = Vec::with_capacity(n as usize + 1);
                    chart.push(field.one());
                    for _ in 0..n {
                        chart.push(field.sample(rng));
                    }
                    chart
                })
                .collect(),
        },
        VarietySpec::GaussianMoment1D { .. } => ParameterPoint::GaussianMoment {
            mean: field.sample(rng),
            variance: field.sample(rng),
        },
    }
}

/// Validates the tangent frame at `point` against dual-number jets: for every
/// chart direction, the embedding is recomputed with that coordinate
/// perturbed to first order, and the derivative part must reproduce the
/// corresponding frame row (and the value part the embedding row).
pub fn jet_check<F: Field + Clone>(
    spec: &VarietySpec,
    field: &F,
    point: &ParameterPoint<F::Elem>,
) -> bool {
    let frame = tangent_frame(spec, field, point);
    let dual = Dual::new(field.clone());
    let directions: usize = frame.len() - 1;
    for dir in 0..directions {
        let dual_point: ParameterPoint<DualElem<F::Elem>> = match point {
            ParameterPoint::MultiAffine { factors } => {
                // Direction index `dir` walks the non-leading chart
                // coordinates factor by factor, matching the frame layout.
                let mut remaining = dir;
                let mut lifted = Vec::with_capacity(factors.len());
                for chart in factors {
                    let coords = chart.len() - 1;
                    let lifted_chart: Vec<DualElem<F::Elem>> = chart
                        .iter()
                        .enumerate()
                        .map(|(i, x)| {
                            if i >= 1 && remaining < coords && i - 1 == remaining {
                                dual.variable(x.clone())
                            } else {
                                dual.constant(x.clone())
                            }
                        })
                        .collect();
                    if remaining < coords {
                        remaining = usize::MAX; // direction consumed
                    } else {
                        remaining -= coords;
                    }
                    lifted.push(lifted_chart);
                }
                ParameterPoint::MultiAffine { factors: lifted }
            }
            ParameterPoint::GaussianMoment { mean, variance } => {
                let (m, v) = if dir == 0 {
                    (dual.variable(mean.clone()), dual.constant(variance.clone()))
                } else {
                    (dual.constant(mean.clone()), dual.variable(variance.clone()))
                };
                ParameterPoint::GaussianMoment { mean: m, variance: v }
            }
        };
        let jet = embed(spec, &dual, &dual_point);
        let values: Vec<F::Elem> = jet.iter().map(|e| e.val.clone()).collect();
        let derivs: Vec<F::Elem> = jet.iter().map(|e| e.der.clone()).collect();
        if values != frame[0] || derivs != frame[dir + 1] {
            return false;
        }
    }
    true
}

//! Exact identifiability certificates for low-rank tensor formats.
//!
//! Given a tensor format (a Segre, Veronese, or mixed Segre–Veronese
//! embedding, or the moment variety of a one-dimensional Gaussian) and a rank
//! `k`, this crate decides whether a generic rank-`k` decomposition is
//! identifiable, and produces an auditable certificate for the answer.
//!
//! The workhorse is Terracini's lemma: the dimension of the `k`-th secant
//! variety equals the rank of a stacked matrix of tangent frames at `k`
//! generic points. That rank is computed exactly over a large prime field at
//! pseudorandomly sampled points. Because specializing a point configuration
//! and reducing mod `p` can only drop the rank, a full-rank witness is a
//! rigorous proof of non-defectivity in characteristic zero — the one-sided
//! soundness this crate's certificates rest on. Witnessed rank deficits, by
//! contrast, are only probabilistic evidence and are reported as
//! observations, never as certificates.
//!
//! Module map:
//! - [`variety`]: format specifications, parsing, ambient dimensions.
//! - [`embedding`]: monomial embeddings, tangent frames, moment vectors.
//! - [`field`] / [`linalg`] / [`primes`]: the exact arithmetic stack.
//! - [`witness`]: secant-dimension witnesses with caching and retries.
//! - [`certify`]: the decision procedure and closed-form criteria.
//! - [`report`]: stable serialization of certificates.

pub mod certify;
pub mod embedding;
pub mod field;
pub mod linalg;
pub mod primes;
pub mod report;
pub mod variety;
pub mod witness;

pub use certify::{certify, max_k_sweep, Certificate, CertifyConfig, TheoremId, Verdict};
pub use report::{render_text, CertificateRecord};
pub use variety::{parse_spec, AmbientInfo, SpecError, VarietySpec};
pub use witness::{secant_dim_witness, Witness, WitnessConfig};

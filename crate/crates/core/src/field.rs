//! Arithmetic contexts for embeddings and tangent frames.
//!
//! The embedding formulas only need ring operations (no division), so they
//! are written against the small [`Field`] context trait and run unchanged
//! over a large prime field (the witness path), over exact rationals (the
//! cross-check path), and over dual numbers (the derivative validator).
//! Elements carry their arithmetic context externally; a context value is
//! cheap to copy around and two contexts of the same type with different
//! parameters (e.g. different moduli) must never be mixed on one element.

use crate::primes::{self, validate_witness_prime, PrimeError};
use num::{BigInt, BigRational, One, Zero};
use rand::Rng;

/// Ring-like arithmetic context. `Elem` is the element representation.
pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    // Value constructors take &self because elements only make sense
    // relative to a field instance (the modulus).
    #[allow(clippy::wrong_self_convention)]
    fn from_u64(&self, x: u64) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// Multiplies by a small nonnegative integer (derivative exponents and
    /// recursion coefficients).
    fn scale(&self, c: u64, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_u64(c), a)
    }
}

/// Contexts that can sample uniform elements for generic point
/// configurations.
pub trait SampleField: Field {
    fn sample<R: Rng>(&self, rng: &mut R) -> Self::Elem;
}

/// The prime field `F_p` for a validated witness prime `p` in `[2^31, 2^62)`.
/// Elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, PrimeError> {
        validate_witness_prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(&a, &self.neg(b))
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        primes::pow_mod(base, exp, self.p)
    }

    /// Multiplicative inverse of a nonzero residue (via Fermat).
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        debug_assert!(*a < self.p && *b < self.p);
        // p < 2^62, so the sum fits in u64 without overflow.
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        primes::mul_mod(*a, *b, self.p)
    }

    fn from_u64(&self, x: u64) -> u64 {
        x % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

impl SampleField for PrimeField {
    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// Exact rational arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// Half-width of the integer box rational points are sampled from; generic
/// behaviour only needs distinct coordinates, and small integers keep the
/// exact elimination fast.
pub const RATIONAL_SAMPLE_BOX: i64 = 1024;

impl Rationals {
    // Mirrors Field::from_u64: value constructors are scoped to a field
    // instance so generic call sites read uniformly.
    #[allow(clippy::wrong_self_convention)]
    pub fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn from_u64(&self, x: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl SampleField for Rationals {
    fn sample<R: Rng>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOX..=RATIONAL_SAMPLE_BOX))
    }
}

/// A dual number `val + der·t` with `t^2 = 0`: products propagate first
/// derivatives exactly. Used to validate tangent frames against the plain
/// embedding, not in certification itself.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElem<E> {
    pub val: E,
    pub der: E,
}

/// Dual-number context over a base field.
#[derive(Clone, Copy, Debug)]
pub struct Dual<F: Field> {
    pub base: F,
}

impl<F: Field> Dual<F> {
    pub fn new(base: F) -> Self {
        Dual { base }
    }

    /// Lifts a constant (derivative zero).
    pub fn constant(&self, val: F::Elem) -> DualElem<F::Elem> {
        DualElem { val, der: self.base.zero() }
    }

    /// Lifts the perturbed variable `val + t`.
    pub fn variable(&self, val: F::Elem) -> DualElem<F::Elem> {
        DualElem { val, der: self.base.one() }
    }
}

impl<F: Field> Field for Dual<F> {
    type Elem = DualElem<F::Elem>;

    fn zero(&self) -> Self::Elem {
        self.constant(self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        DualElem {
            val: self.base.add(&a.val, &b.val),
            der: self.base.add(&a.der, &b.der),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        DualElem {
            val: self.base.mul(&a.val, &b.val),
            der: self.base.add(
                &self.base.mul(&a.val, &b.der),
                &self.base.mul(&a.der, &b.val),
            ),
        }
    }

    fn from_u64(&self, x: u64) -> Self::Elem {
        self.constant(self.base.from_u64(x))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.val) && self.base.is_zero(&a.der)
    }
}

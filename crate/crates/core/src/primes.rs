//! Primality testing and the published witness primes.
//!
//! Rank witnesses are computed over a fixed large prime field. The default
//! modulus is the Mersenne prime `2^61 - 1`; retries draw fresh primes from
//! [`WITNESS_PRIMES`]. All witness primes must lie in `[2^31, 2^62)` so the
//! elimination kernel's delayed-reduction bounds hold.

use std::fmt;

/// Default witness prime, the Mersenne prime `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = 2_305_843_009_213_693_951;

/// Published primes used for witness computations and retries, in retry order.
pub const WITNESS_PRIMES: [u64; 6] = [
    DEFAULT_PRIME,             // 2^61 - 1
    2_305_843_009_213_693_967, // 2^61 + 15
    2_305_843_009_213_693_973, // 2^61 + 21
    2_305_843_009_213_694_009, // 2^61 + 57
    2_305_843_009_213_694_017, // 2^61 + 65
    2_305_843_009_213_694_087, // 2^61 + 135
];

/// Smallest admissible witness prime.
pub const MIN_PRIME: u64 = 1 << 31;

/// Exclusive upper bound for witness primes.
pub const MAX_PRIME_EXCLUSIVE: u64 = 1 << 62;

/// A modulus rejected at configuration time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeError {
    /// The value failed the primality test.
    NotPrime(u64),
    /// The value is prime but outside `[2^31, 2^62)`.
    OutOfRange(u64),
}

impl fmt::Display for PrimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeError::NotPrime(p) => write!(f, "{p} is not prime"),
            PrimeError::OutOfRange(p) => {
                write!(f, "prime {p} is outside the admissible range [2^31, 2^62)")
            }
        }
    }
}

impl std::error::Error for PrimeError {}

/// Validates a witness modulus: probable-prime and within `[2^31, 2^62)`.
pub fn validate_witness_prime(p: u64) -> Result<(), PrimeError> {
    if !is_probable_prime(p) {
        return Err(PrimeError::NotPrime(p));
    }
    if !(MIN_PRIME..MAX_PRIME_EXCLUSIVE).contains(&p) {
        return Err(PrimeError::OutOfRange(p));
    }
    Ok(())
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller–Rabin with a base set that is deterministic for all `u64` inputs.
pub fn is_probable_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Samples a uniform probable prime in `[2^60, 2^61)`. Test utility for
/// multi-prime agreement checks.
pub fn random_prime_61(rng: &mut impl rand::Rng) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 60)..(1u64 << 61)) | 1;
        if is_probable_prime(candidate) {
            return candidate;
        }
    }
}

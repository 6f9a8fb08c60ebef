//! Rank computation: an incremental echelon form over a prime field with
//! delayed modular reduction (the hot path), and a fraction-free exact
//! rational elimination used for cross-checks.

use crate::field::PrimeField;
use num::{BigInt, BigRational, Integer, One, Zero};

/// Number of eliminations allowed between full modular reductions.
///
/// Accumulator entries start below `2^62` after a reduction, and each
/// elimination adds a product `f * (p - b)` with both factors below
/// `p < 2^62`. After `B` pending eliminations an entry is below
/// `2^62 + B * 2^124`, so `B = 15` keeps everything under `2^128`.
const REDUCTION_BATCH: usize = 15;

/// Incremental row echelon form over `F_p`.
///
/// Rows are stored in arrival order with the pivot entry normalized to 1.
/// Every stored row was fully reduced against the rows stored before it, so
/// an incoming row can be eliminated against stored rows in arrival order:
/// once a pivot column is cleared, later stored rows are zero there and
/// never reintroduce it.
pub struct EchelonBuilder {
    field: PrimeField,
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl EchelonBuilder {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        EchelonBuilder { field, cols, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Pivot columns of the stored basis, in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut cols = self.pivots.clone();
        cols.sort_unstable();
        cols
    }

    /// Reduces `row` against the stored basis and absorbs the remainder if it
    /// is nonzero. Returns `true` when the rank grew.
    pub fn add_row(&mut self, row: &[u64]) -> bool {
        assert_eq!(row.len(), self.cols, "row length does not match builder");
        let p = self.field.modulus();
        let p128 = p as u128;
        let mut acc: Vec<u128> = row.iter().map(|&x| (x % p) as u128).collect();
        let mut pending = 0usize;
        for (basis, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = (acc[pc] % p128) as u64;
            acc[pc] = 0;
            if f == 0 {
                continue;
            }
            if pending == REDUCTION_BATCH {
                for a in acc.iter_mut() {
                    *a %= p128;
                }
                pending = 0;
            }
            // acc -= f * basis (mod p), as additions: basis entries are in
            // [0, p) and zero before pc, so only the tail moves.
            let f128 = f as u128;
            for (a, &b) in acc[pc + 1..].iter_mut().zip(&basis[pc + 1..]) {
                *a += f128 * (p - b) as u128;
            }
            pending += 1;
        }
        let reduced: Vec<u64> = acc.iter().map(|&a| (a % p128) as u64).collect();
        let Some(pivot) = reduced.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(reduced[pivot]);
        let normalized = reduced
            .iter()
            .map(|&x| crate::primes::mul_mod(x, inv, p))
            .collect();
        self.pivots.push(pivot);
        self.rows.push(normalized);
        true
    }
}

/// Rank of a row-major matrix over `F_p`. Rows must share a common length.
pub fn rank_mod_p(field: PrimeField, rows: &[Vec<u64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut builder = EchelonBuilder::new(field, cols);
    for row in rows {
        builder.add_row(row);
    }
    builder.rank()
}

/// Exact rank over the rationals, via fraction-free (Bareiss) elimination on
/// the integer matrix obtained by clearing each row's denominators.
pub fn rank_exact_rational(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter().map(|x| x.numer() * &lcm / x.denom()).collect()
        })
        .collect();
    bareiss_rank(&mut m)
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let Some(pr) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, pr);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "fraction-free division must be exact");
                m[i][j] = q;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

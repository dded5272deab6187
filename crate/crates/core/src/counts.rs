//! Pair-count tables N[k][t]: how many pairs (c, d) in Z_(2^(m-k-1))² satisfy
//!
//! ```text
//! g^(2^(k+1)·c + t) + g^(2^(k+1)·d + 2^k + t) ≡ 1  (mod p)
//! ```
//!
//! These integers are the coefficients of the period products one level up:
//! the product of the two level-(k+1) periods refining T[k,r] expands into
//! Σ_s N[k][(r-s) mod 2^k] · T[k,s]. Two facts shape the representation:
//! the count depends on t only through t mod 2^k (shifting both c and d by l
//! adds 2^(k+1)·l to both exponents; swapping c' = d, d' = c - 1 moves t by
//! 2^k), and each c admits at most one matching d, so N[k][t] ≤ 2^(m-k-1).

use crate::ntheory::{DlogTable, FermatContext};
use alloc::vec::Vec;

/// Counts for one level k, stored for canonical t in Z_(2^k) only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    k: u32,
    values: Vec<u64>,
}

impl CountTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    /// N[k][t] for arbitrary t, reduced mod 2^k.
    pub fn get(&self, t: u64) -> u64 {
        self.values[(t & (self.values.len() as u64 - 1)) as usize]
    }

    /// Canonical entries, index t = 0..2^k.
    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// Literal enumeration of all (c, d) pairs. Exponential in m - k; the oracle
/// the fast path is checked against.
pub fn count_bruteforce(ctx: &FermatContext, k: u32, t: u64) -> u64 {
    assert!(k < ctx.m());
    let p = ctx.p();
    let range = 1u64 << (ctx.m() - k - 1);
    let step = 1u64 << (k + 1);
    let half = 1u64 << k;
    let mut n = 0;
    for c in 0..range {
        let a = ctx.pow_g(step * c + t);
        for d in 0..range {
            let b = ctx.pow_g(step * d + half + t);
            if (a + b) % p == 1 {
                n += 1;
            }
        }
    }
    n
}

/// All canonical counts for level k via discrete logs: for each candidate c,
/// the residue u = 1 - g^(2^(k+1)c + t) determines the unique exponent a d
/// would need, and d exists iff dlog(u) ≡ 2^k + t (mod 2^(k+1)).
pub fn count_table(ctx: &FermatContext, dlog: &DlogTable, k: u32) -> CountTable {
    assert!(k < ctx.m());
    let values = (0..1u64 << k)
        .map(|t| count_via_dlog(ctx, dlog, k, t))
        .collect();
    CountTable { k, values }
}

/// Single dlog-accelerated count; linear in 2^(m-k-1).
pub fn count_via_dlog(ctx: &FermatContext, dlog: &DlogTable, k: u32, t: u64) -> u64 {
    assert!(k < ctx.m());
    let p = ctx.p();
    let range = 1u64 << (ctx.m() - k - 1);
    let step = 1u64 << (k + 1);
    let want = ((1u64 << k) + t) & (step - 1);
    let mut n = 0;
    for c in 0..range {
        let u = (p + 1 - ctx.pow_g(step * c + t)) % p;
        if u != 0 && u64::from(dlog.log(u)) & (step - 1) == want {
            n += 1;
        }
    }
    n
}

/// Checks that brute-force counts over the whole exponent range Z_(2^m)
/// depend on t only mod 2^k.
pub fn verify_count_invariance(ctx: &FermatContext, k: u32) -> bool {
    assert!(k < ctx.m());
    let canonical: Vec<u64> = (0..1u64 << k)
        .map(|t| count_bruteforce(ctx, k, t))
        .collect();
    (0..ctx.order()).all(|t| count_bruteforce(ctx, k, t) == canonical[(t & ((1 << k) - 1)) as usize])
}

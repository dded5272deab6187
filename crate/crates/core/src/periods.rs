//! Gaussian periods: the tower of partial sums of p-th roots of unity that
//! the construction walks down, plus high-precision reference values used
//! for labeling and verification.
//!
//! Level k splits the nonzero residues into 2^k classes by the exponent of
//! the primitive root g mod 2^k: T[k][r] sums eps^(g^(2^k a + r)) over a.
//! Level 0 is the single full sum (exactly -1), level m the individual roots.

use crate::ntheory::FermatContext;
use crate::numeric::{pi, sin_cos, BigComplex, BigFloat};
use alloc::vec::Vec;

/// Index (k, r) of one period: level k, residue class r < 2^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodId {
    k: u32,
    r: u64,
}

impl PeriodId {
    pub fn new(k: u32, r: u64) -> Self {
        assert!(k < 64, "level out of range");
        assert!(r < (1u64 << k), "residue {r} out of range for level {k}");
        PeriodId { k, r }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u64 {
        self.r
    }
}

/// All 2^k reference periods of one level, with the smallest pairwise
/// distance (None when the level has a single period).
#[derive(Debug, Clone)]
pub struct PeriodTable {
    k: u32,
    precision_bits: u32,
    values: Vec<BigComplex>,
    min_gap: Option<BigFloat>,
}

impl PeriodTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn values(&self) -> &[BigComplex] {
        &self.values
    }

    pub fn value(&self, r: u64) -> &BigComplex {
        &self.values[r as usize]
    }

    pub fn min_gap(&self) -> Option<&BigFloat> {
        self.min_gap.as_ref()
    }
}

/// eps^j at the requested precision, where eps = exp(2 pi i / p).
pub fn root_of_unity(ctx: &FermatContext, j: u64, precision_bits: u32) -> BigComplex {
    let j = j % ctx.p();
    if j == 0 {
        return BigComplex::one(precision_bits);
    }
    let w = precision_bits + 32;
    // theta = 2 pi j / p lies in (0, 2 pi), so no further reduction happens
    let theta = pi(w).mul(&BigFloat::from_u64(2 * j, w)).div_u64(ctx.p());
    let (s, c) = sin_cos(&theta, precision_bits);
    BigComplex::new(c, s)
}

/// T[k][r] summed literally from roots of unity, with 32 guard bits.
pub fn reference_period(ctx: &FermatContext, id: PeriodId, precision_bits: u32) -> BigComplex {
    assert!(id.k() <= ctx.m());
    let w = precision_bits + 32;
    let step = 1u64 << id.k();
    let terms = 1u64 << (ctx.m() - id.k());
    let mut acc = BigComplex::zero(w);
    for a in 0..terms {
        let e = ctx.pow_g(step * a + id.r());
        acc = acc.add(&root_of_unity(ctx, e, w));
    }
    BigComplex::new(
        acc.re().with_precision(precision_bits),
        acc.im().with_precision(precision_bits),
    )
}

/// Reference values for every period of level k, plus the level's minimum
/// pairwise gap. The gap halved is the matching tolerance: a computed value
/// within that distance of a reference point is nearer to it than to any
/// other, so labels assigned under it are unambiguous.
pub fn reference_level(ctx: &FermatContext, k: u32, precision_bits: u32) -> PeriodTable {
    assert!(k <= ctx.m());
    let count = 1usize << k;
    let mut values = Vec::with_capacity(count);
    for r in 0..count as u64 {
        values.push(reference_period(ctx, PeriodId::new(k, r), precision_bits));
    }
    let mut min_sq: Option<BigFloat> = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d2 = values[i].sub(&values[j]).modulus_sq();
            if min_sq.as_ref().map_or(true, |m| d2 < *m) {
                min_sq = Some(d2);
            }
        }
    }
    PeriodTable {
        k,
        precision_bits,
        values,
        min_gap: min_sq.map(|m| m.sqrt()),
    }
}

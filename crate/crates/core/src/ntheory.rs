//! Number-theoretic groundwork: Fermat-prime validation, modular
//! exponentiation, primitive roots, and discrete-log tables.
//!
//! Everything here is exact u64 arithmetic. The multiplicative group mod a
//! Fermat prime p = 2^m + 1 has order 2^m, so a residue g is a primitive root
//! iff g^(2^(m-1)) ≡ -1 (mod p); that single test drives both the search and
//! the validation of caller-supplied roots.

use alloc::vec::Vec;
use core::fmt;

/// Errors from context construction and validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NtError {
    /// The number is not of the form 2^(2^j) + 1 or is composite.
    NotFermatPrime(u64),
    /// The supplied residue is not a primitive root mod p.
    NotPrimitiveRoot { p: u64, g: u64 },
}

impl fmt::Display for NtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NtError::NotFermatPrime(n) => write!(f, "{n} is not a Fermat prime"),
            NtError::NotPrimitiveRoot { p, g } => {
                write!(f, "{g} is not a primitive root mod {p}")
            }
        }
    }
}

/// A validated Fermat prime p = 2^m + 1 together with a primitive root g.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermatContext {
    p: u64,
    m: u32,
    g: u64,
}

impl FermatContext {
    /// Validates p and picks the smallest primitive root.
    pub fn new(p: u64) -> Result<Self, NtError> {
        let (p, m) = validate_fermat_prime(p)?;
        let g = find_primitive_root(p, m);
        Ok(FermatContext { p, m, g })
    }

    /// Validates p and a caller-chosen primitive root.
    pub fn with_root(p: u64, g: u64) -> Result<Self, NtError> {
        let (p, m) = validate_fermat_prime(p)?;
        if g <= 1 || g >= p || !is_primitive_root(g, p, m) {
            return Err(NtError::NotPrimitiveRoot { p, g });
        }
        Ok(FermatContext { p, m, g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Exponent of 2 in p - 1; also the number of tower levels.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    /// Group order p - 1 = 2^m.
    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    /// g^e mod p with the exponent taken mod 2^m (the group order).
    pub fn pow_g(&self, e: u64) -> u64 {
        pow_mod(self.g, e & (self.order() - 1), self.p)
    }
}

/// Checks that n is a Fermat prime and returns (n, m) with n = 2^m + 1.
///
/// m itself must be a power of two (otherwise 2^m + 1 factors), and n must
/// pass trial division. Everything representable in u64 is decided exactly.
pub fn validate_fermat_prime(n: u64) -> Result<(u64, u32), NtError> {
    if n < 3 {
        return Err(NtError::NotFermatPrime(n));
    }
    let k = n - 1;
    if !k.is_power_of_two() {
        return Err(NtError::NotFermatPrime(n));
    }
    let m = k.trailing_zeros();
    if !m.is_power_of_two() {
        return Err(NtError::NotFermatPrime(n));
    }
    if !is_prime(n) {
        return Err(NtError::NotFermatPrime(n));
    }
    Ok((n, m))
}

/// Deterministic trial division; sufficient for the 2^(2^j) + 1 candidates
/// that fit in u64 (the largest needing work is 2^32 + 1).
fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// base^exp mod modulus by square-and-multiply; u128 intermediates keep the
/// products exact for any u64 modulus.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    debug_assert!(modulus > 1);
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b: u128 = (base as u128) % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn is_primitive_root(g: u64, p: u64, m: u32) -> bool {
    pow_mod(g, 1u64 << (m - 1), p) == p - 1
}

/// Smallest primitive root of the Fermat prime p = 2^m + 1.
///
/// The group order is 2^m, so the only proper prime-power order divides
/// 2^(m-1); g generates iff g^(2^(m-1)) ≠ 1, and the only other square root
/// of 1 mod p is -1.
pub fn find_primitive_root(p: u64, m: u32) -> u64 {
    for g in 2..p {
        if is_primitive_root(g, p, m) {
            return g;
        }
    }
    unreachable!("a prime modulus always has a primitive root")
}

/// Discrete logarithms base g: for every nonzero residue x mod p, the unique
/// e in Z_(p-1) with g^e = x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlogTable {
    /// Indexed by residue; entry 0 is unused.
    entries: Vec<u32>,
}

impl DlogTable {
    /// Exponent of the nonzero residue x. Panics if x is 0 or >= p.
    pub fn log(&self, x: u64) -> u32 {
        assert!(x != 0, "0 has no discrete logarithm");
        self.entries[x as usize]
    }

    /// Number of mapped residues, p - 1.
    pub fn len(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Builds the full discrete-log table by walking g^0, g^1, ... once.
pub fn build_dlog_table(ctx: &FermatContext) -> DlogTable {
    let p = ctx.p();
    let mut entries = alloc::vec![0u32; p as usize];
    let mut x = 1u64;
    for e in 0..ctx.order() {
        entries[x as usize] = e as u32;
        x = x * ctx.g() % p;
    }
    debug_assert_eq!(x, 1, "g must have order p - 1");
    DlogTable { entries }
}

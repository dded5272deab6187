//! Arbitrary-precision binary floating point: sign, integer mantissa, binary
//! exponent, explicit precision.
//!
//! The mantissa of a nonzero value is normalized to exactly `prec` bits (top
//! bit set), so one ulp is 2^(exp) and relative error per operation stays
//! within a few ulps. Rounding is truncation toward zero; every operation is
//! deterministic, so identical inputs at identical precision give bit-equal
//! results. There is no overflow or underflow: exponents live in i64.

use alloc::string::String;
use core::cmp::Ordering;
use num_bigint::BigUint;

/// Smallest supported precision; everything below f64's 53 significand bits
/// would make the f64 interop tests meaningless.
pub const MIN_PRECISION: u32 = 53;

#[derive(Debug, Clone)]
pub struct BigFloat {
    neg: bool,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    /// Builds a value (-1)^neg · mant · 2^exp normalized to `prec` bits.
    pub(crate) fn raw(neg: bool, mant: BigUint, exp: i64, prec: u32) -> Self {
        debug_assert!(prec >= MIN_PRECISION);
        let bits = mant.bits();
        if bits == 0 {
            return BigFloat {
                neg: false,
                mant,
                exp: 0,
                prec,
            };
        }
        let prec64 = u64::from(prec);
        let (mant, exp) = match bits.cmp(&prec64) {
            Ordering::Greater => {
                let drop = bits - prec64;
                (mant >> drop, exp + drop as i64)
            }
            Ordering::Less => {
                let lift = prec64 - bits;
                (mant << lift, exp - lift as i64)
            }
            Ordering::Equal => (mant, exp),
        };
        BigFloat {
            neg,
            mant,
            exp,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat::raw(false, BigUint::from(0u32), 0, prec)
    }

    pub fn one(prec: u32) -> Self {
        BigFloat::from_u64(1, prec)
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        BigFloat::raw(false, BigUint::from(v), 0, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigFloat::raw(v < 0, BigUint::from(v.unsigned_abs()), 0, prec)
    }

    pub(crate) fn from_biguint(v: BigUint, prec: u32) -> Self {
        BigFloat::raw(false, v, 0, prec)
    }

    /// Exact conversion from a finite f64; None for NaN and infinities.
    pub fn from_f64(x: f64, prec: u32) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let raw_exp = (bits >> 52) & 0x7ff;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074i64) // subnormal (or zero)
        } else {
            (frac | (1u64 << 52), raw_exp as i64 - 1075)
        };
        Some(BigFloat::raw(neg, BigUint::from(mant), exp, prec))
    }

    /// Nearest f64 (round half up on the 54th bit); saturates to infinity
    /// and flushes far-underflow to zero.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        // top 54 bits of the mantissa
        let t54 = if bits >= 54 {
            u64::try_from(&(&self.mant >> (bits - 54))).unwrap()
        } else {
            u64::try_from(&self.mant).unwrap() << (54 - bits)
        };
        let mut t53 = (t54 >> 1) + (t54 & 1);
        let mut e = self.exp + bits as i64 - 53; // value = t53 · 2^e
        if t53 == 1u64 << 53 {
            t53 >>= 1;
            e += 1;
        }
        // f64 = 1.f · 2^(e+52); biased exponent e + 52 + 1023
        let mut biased = e + 52 + 1023;
        if biased >= 2047 {
            return if self.neg {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if biased <= 0 {
            let shift = 1 - biased;
            if shift > 53 {
                return if self.neg { -0.0 } else { 0.0 };
            }
            t53 >>= shift as u32;
            biased = 0;
        }
        let sign = if self.neg { 1u64 << 63 } else { 0 };
        f64::from_bits(sign | ((biased as u64) << 52) | (t53 & ((1u64 << 52) - 1)))
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same value renormalized to a new precision (exact when widening).
    pub fn with_precision(&self, prec: u32) -> Self {
        BigFloat::raw(self.neg, self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.bits() == 0
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            neg: !self.neg,
            mant: self.mant.clone(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            neg: false,
            mant: self.mant.clone(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exact scaling by 2^k.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            neg: self.neg,
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    /// Position of the leading bit: floor(log2 |v|) + 1. Zero for zero.
    fn lead(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn cmp_abs(&self, rhs: &Self) -> Ordering {
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.lead().cmp(&rhs.lead()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // equal leading positions: align least-significant ends
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        a.cmp(&b)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return rhs.with_precision(prec);
        }
        if rhs.is_zero() {
            return self.with_precision(prec);
        }
        // A far-smaller operand is below 1 ulp of the result; truncation
        // renders it invisible.
        let gap = self.lead() - rhs.lead();
        if gap > i64::from(prec) + 2 {
            return self.with_precision(prec);
        }
        if gap < -(i64::from(prec) + 2) {
            return rhs.with_precision(prec);
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        if self.neg == rhs.neg {
            return BigFloat::raw(self.neg, a + b, e, prec);
        }
        match a.cmp(&b) {
            Ordering::Equal => BigFloat::zero(prec),
            Ordering::Greater => BigFloat::raw(self.neg, a - b, e, prec),
            Ordering::Less => BigFloat::raw(rhs.neg, b - a, e, prec),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() || rhs.is_zero() {
            return BigFloat::zero(prec);
        }
        BigFloat::raw(
            self.neg != rhs.neg,
            &self.mant * &rhs.mant,
            self.exp + rhs.exp,
            prec,
        )
    }

    /// Division; the divisor must be nonzero.
    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift = u64::from(prec) + 2 + rhs.mant.bits();
        let q = (&self.mant << shift) / &rhs.mant;
        BigFloat::raw(
            self.neg != rhs.neg,
            q,
            self.exp - rhs.exp - shift as i64,
            prec,
        )
    }

    /// Truncating division by a small positive integer.
    pub fn div_u64(&self, d: u64) -> Self {
        assert!(d > 0);
        if self.is_zero() {
            return self.clone();
        }
        let shift = 66u64; // headroom so the quotient keeps full precision
        let q = (&self.mant << shift) / BigUint::from(d);
        BigFloat::raw(self.neg, q, self.exp - shift as i64, self.prec)
    }

    /// Square root of a non-negative value (floor-based Newton iteration on
    /// the shifted mantissa).
    pub fn sqrt(&self) -> Self {
        assert!(!self.neg || self.is_zero(), "sqrt of a negative value");
        if self.is_zero() {
            return self.clone();
        }
        let mut shift = i64::from(self.prec) + 2;
        if (self.exp - shift) & 1 != 0 {
            shift += 1;
        }
        let r = (&self.mant << shift as u64).sqrt();
        BigFloat::raw(false, r, (self.exp - shift) / 2, self.prec)
    }

    /// Integer part as a magnitude, truncated toward zero.
    pub(crate) fn trunc_biguint(&self) -> BigUint {
        if self.is_zero() || self.lead() <= 0 {
            return BigUint::from(0u32);
        }
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> self.exp.unsigned_abs()
        }
    }

    /// Decimal rendering with the given number of significant digits,
    /// scientific form (e.g. "6.180339887e-1").
    pub fn to_decimal(&self, digits: usize) -> String {
        use alloc::format;
        use alloc::string::ToString;
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".into();
        }
        // first decimal-exponent estimate from the binary magnitude
        let l = self.lead() - 1; // floor(log2 |v|)
        let mut d10 = (l as i128 * 30103 / 100000) as i64;
        let ten = BigUint::from(10u32);
        let mut int = loop {
            // target integer trunc(|v| · 10^(digits-1-d10))
            let s = digits as i64 - 1 - d10;
            let int = if self.exp >= 0 {
                let x = &self.mant << self.exp as u64;
                if s >= 0 {
                    x * ten.pow(s as u32)
                } else {
                    x / ten.pow(s.unsigned_abs() as u32)
                }
            } else if s >= 0 {
                (&self.mant * ten.pow(s as u32)) >> self.exp.unsigned_abs()
            } else {
                &self.mant / (ten.pow(s.unsigned_abs() as u32) << self.exp.unsigned_abs())
            };
            let got = int.to_string().len();
            if got == digits {
                break int;
            }
            // estimate was off; shift and retry
            d10 += got as i64 - digits as i64;
        };
        // drop trailing zeros for compactness, keeping at least one digit
        let mut s = int.to_string();
        while s.len() > 1 && s.ends_with('0') {
            s.pop();
            int = &int / &ten;
        }
        let _ = int;
        let mantissa = if s.len() == 1 {
            s
        } else {
            format!("{}.{}", &s[..1], &s[1..])
        };
        format!("{}{}e{}", if self.neg { "-" } else { "" }, mantissa, d10)
    }

    /// Parses decimal notation ("-1.618", "6.18e-1", "257") at the given
    /// precision. None on malformed input.
    pub fn from_decimal_str(s: &str, prec: u32) -> Option<Self> {
        let s = s.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mant_part, exp_part) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], Some(&s[i + 1..])),
            None => (s, None),
        };
        let mut digits = String::new();
        let mut frac_len = 0i64;
        let mut seen_dot = false;
        if mant_part.is_empty() {
            return None;
        }
        for ch in mant_part.chars() {
            match ch {
                '0'..='9' => {
                    digits.push(ch);
                    if seen_dot {
                        frac_len += 1;
                    }
                }
                '.' if !seen_dot => seen_dot = true,
                _ => return None,
            }
        }
        if digits.is_empty() {
            return None;
        }
        let e10: i64 = match exp_part {
            Some(e) => e.parse().ok()?,
            None => 0,
        };
        let e10 = e10.checked_sub(frac_len)?;
        let m = BigUint::parse_bytes(digits.as_bytes(), 10)?;
        if m.bits() == 0 {
            return Some(BigFloat::zero(prec));
        }
        let ten = BigUint::from(10u32);
        if e10 >= 0 {
            Some(BigFloat::raw(neg, m * ten.pow(e10 as u32), 0, prec))
        } else {
            let d = ten.pow(e10.unsigned_abs() as u32);
            let shift = u64::from(prec) + 2 + d.bits();
            let q = (m << shift) / d;
            Some(BigFloat::raw(neg, q, -(shift as i64), prec))
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if other.neg {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if self.neg {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => {}
        }
        match (self.neg, other.neg) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            (false, false) => self.cmp_abs(other),
            (true, true) => other.cmp_abs(self),
        }
    }
}

impl core::fmt::Display for BigFloat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        // enough digits to reproduce the mantissa: prec · log10(2), plus slack
        let digits = (u64::from(self.prec) * 30103 / 100000 + 2) as usize;
        f.write_str(&self.to_decimal(digits))
    }
}

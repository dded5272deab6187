//! Complex arithmetic over [`BigFloat`], including the principal square
//! root (non-negative real part; non-negative imaginary part on the branch
//! cut along the negative real axis).
//!
//! Binary operations run with 8 internal guard bits and truncate back to the
//! operand precision, keeping per-operation relative error within a few ulps.

use super::float::BigFloat;

#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::new(BigFloat::one(prec), BigFloat::zero(prec))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        BigComplex::new(BigFloat::from_u64(v, prec), BigFloat::zero(prec))
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn neg(&self) -> Self {
        BigComplex::new(self.re.neg(), self.im.neg())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        BigComplex::new(self.re.add(&rhs.re), self.im.add(&rhs.im))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        BigComplex::new(self.re.sub(&rhs.re), self.im.sub(&rhs.im))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.precision().max(rhs.precision());
        let w = prec + 8;
        let (a, b) = (self.re.with_precision(w), self.im.with_precision(w));
        let (c, d) = (rhs.re.with_precision(w), rhs.im.with_precision(w));
        let re = a.mul(&c).sub(&b.mul(&d));
        let im = a.mul(&d).add(&b.mul(&c));
        BigComplex::new(re.with_precision(prec), im.with_precision(prec))
    }

    /// Scales by a real factor.
    pub fn scale(&self, f: &BigFloat) -> Self {
        BigComplex::new(self.re.mul(f), self.im.mul(f))
    }

    /// Division; the divisor must be nonzero (checked by callers that can
    /// see zero, asserted here).
    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "complex division by zero");
        let prec = self.precision().max(rhs.precision());
        let w = prec + 8;
        let (a, b) = (self.re.with_precision(w), self.im.with_precision(w));
        let (c, d) = (rhs.re.with_precision(w), rhs.im.with_precision(w));
        let norm = c.mul(&c).add(&d.mul(&d));
        let re = a.mul(&c).add(&b.mul(&d)).div(&norm);
        let im = b.mul(&c).sub(&a.mul(&d)).div(&norm);
        BigComplex::new(re.with_precision(prec), im.with_precision(prec))
    }

    /// |z|², exact up to the final truncation.
    pub fn modulus_sq(&self) -> BigFloat {
        let prec = self.precision();
        let w = prec + 8;
        let (a, b) = (self.re.with_precision(w), self.im.with_precision(w));
        a.mul(&a).add(&b.mul(&b)).with_precision(prec)
    }

    /// |z|.
    pub fn modulus(&self) -> BigFloat {
        let prec = self.precision();
        let w = prec + 8;
        let (a, b) = (self.re.with_precision(w), self.im.with_precision(w));
        a.mul(&a).add(&b.mul(&b)).sqrt().with_precision(prec)
    }

    /// Distance |self - rhs|.
    pub fn dist(&self, rhs: &Self) -> BigFloat {
        self.sub(rhs).modulus()
    }
}

/// Principal square root: for z = 0 returns 0; otherwise the root with
/// re > 0, or with im ≥ 0 when re = 0 (branch cut on the negative real
/// axis maps to the positive imaginary axis).
///
/// The half-angle formulas are arranged so the additions never cancel:
/// |z| + |re z| is computed on whichever side of the imaginary axis z lies.
pub fn complex_sqrt(z: &BigComplex) -> BigComplex {
    let prec = z.precision();
    if z.is_zero() {
        return BigComplex::zero(prec);
    }
    let w = prec + 8;
    let re = z.re().with_precision(w);
    let im = z.im().with_precision(w);
    let r = BigComplex::new(re.clone(), im.clone()).modulus().with_precision(w);
    if !re.is_negative() {
        // u = sqrt((r + re)/2) > 0, v = im/(2u)
        let u = r.add(&re).ldexp(-1).sqrt();
        let v = im.div(&u.ldexp(1));
        BigComplex::new(u.with_precision(prec), v.with_precision(prec))
    } else {
        // v = ±sqrt((r - re)/2), sign following im; u = im/(2v) ≥ 0
        let t = r.sub(&re).ldexp(-1).sqrt();
        let v = if im.is_negative() { t.neg() } else { t };
        let u = im.div(&v.ldexp(1));
        BigComplex::new(u.with_precision(prec), v.with_precision(prec))
    }
}

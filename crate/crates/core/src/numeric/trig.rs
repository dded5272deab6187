//! π and simultaneous sin/cos at arbitrary precision.
//!
//! π comes from Machin's identity π = 16·arctan(1/5) − 4·arctan(1/239),
//! evaluated in fixed point over the big integers. sin/cos reduce the
//! argument mod 2π, fold into the first octant (so neither Taylor series
//! ever cancels), and sum the series with 32 guard bits.

use super::float::BigFloat;
use num_bigint::BigUint;

/// π to `prec` bits.
pub fn pi(prec: u32) -> BigFloat {
    let w = prec + 16;
    let a5 = arctan_recip(5, w);
    let a239 = arctan_recip(239, w);
    let scaled = (a5 << 4u32) - (a239 << 2u32);
    BigFloat::raw(false, scaled, -i64::from(w), prec)
}

/// arctan(1/k) in fixed point, scaled by 2^w; truncating alternating series.
fn arctan_recip(k: u64, w: u32) -> BigUint {
    let k2 = BigUint::from(k * k);
    let mut power = (BigUint::from(1u32) << w) / BigUint::from(k);
    let mut acc = power.clone();
    let mut n = 1u64;
    let mut subtract = true;
    loop {
        power = power / &k2;
        n += 2;
        let term = &power / BigUint::from(n);
        if term.bits() == 0 {
            break;
        }
        if subtract {
            acc -= term;
        } else {
            acc += term;
        }
        subtract = !subtract;
    }
    acc
}

/// (sin x, cos x) at precision `prec`, for any finite argument. The
/// reduction mod 2π and the series run with 32 guard bits, so results stay
/// accurate to a few ulps at `prec` away from the zeros of sin/cos.
pub fn sin_cos(x: &BigFloat, prec: u32) -> (BigFloat, BigFloat) {
    let w = prec + 32;
    let negate_sin = x.is_negative();
    let ax = x.abs().with_precision(w);
    let pi_w = pi(w);
    let two_pi = pi_w.ldexp(1);
    // y = ax mod 2π, in [0, 2π)
    let mut y = if ax < two_pi {
        ax
    } else {
        let q = ax.div(&two_pi).trunc_biguint();
        ax.sub(&two_pi.mul(&BigFloat::from_biguint(q, w)))
    };
    while y.is_negative() {
        y = y.add(&two_pi);
    }
    while y >= two_pi {
        y = y.sub(&two_pi);
    }
    // quadrant n in {0..3}, local angle z in [0, π/2)
    let half_pi = pi_w.ldexp(-1);
    let quarter_pi = pi_w.ldexp(-2);
    let mut n = 0u8;
    let mut z = y;
    while n < 3 && z >= half_pi {
        z = z.sub(&half_pi);
        n += 1;
    }
    if z.is_negative() {
        z = BigFloat::zero(w);
    }
    // octant fold: z > π/4 swaps the two series
    let (z, swapped) = if z > quarter_pi {
        (half_pi.sub(&z), true)
    } else {
        (z, false)
    };
    let (s0, c0) = sin_cos_series(&z, w);
    let (s0, c0) = if swapped { (c0, s0) } else { (s0, c0) };
    let (mut s, c) = match n {
        0 => (s0, c0),
        1 => (c0, s0.neg()),
        2 => (s0.neg(), c0.neg()),
        _ => (c0.neg(), s0),
    };
    if negate_sin {
        s = s.neg();
    }
    (s.with_precision(prec), c.with_precision(prec))
}

/// Taylor series for sin and cos on [0, π/4]; no cancellation in this range.
fn sin_cos_series(z: &BigFloat, w: u32) -> (BigFloat, BigFloat) {
    let one = BigFloat::one(w);
    if z.is_zero() {
        return (BigFloat::zero(w), one);
    }
    let z2 = z.mul(z);
    let cutoff = -(i64::from(w) + 8);

    // thresholds relative to each series' leading term, so relative accuracy
    // survives tiny arguments
    let sin_floor = z.ldexp(cutoff);
    let cos_floor = one.ldexp(cutoff);

    let mut sin = z.with_precision(w);
    let mut term = sin.clone();
    let mut n = 1u64;
    let mut subtract = true;
    loop {
        term = term.mul(&z2).div_u64((n + 1) * (n + 2));
        n += 2;
        if term.is_zero() || term <= sin_floor {
            break;
        }
        sin = if subtract {
            sin.sub(&term)
        } else {
            sin.add(&term)
        };
        subtract = !subtract;
    }

    let mut cos = one.clone();
    let mut term = one.clone();
    let mut n = 0u64;
    let mut subtract = true;
    loop {
        term = term.mul(&z2).div_u64((n + 1) * (n + 2));
        n += 2;
        if term.is_zero() || term <= cos_floor {
            break;
        }
        cos = if subtract {
            cos.sub(&term)
        } else {
            cos.add(&term)
        };
        subtract = !subtract;
    }
    (sin, cos)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(x: &BigFloat, want: &str, bits: i64) {
        let w = BigFloat::from_decimal_str(want, 256).unwrap();
        let err = x.sub(&w).abs();
        assert!(
            err <= BigFloat::one(256).ldexp(-bits),
            "got {} want {want} (err {})",
            x.to_decimal(30),
            err.to_f64()
        );
    }

    #[test]
    fn pi_matches_reference_digits() {
        let p = pi(192);
        assert_close(
            &p,
            "3.1415926535897932384626433832795028841971693993751058209749446",
            185,
        );
    }

    #[test]
    fn pi_agrees_with_f64_and_across_precisions() {
        assert!((pi(64).to_f64() - core::f64::consts::PI).abs() < 1e-15);
        let lo = pi(64);
        let hi = pi(256);
        let err = lo.sub(&hi).abs();
        assert!(err <= BigFloat::one(256).ldexp(-62));
    }

    #[test]
    fn sin_cos_at_zero_and_quadrant_boundaries() {
        let zero = BigFloat::zero(64);
        let (s, c) = sin_cos(&zero, 64);
        assert!(s.is_zero());
        assert_eq!(c, BigFloat::one(64));

        // sin(π/2) = 1, cos(π/2) = 0 up to the precision of π itself
        let (s, c) = sin_cos(&pi(96).ldexp(-1), 64);
        assert!((s.to_f64() - 1.0).abs() < 1e-18);
        assert!(c.to_f64().abs() < 1e-18);

        // sin(π) = 0, cos(π) = -1
        let (s, c) = sin_cos(&pi(96), 64);
        assert!(s.to_f64().abs() < 1e-18);
        assert!((c.to_f64() + 1.0).abs() < 1e-18);
    }

    #[test]
    fn sin_cos_matches_frozen_references_at_high_precision() {
        let x = BigFloat::one(192);
        let (s, c) = sin_cos(&x, 192);
        assert_close(
            &s,
            "0.8414709848078965066525023216302989996225630607983710656727517099919104",
            185,
        );
        assert_close(
            &c,
            "0.5403023058681397174009366074429766037323104206179222276700972553811004",
            185,
        );
    }

    #[test]
    fn sin_cos_handles_negative_and_large_arguments() {
        let x = BigFloat::from_f64(-1.0, 128).unwrap();
        let (s, c) = sin_cos(&x, 128);
        assert!((s.to_f64() + 0.8414709848078965).abs() < 1e-15);
        assert!((c.to_f64() - 0.5403023058681398).abs() < 1e-15);

        // 100 = 15·2π + 5.752...; compare against f64
        let big = BigFloat::from_f64(100.0, 128).unwrap();
        let (s, c) = sin_cos(&big, 128);
        assert!((s.to_f64() - 100f64.sin()).abs() < 1e-14);
        assert!((c.to_f64() - 100f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn pythagorean_identity_across_the_circle() {
        let prec = 128;
        let two_pi = pi(prec + 32).ldexp(1);
        for i in 0..40u64 {
            let x = two_pi.mul(&BigFloat::from_u64(i, prec)).div_u64(40);
            let (s, c) = sin_cos(&x, prec);
            let m = s.mul(&s).add(&c.mul(&c));
            let err = m.sub(&BigFloat::one(prec)).abs();
            assert!(
                err <= BigFloat::one(prec).ldexp(48 - prec as i64),
                "i={i}: err {}",
                err.to_f64()
            );
        }
    }

    #[test]
    fn doubling_precision_refines_sin_cos() {
        let x = BigFloat::from_f64(2.5, 64).unwrap();
        let (s64, _) = sin_cos(&x, 64);
        let (s128, _) = sin_cos(&x.with_precision(128), 128);
        let err = s64.sub(&s128).abs();
        assert!(err <= BigFloat::one(128).ldexp(-58));
    }
}

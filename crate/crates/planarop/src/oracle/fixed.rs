//! Complex fixed-point numbers `(re + i im) 2^{-prec}` on big integers.

use num_bigint::BigInt;
use num_traits::{Float, Signed, ToPrimitive, Zero};

use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Fx {
    pub re: BigInt,
    pub im: BigInt,
}

pub(crate) fn int_from_f64(x: f64, prec: u32) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let (mant, exp, sign) = x.integer_decode();
    let m = BigInt::from(mant) * sign as i64;
    let shift = exp as i64 + prec as i64;
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

/// `x 2^{-prec}` as `f64`.
pub(crate) fn int_to_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits() as i64;
    let shift = (bits - 62).max(0);
    let top = (x >> shift as usize).to_f64().unwrap_or(0.0);
    super::bigfloat::ldexp(top, shift - prec as i64)
}

/// `ln |x 2^{-prec}|`, `-inf` for zero.
pub(crate) fn int_ln_abs(x: &BigInt, prec: u32) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits() as i64;
    let shift = (bits - 62).max(0);
    let top = (x.abs() >> shift as usize).to_f64().unwrap();
    top.ln() + (shift - prec as i64) as f64 * std::f64::consts::LN_2
}

impl Fx {
    pub fn zero() -> Fx {
        Fx { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn real(re: BigInt) -> Fx {
        Fx { re, im: BigInt::zero() }
    }

    pub fn from_c64(z: C64, prec: u32) -> Fx {
        Fx { re: int_from_f64(z.re, prec), im: int_from_f64(z.im, prec) }
    }

    pub fn to_c64(&self, prec: u32) -> C64 {
        C64::new(int_to_f64(&self.re, prec), int_to_f64(&self.im, prec))
    }

    /// `(ln |z|, arg z)`.
    pub fn ln_abs_arg(&self, prec: u32) -> (f64, f64) {
        let la = int_ln_abs(&self.re, prec);
        let lb = int_ln_abs(&self.im, prec);
        let hi = la.max(lb);
        if hi == f64::NEG_INFINITY {
            return (hi, 0.0);
        }
        let ra = (la - hi).exp() * sign(&self.re);
        let rb = (lb - hi).exp() * sign(&self.im);
        (hi + ra.hypot(rb).ln(), rb.atan2(ra))
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Fx, prec: u32) -> Fx {
        let re = (&self.re * &o.re - &self.im * &o.im) >> prec as usize;
        let im = (&self.re * &o.im + &self.im * &o.re) >> prec as usize;
        Fx { re, im }
    }

    pub fn div(&self, o: &Fx, prec: u32) -> Fx {
        let den = &o.re * &o.re + &o.im * &o.im;
        let re = ((&self.re * &o.re + &self.im * &o.im) << prec as usize) / &den;
        let im = ((&self.im * &o.re - &self.re * &o.im) << prec as usize) / &den;
        Fx { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

fn sign(x: &BigInt) -> f64 {
    if x.is_negative() {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_arithmetic() {
        let p = 200;
        let a = Fx::from_c64(C64::new(1.25, -3.5), p);
        let b = Fx::from_c64(C64::new(-0.75, 2.0), p);
        let q = a.mul(&b, p).div(&b, p);
        assert!((q.to_c64(p) - C64::new(1.25, -3.5)).norm() < 1e-15);
        let (l, t) = a.ln_abs_arg(p);
        let z = C64::new(1.25, -3.5);
        assert!((l - z.norm().ln()).abs() < 1e-15 && (t - z.arg()).abs() < 1e-15);
        assert_eq!(int_to_f64(&int_from_f64(-1e-30, p), p), -1e-30);
    }
}

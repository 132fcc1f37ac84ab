//! Binary floating point `m 2^e` with a big-integer mantissa of at most `prec` bits.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fixed::int_ln_abs;

#[derive(Debug, Clone, PartialEq)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    pub fn zero() -> BigFloat {
        BigFloat { m: BigInt::zero(), e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.m.is_positive()
    }

    fn normalized(m: BigInt, e: i64, prec: u32) -> BigFloat {
        if m.is_zero() {
            return BigFloat::zero();
        }
        let b = m.bits();
        if b > prec as u64 {
            let s = b - prec as u64;
            BigFloat { m: m >> s as usize, e: e + s as i64 }
        } else {
            BigFloat { m, e }
        }
    }

    pub fn from_int(m: &BigInt, prec: u32) -> BigFloat {
        BigFloat::normalized(m.clone(), 0, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> BigFloat {
        if q.is_zero() {
            return BigFloat::zero();
        }
        let shift = prec as i64 + q.denom().bits() as i64 - q.numer().bits() as i64 + 2;
        let m = if shift >= 0 {
            (q.numer() << shift as usize) / q.denom()
        } else {
            q.numer() / (q.denom() << (-shift) as usize)
        };
        BigFloat::normalized(m, -shift, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> BigFloat {
        BigFloat::from_rational(&BigRational::from_float(x).expect("finite"), prec)
    }

    /// Exact rational value.
    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as usize)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    /// Mantissa shifted to the fixed-point scale `2^{-frac_bits}`.
    pub fn to_fixed(&self, frac_bits: u32) -> BigInt {
        let s = self.e + frac_bits as i64;
        if s >= 0 {
            &self.m << s as usize
        } else {
            &self.m >> (-s) as usize
        }
    }

    /// Position of the leading bit: `|x|` lies in `[2^{top-1}, 2^top)`.
    fn top(&self) -> i64 {
        self.e + self.m.bits() as i64
    }

    pub fn add(&self, o: &BigFloat, prec: u32) -> BigFloat {
        if self.is_zero() {
            return BigFloat::normalized(o.m.clone(), o.e, prec);
        }
        if o.is_zero() {
            return BigFloat::normalized(self.m.clone(), self.e, prec);
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        // Terms entirely below the precision of the larger summand are dropped.
        if lo.top() < self.top().max(o.top()) - prec as i64 - 4 {
            let big = if self.top() >= o.top() { self } else { o };
            return BigFloat::normalized(big.m.clone(), big.e, prec);
        }
        let m = (&hi.m << (hi.e - lo.e) as usize) + &lo.m;
        BigFloat::normalized(m, lo.e, prec)
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat { m: -&self.m, e: self.e }
    }

    pub fn sub(&self, o: &BigFloat, prec: u32) -> BigFloat {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &BigFloat, prec: u32) -> BigFloat {
        BigFloat::normalized(&self.m * &o.m, self.e + o.e, prec)
    }

    pub fn div(&self, o: &BigFloat, prec: u32) -> BigFloat {
        assert!(!o.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return BigFloat::zero();
        }
        let shift = prec as i64 + o.m.bits() as i64 - self.m.bits() as i64 + 2;
        let shift = shift.max(0);
        let m = (&self.m << shift as usize) / &o.m;
        BigFloat::normalized(m, self.e - o.e - shift, prec)
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat { m: self.m.abs(), e: self.e }
    }

    pub fn ln_abs(&self) -> f64 {
        int_ln_abs(&self.m, 0) + self.e as f64 * std::f64::consts::LN_2
    }

    pub fn to_f64(&self) -> f64 {
        let shift = (self.m.bits() as i64 - 62).max(0);
        let top = (&self.m >> shift as usize).to_f64().unwrap_or(0.0);
        ldexp(top, self.e + shift)
    }

    pub fn cmp_abs(&self, o: &BigFloat) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.ln_abs().total_cmp(&o.ln_abs()),
        }
    }
}

/// `x 2^k` without intermediate overflow.
pub(crate) fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 && x.is_finite() && x != 0.0 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 && x != 0.0 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = 256;
        let third = BigFloat::from_rational(&BigRational::new(1.into(), 3.into()), p);
        let one = third.mul(&BigFloat::from_int(&3.into(), p), p);
        assert!((one.to_f64() - 1.0).abs() < 1e-15);
        let d = one.sub(&BigFloat::from_int(&1.into(), p), p);
        assert!(d.abs().ln_abs() < -170.0);
        let q = BigFloat::from_f64(2.5, p).div(&BigFloat::from_f64(-0.5, p), p);
        assert_eq!(q.to_f64(), -5.0);
        let tiny = BigFloat::from_f64(1e-300, p).mul(&BigFloat::from_f64(1e-300, p), p);
        assert!((tiny.ln_abs() + 600.0 * std::f64::consts::LN_10).abs() < 1e-10);
        assert_eq!(BigFloat::from_f64(0.75, p).to_rational(), BigRational::new(3.into(), 4.into()));
        let big = BigFloat::from_f64(1e30, p).add(&BigFloat::from_f64(1e-60, p), p);
        assert_eq!(big.to_f64(), 1e30);
    }
}

//! Exact ground truth for `P_{n,N}` and `h_n` when `m = Nc` is an integer.
//!
//! With `m` integer the moments `mu_ij = int z^i zbar^j |z-a|^{2m} e^{-N|z|^2} dA`
//! are `pi` times rationals (for rational `a`, `N`), and the moment matrix is
//! banded with half-width `m`. Everything up to the zeros is therefore done in
//! exact rational arithmetic; zeros and point values use fixed-point complex
//! numbers with `precision_bits` fractional bits.

mod bigfloat;
mod fixed;

pub use bigfloat::BigFloat;

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::{Error, Result, C64};
use fixed::{int_ln_abs, Fx};

/// Parse `"1/6"`, `"0.1666"`, `"3"` or `"2.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidParams(format!("cannot read {s:?} as a rational"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(p / q);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num = BigInt::from_str(&digits).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Exact value of an `f64`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidParams(format!("{x} is not finite")))
}

/// `ln |q|` for a nonzero rational.
pub fn ln_abs_rational(q: &BigRational) -> f64 {
    int_ln_abs(q.numer(), 0) - int_ln_abs(q.denom(), 0)
}

/// `q` as `f64`, accurate for magnitudes far outside the exponent range of the parts.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let s = if q.is_negative() { -1.0 } else { 1.0 };
    s * ln_abs_rational(q).exp()
}

/// `|x - y| / |y|` as `f64`; zero when both vanish.
pub fn relative_difference(x: &BigRational, y: &BigRational) -> f64 {
    if x == y {
        return 0.0;
    }
    if y.is_zero() {
        return f64::INFINITY;
    }
    rational_to_f64(&((x - y) / y).abs())
}

/// Decimal expansion of `q` with `digits` significant digits, e.g. `-1.2345e-7`.
pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let q = q.abs();
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut e = (ln_abs_rational(&q) / std::f64::consts::LN_10).floor() as i64;
    let pow10 = |k: i64| -> BigRational {
        let p = BigRational::from_integer(num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize));
        if k >= 0 {
            p
        } else {
            p.recip()
        }
    };
    // Fix the estimate so that 1 <= q / 10^e < 10.
    let mut scaled = &q / pow10(e);
    while scaled >= ten {
        e += 1;
        scaled = &q / pow10(e);
    }
    while scaled < BigRational::one() {
        e -= 1;
        scaled = &q / pow10(e);
    }
    let shifted = scaled * pow10(digits as i64 - 1);
    let mut int = shifted.round().to_integer();
    if int.to_string().len() > digits {
        int /= 10;
        e += 1;
    }
    let s = int.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Parameters of the exact problem: weight `|z-a|^{2m} e^{-N|z|^2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleParams {
    pub a: BigRational,
    pub big_n: BigRational,
    pub m: u32,
}

impl OracleParams {
    pub fn new(a: BigRational, big_n: BigRational, m: u32) -> Result<Self> {
        if !big_n.is_positive() {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        Ok(OracleParams { a, big_n, m })
    }

    /// From floating-point `a`, `N`, `c`; `Nc` must be an integer to within `1e-9`.
    pub fn from_f64(a: f64, big_n: f64, c: f64) -> Result<Self> {
        let m = big_n * c;
        let mr = m.round();
        if (m - mr).abs() > 1e-9 * m.max(1.0) || mr < 0.0 {
            return Err(Error::Scope(format!("Nc = {m} is not a nonnegative integer")));
        }
        OracleParams::new(rational_from_f64(a)?, rational_from_f64(big_n)?, mr as u32)
    }
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for k in 1..=n {
        let next = &f[k - 1] * BigInt::from(k);
        f.push(next);
    }
    f
}

fn binomials(m: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=m as usize {
        let next = &row[k - 1] * BigInt::from(m as usize + 1 - k) / BigInt::from(k);
        row.push(next);
    }
    row
}

fn powers(x: &BigRational, n: usize) -> Vec<BigRational> {
    let mut p = vec![BigRational::one()];
    for k in 1..=n {
        let next = &p[k - 1] * x;
        p.push(next);
    }
    p
}

/// Moments `mu_ij / pi` for `0 <= i, j < size`, stored by band.
#[derive(Debug, Clone)]
pub struct MomentMatrix {
    pub params: OracleParams,
    pub size: usize,
    band: Vec<Vec<BigRational>>,
}

/// Exact moment matrix.
///
/// `mu_ij / pi = sum_{i+k = j+l} C(m,k) C(m,l) (-a)^{2m-k-l} (i+k)! / N^{i+k+1}`.
pub fn exact_moments(params: &OracleParams, size: usize) -> Result<MomentMatrix> {
    if size == 0 || size > 202 {
        return Err(Error::Scope(format!("moment matrix size {size} outside 1..=202")));
    }
    let m = params.m as usize;
    let fact = factorials(size + m);
    let binom = binomials(params.m);
    let neg_a = powers(&-params.a.clone(), 2 * m);
    let inv_n = powers(&params.big_n.recip(), size + m + 1);
    let mut band = Vec::with_capacity(size);
    for i in 0..size {
        let mut row = Vec::with_capacity(m + 1);
        // j = i - d for d = m..=0, so that row[d'] with j = i - m + d'.
        for jj in (i as i64 - m as i64)..=(i as i64) {
            if jj < 0 {
                row.push(BigRational::zero());
                continue;
            }
            let j = jj as usize;
            let mut s = BigRational::zero();
            // l = i + k - j
            for k in 0..=m {
                let l = i + k;
                if l < j || l - j > m {
                    continue;
                }
                let l = l - j;
                let coef = BigRational::from_integer(&binom[k] * &binom[l] * &fact[i + k]);
                s += coef * &neg_a[2 * m - k - l] * &inv_n[i + k + 1];
            }
            row.push(s);
        }
        band.push(row);
    }
    Ok(MomentMatrix { params: params.clone(), size, band })
}

impl MomentMatrix {
    /// `mu_ij / pi`, exactly.
    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let m = self.params.m as usize;
        if hi - lo > m {
            return BigRational::zero();
        }
        self.band[hi][m - (hi - lo)].clone()
    }

    /// `L D L^T` factorization at `prec` bits.
    ///
    /// A nonpositive pivot is a precision failure; the factorization is retried
    /// once at twice the precision before reporting [`Error::Singular`].
    pub fn factor(&self, prec: u32) -> Result<Factorization> {
        match self.factor_at(prec) {
            Err(Error::Singular(_)) => self.factor_at(2 * prec),
            r => r,
        }
    }

    fn factor_at(&self, prec: u32) -> Result<Factorization> {
        let m = self.params.m as usize;
        let n = self.size;
        let entry = |i: usize, j: usize| BigFloat::from_rational(&self.entry(i, j), prec);
        // l[i][d] = L_{i, i-m+d}
        let mut l: Vec<Vec<BigFloat>> = vec![vec![BigFloat::zero(); m + 1]; n];
        let mut d: Vec<BigFloat> = Vec::with_capacity(n);
        for j in 0..n {
            let lo = j.saturating_sub(m);
            let mut dj = entry(j, j);
            for k in lo..j {
                let ljk = &l[j][m + k - j];
                dj = dj.sub(&ljk.mul(ljk, prec).mul(&d[k], prec), prec);
            }
            if !dj.is_positive() {
                return Err(Error::Singular(j));
            }
            l[j][m] = BigFloat::from_int(&BigInt::one(), prec);
            for i in j + 1..(j + m + 1).min(n) {
                let mut s = entry(i, j);
                for k in i.saturating_sub(m)..j {
                    let t = l[i][m + k - i].mul(&l[j][m + k - j], prec).mul(&d[k], prec);
                    s = s.sub(&t, prec);
                }
                l[i][m + j - i] = s.div(&dj, prec);
            }
            d.push(dj);
        }
        Ok(Factorization { params: self.params.clone(), prec, l, d })
    }
}

/// `mu / pi = L D L^T` with unit lower-triangular banded `L`; `D_k = h_k / pi`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub params: OracleParams,
    pub prec: u32,
    l: Vec<Vec<BigFloat>>,
    d: Vec<BigFloat>,
}

impl Factorization {
    pub fn size(&self) -> usize {
        self.d.len()
    }

    /// `h_k / pi`.
    pub fn h_over_pi(&self, k: usize) -> &BigFloat {
        &self.d[k]
    }

    /// Monic `P_n`: row `n` of `L^{-1}`.
    pub fn polynomial(&self, n: usize) -> Result<ExactPolynomial> {
        if n >= self.size() {
            return Err(Error::Scope(format!("degree {n} needs a moment matrix of size > {n}")));
        }
        let m = self.params.m as usize;
        let prec = self.prec;
        let mut x = vec![BigFloat::zero(); n + 1];
        x[n] = BigFloat::from_int(&BigInt::one(), prec);
        for j in (0..n).rev() {
            let mut s = BigFloat::zero();
            for i in j + 1..=(j + m).min(n) {
                if !x[i].is_zero() {
                    s = s.sub(&x[i].mul(&self.l[i][m + j - i], prec), prec);
                }
            }
            x[j] = s;
        }
        Ok(ExactPolynomial::new(self.params.clone(), x, self.d[n].clone(), prec))
    }
}

/// Default working precision `max(256, 8n)` bits.
pub fn default_precision(n: usize) -> u32 {
    (8 * n).max(256) as u32
}

/// Monic `P_{n,N}` with high-precision coefficients (ascending) and `h_n / pi`.
#[derive(Debug, Clone)]
pub struct ExactPolynomial {
    pub params: OracleParams,
    pub coefficients: Vec<BigFloat>,
    pub h_over_pi: BigFloat,
    pub precision_bits: u32,
    fixed: Vec<BigInt>,
}

impl ExactPolynomial {
    fn new(params: OracleParams, coefficients: Vec<BigFloat>, h_over_pi: BigFloat, precision_bits: u32) -> Self {
        let fixed = coefficients.iter().map(|q| q.to_fixed(precision_bits)).collect();
        ExactPolynomial { params, coefficients, h_over_pi, precision_bits, fixed }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `ln h_n`.
    pub fn log_hn(&self) -> f64 {
        std::f64::consts::PI.ln() + self.h_over_pi.ln_abs()
    }

    /// `P_n(0)`.
    pub fn at_zero(&self) -> &BigFloat {
        &self.coefficients[0]
    }

    /// Coefficients rounded to `f64`.
    pub fn coefficients_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(BigFloat::to_f64).collect()
    }

    /// Coefficients as decimal strings with `digits` significant digits.
    pub fn coefficient_strings(&self, digits: usize) -> Vec<String> {
        self.coefficients.iter().map(|c| decimal_string(&c.to_rational(), digits)).collect()
    }

    /// `(ln |P_n(z)|, arg P_n(z))` by fixed-point Horner.
    pub fn eval_log(&self, z: C64) -> (f64, f64) {
        let p = self.precision_bits;
        let zf = Fx::from_c64(z, p);
        let mut acc = Fx::zero();
        for c in self.fixed.iter().rev() {
            acc = acc.mul(&zf, p);
            acc.re += c;
        }
        acc.ln_abs_arg(p)
    }

    /// `max_k |<P_n, z^k>| / sum_j |c_j mu_jk|` over `k < n`.
    pub fn orthogonality_residual(&self, mm: &MomentMatrix) -> f64 {
        let p = self.precision_bits;
        let n = self.degree();
        let mut worst = 0.0f64;
        for k in 0..n {
            let mut s = BigFloat::zero();
            let mut scale = BigFloat::zero();
            for (j, cj) in self.coefficients.iter().enumerate() {
                let e = mm.entry(j, k);
                if e.is_zero() {
                    continue;
                }
                let t = cj.mul(&BigFloat::from_rational(&e, p), p);
                scale = scale.add(&t.abs(), p);
                s = s.add(&t, p);
            }
            if !s.is_zero() {
                worst = worst.max((s.ln_abs() - scale.ln_abs()).exp());
            }
        }
        worst
    }
}

/// Taylor coefficients `e_q` of `(z-a)^m e^{-Naz}` for `q = 0..len`, exactly.
fn weight_series(params: &OracleParams, len: usize) -> Vec<BigRational> {
    let m = params.m as usize;
    let binom = binomials(params.m);
    let neg_a = powers(&-params.a.clone(), m);
    let na = -(&params.big_n * &params.a);
    let mut exp_coef = vec![BigRational::one()];
    for k in 1..len {
        let next = &exp_coef[k - 1] * &na / BigRational::from_integer(BigInt::from(k));
        exp_coef.push(next);
    }
    (0..len)
        .map(|q| {
            (0..=m.min(q)).fold(BigRational::zero(), |s, p| {
                s + BigRational::from_integer(binom[p].clone()) * &neg_a[m - p] * &exp_coef[q - p]
            })
        })
        .collect()
}

/// `[z^k] (f g)` and the sum of the absolute values of its terms.
fn product_coefficient(f: &[BigFloat], g: &[BigFloat], k: usize, prec: u32) -> (BigFloat, BigFloat) {
    let mut s = BigFloat::zero();
    let mut scale = BigFloat::zero();
    for (i, fi) in f.iter().enumerate().take(k + 1) {
        if let Some(gk) = g.get(k - i) {
            if !fi.is_zero() && !gk.is_zero() {
                let t = fi.mul(gk, prec);
                scale = scale.add(&t.abs(), prec);
                s = s.add(&t, prec);
            }
        }
    }
    (s, scale)
}

fn relative(x: &BigFloat, y: &BigFloat, prec: u32) -> f64 {
    let d = x.sub(y, prec);
    if d.is_zero() {
        0.0
    } else {
        (d.ln_abs() - y.ln_abs()).exp()
    }
}

/// Comparison of the area and contour formulations.
#[derive(Debug, Clone, Serialize)]
pub struct ContourCheck {
    pub n: usize,
    pub precision_bits: u32,
    /// Largest `|(1/2 pi i) oint P_n z^j w_n dz|` over `j < n`, relative to the sum of the absolute terms.
    pub max_lower_residual: f64,
    /// Relative difference between `h_n` from the moments and from the contour pairing.
    pub area_contour_rel_diff: f64,
    /// Relative difference in `h_n = -Gamma(m+n+1) htilde_n / (2i N^{m+n+1} P_{n+1}(0))`.
    pub norming_chain_rel_diff: f64,
    pub log_hn: f64,
    /// `htilde_n / (2 pi i)` as a decimal string.
    pub h_tilde_over_2pi_i: String,
}

/// Residue checks of the non-hermitian orthogonality on a loop around `0` and `a`.
///
/// With `m` integer the contour integrals are residues at the origin: finite
/// sums against the Taylor coefficients of `(z-a)^m e^{-Naz}`.
pub fn contour_moment_check(fac: &Factorization, n: usize) -> Result<ContourCheck> {
    if n + 1 >= fac.size() {
        return Err(Error::Scope(format!("contour check for n = {n} needs moments of size {}", n + 2)));
    }
    let prec = fac.prec;
    let p = fac.polynomial(n)?;
    let p_next = fac.polynomial(n + 1)?;
    let params = &fac.params;
    let m = params.m as usize;
    let e: Vec<BigFloat> = weight_series(params, 2 * n + m + 2)
        .iter()
        .map(|q| BigFloat::from_rational(q, prec))
        .collect();
    // (1/2 pi i) oint P z^j (z-a)^m e^{-Naz} / z^{m+n} dz = [z^{m+n-1-j}] (P E)
    let residue = |j: i64| product_coefficient(&p.coefficients, &e, (m as i64 + n as i64 - 1 - j) as usize, prec);
    let (top, _) = residue(-1);
    let mut worst = 0.0f64;
    for j in 0..n as i64 {
        let (r, scale) = residue(j);
        if !r.is_zero() {
            worst = worst.max((r.ln_abs() - scale.ln_abs()).exp());
        }
    }
    let fact = factorials(m + n);
    let n_pow = num_traits::pow(params.big_n.clone(), m + n + 1);
    // N^{m+n+1} / (m+n)!
    let ratio = BigFloat::from_rational(&(n_pow / BigRational::from_integer(fact[m + n].clone())), prec);
    // top = N^{m+n+1} D_n / (m+n)!
    let d_from_contour = top.div(&ratio, prec);
    let area_contour_rel_diff = relative(&d_from_contour, &p.h_over_pi, prec);
    // htilde / (2 pi i) = [z^{m+n-1}] (P^2 E)
    let sq: Vec<BigFloat> = (0..=2 * n)
        .map(|k| product_coefficient(&p.coefficients, &p.coefficients, k, prec).0)
        .collect();
    let (h_tilde, _) = product_coefficient(&sq, &e, m + n - 1, prec);
    let d_chain = h_tilde.div(&ratio.mul(p_next.at_zero(), prec), prec).neg();
    let norming_chain_rel_diff = relative(&d_chain, &p.h_over_pi, prec);
    Ok(ContourCheck {
        n,
        precision_bits: prec,
        max_lower_residual: worst,
        area_contour_rel_diff,
        norming_chain_rel_diff,
        log_hn: p.log_hn(),
        h_tilde_over_2pi_i: decimal_string(&h_tilde.to_rational(), 30),
    })
}

/// `P_n` from a factorization of `mm` at the default precision for degree `n`.
pub fn exact_polynomial(mm: &MomentMatrix, n: usize) -> Result<ExactPolynomial> {
    mm.factor(default_precision(n))?.polynomial(n)
}

/// Convenience: `P_n` for weight parameters `(a, N, m)`.
pub fn exact_polynomial_for(params: &OracleParams, n: usize) -> Result<ExactPolynomial> {
    let mm = exact_moments(params, n + 1)?;
    exact_polynomial(&mm, n)
}

/// Largest relative change of the coefficients of `P_n` and of `h_n` between
/// `prec` and `2 prec` bits.
pub fn precision_escalation(mm: &MomentMatrix, n: usize, prec: u32) -> Result<f64> {
    let lo = mm.factor(prec)?.polynomial(n)?;
    let hi = mm.factor(2 * prec)?.polynomial(n)?;
    let p2 = 2 * prec;
    let mut worst = relative(&lo.h_over_pi, &hi.h_over_pi, p2);
    let scale = hi.coefficients.iter().fold(BigFloat::zero(), |s, c| if c.cmp_abs(&s).is_gt() { c.abs() } else { s });
    for (a, b) in lo.coefficients.iter().zip(&hi.coefficients) {
        let d = a.sub(b, p2);
        if !d.is_zero() {
            worst = worst.max((d.ln_abs() - scale.ln_abs()).exp());
        }
    }
    Ok(worst)
}

/// Roots with diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ExactZeros {
    pub roots: Vec<C64>,
    /// Largest `|P(root)| / sum |c_k| |root|^k`.
    pub max_residual: f64,
    /// Size of the last Aberth correction, an estimate of the absolute error.
    pub last_correction: f64,
    pub iterations: usize,
}

fn seed_fraction(seed: u64) -> f64 {
    let mut h = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^= h >> 31;
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn horner(coeffs: &[BigInt], x: &Fx, prec: u32) -> (Fx, Fx) {
    let mut p = Fx::zero();
    let mut dp = Fx::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(x, prec).add(&p);
        p = p.mul(x, prec);
        p.re += c;
    }
    (p, dp)
}

/// Gauss-Seidel Aberth sweeps until the largest correction drops below
/// `switch`, followed by two more sweeps (the iteration converges cubically).
/// Returns the last largest correction and the number of sweeps.
fn aberth(coeffs: &[BigInt], z: &mut [Fx], prec: u32, switch: f64, max_sweeps: usize) -> (f64, usize) {
    let n = z.len();
    let one = Fx::real(BigInt::one() << prec as usize);
    let mut last = f64::INFINITY;
    let mut extra = None;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut worst = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(coeffs, &z[k], prec);
            if p.is_zero() {
                continue;
            }
            let ratio = p.div(&dp, prec);
            let mut s = Fx::zero();
            for j in 0..n {
                if j != k {
                    s = s.add(&one.div(&z[k].sub(&z[j]), prec));
                }
            }
            let w = ratio.div(&one.sub(&ratio.mul(&s, prec)), prec);
            worst = worst.max(w.to_c64(prec).norm());
            z[k] = z[k].sub(&w);
        }
        last = worst;
        match extra {
            Some(0) => break,
            Some(k) => extra = Some(k - 1),
            None if worst < switch => extra = Some(1),
            None => {}
        }
    }
    (last, sweeps)
}

/// All roots of `P_n` by Aberth iteration in fixed point.
///
/// Starting points lie on a circle whose angular offset is derived from `seed`.
pub fn exact_zeros(ep: &ExactPolynomial, seed: u64) -> Result<ExactZeros> {
    let n = ep.degree();
    let prec = ep.precision_bits;
    if n == 0 {
        return Ok(ExactZeros { roots: vec![], max_residual: 0.0, last_correction: 0.0, iterations: 0 });
    }
    if ep.coefficients[..n].iter().all(|c| c.is_zero()) {
        return Ok(ExactZeros {
            roots: vec![C64::new(0.0, 0.0); n],
            max_residual: 0.0,
            last_correction: 0.0,
            iterations: 0,
        });
    }
    let mut radius = 0.0f64;
    for k in 1..=n {
        let c = &ep.coefficients[n - k];
        if !c.is_zero() {
            radius = radius.max((c.ln_abs() / k as f64).exp());
        }
    }
    let offset = seed_fraction(seed);
    // A cheap first stage at reduced precision, then the full precision.
    let low = (prec / 4).max(128).min(prec);
    let mut z: Vec<Fx> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25 + 0.5 * offset) / n as f64;
            Fx::from_c64(C64::from_polar(radius, th), low)
        })
        .collect();
    let mut iterations = 0;
    if low < prec {
        let coeffs: Vec<BigInt> = ep.coefficients.iter().map(|c| c.to_fixed(low)).collect();
        let (_, it) = aberth(&coeffs, &mut z, low, 2f64.powi(-(low as i32) / 3), 1000);
        iterations += it;
        let up = (prec - low) as usize;
        for x in z.iter_mut() {
            *x = Fx { re: &x.re << up, im: &x.im << up };
        }
    }
    let (last, it) = aberth(&ep.fixed, &mut z, prec, 2f64.powi(-(prec as i32) / 2), 1000);
    iterations += it;
    if last > 1e-20 {
        return Err(Error::Convergence(format!("Aberth iteration stopped with correction {last:e}")));
    }
    let horner = |x: &Fx| horner(&ep.fixed, x, prec);
    let mut max_residual = 0.0f64;
    for x in &z {
        let (p, _) = horner(x);
        let r = x.to_c64(prec).norm();
        let scale = ep
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs().to_f64() * r.powi(k as i32))
            .sum::<f64>();
        max_residual = max_residual.max(p.to_c64(prec).norm() / scale);
    }
    let mut roots: Vec<C64> = z.iter().map(|x| x.to_c64(prec)).collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ExactZeros { roots, max_residual, last_correction: last, iterations })
}

/// `m` from `N c` if it is an integer.
pub fn integer_charge(big_n: f64, c: f64) -> Option<u32> {
    let m = big_n * c;
    let r = m.round();
    ((m - r).abs() < 1e-9 * m.max(1.0) && r >= 0.0).then_some(r as u32)
}

/// The rational `a / b`.
pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

//! Geometry of the equilibrium support in each regime.
//!
//! Pre-critical: the support `K` is the complement of the image of
//! `|v| > 1` under `f(v) = rho v - kappa/(v - alpha) - kappa/alpha`, and
//! `X = alpha^2` is the root in `(0, min(1, t/a^2))` of
//! `X^3 - (a^2+4c+2t)/(2a^2) X^2 + t^2/(2a^4)`.
//!
//! Post-critical (and critical): `beta, b = (a^2 + t -+ sqrt((t-a^2)^2 - 4a^2 c))/(2a)`
//! and the outer boundary is the circle `|z| = sqrt(t+c)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::contours::Cut;
use crate::model::{critical_time, ModelParams, Regime};
use crate::{c, Error, Result, C64};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PreResiduals {
    pub cubic: f64,
    pub val_s1: f64,
    pub val_s2: f64,
    pub val_s3: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PreGeometry {
    pub a: f64,
    pub c: f64,
    pub t: f64,
    pub rho: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub beta: C64,
    pub b: f64,
    pub v_beta: C64,
    pub abs_beta: f64,
    pub residuals: PreResiduals,
}

impl PreGeometry {
    pub fn solve(a: f64, c_: f64, t: f64) -> Result<Self> {
        if !(a > 0.0 && c_ > 0.0 && t > 0.0) {
            return Err(Error::InvalidParams(format!("a={a}, c={c_}, t={t}")));
        }
        let tc = critical_time(a, c_);
        if t >= tc {
            return Err(Error::Regime(format!("t = {t} is not below t_c = {tc}")));
        }
        let a2 = a * a;
        let p = (a2 + 4.0 * c_ + 2.0 * t) / (2.0 * a2);
        let q = t * t / (2.0 * a2 * a2);
        let hi = (t / a2).min(1.0);
        let cubic = |x: f64| x * x * (x - p) + q;
        let dcubic = |x: f64| x * (3.0 * x - 2.0 * p);

        let mut x = cubic_real_roots(-p, 0.0, q)
            .into_iter()
            .filter(|&x| x > 0.0 && x < hi)
            .fold(f64::NAN, |acc, x| if acc.is_nan() { x } else { acc.min(x) });
        if x.is_nan() {
            x = bisect(cubic, 0.0, hi)
                .ok_or_else(|| Error::Convergence("no root of the cubic in (0, min(1, t/a^2))".into()))?;
        }
        for _ in 0..4 {
            let d = dcubic(x);
            if d == 0.0 {
                break;
            }
            let nx = x - cubic(x) / d;
            if !(nx > 0.0 && nx < hi) {
                break;
            }
            x = nx;
        }

        let alpha = x.sqrt();
        let rho = (t + a2 * x) / (2.0 * a * alpha);
        let kappa = (1.0 - x) * (t - a2 * x) / (2.0 * a * alpha);
        if !(kappa > 0.0) {
            return Err(Error::Convergence(format!("kappa = {kappa} is not positive")));
        }
        let abs_beta = alpha * rho + kappa / alpha;
        let beta = c(alpha * rho - kappa / alpha, 2.0 * (kappa * rho).sqrt());
        let b = rho / alpha;
        let v_beta = c(alpha, (kappa / rho).sqrt());

        let coef = 1.0f64.max(p).max(q);
        let residuals = PreResiduals {
            cubic: cubic(x).abs() / coef,
            val_s1: ((rho * x - rho + kappa) / (alpha * (x - 1.0)) - a).abs() / a,
            val_s2: ((kappa / x) * (rho + kappa * x / ((1.0 - x) * (1.0 - x))) - c_).abs() / c_,
            val_s3: (kappa * rho / x + rho * rho - (c_ + t)).abs() / (c_ + t),
        };
        Ok(PreGeometry { a, c: c_, t, rho, kappa, alpha, beta, b, v_beta, abs_beta, residuals })
    }

    /// `f(v) = rho v - kappa/(v - alpha) - kappa/alpha`.
    pub fn f(&self, v: C64) -> Result<C64> {
        if v == c(self.alpha, 0.0) {
            return Err(Error::Pole(v));
        }
        Ok(self.f_unchecked(v))
    }

    pub(crate) fn f_unchecked(&self, v: C64) -> C64 {
        self.rho * v - self.kappa / (v - self.alpha) - self.kappa / self.alpha
    }

    pub fn f_prime(&self, v: C64) -> C64 {
        let d = v - self.alpha;
        self.rho + self.kappa / (d * d)
    }

    /// The non-trivial solution of `f(deck(v)) = f(v)`.
    pub fn deck(&self, v: C64) -> Result<C64> {
        if v == c(self.alpha, 0.0) {
            return Err(Error::Pole(v));
        }
        Ok(self.alpha - (self.kappa / self.rho) / (v - self.alpha))
    }

    /// Point `f(e^{i theta})` of the outer boundary of `K`.
    pub fn boundary_point(&self, theta: f64) -> C64 {
        self.f_unchecked(C64::from_polar(1.0, theta))
    }

    /// Outward unit normal of `f(unit circle)` at `f(e^{i theta})`.
    pub fn boundary_normal(&self, theta: f64) -> C64 {
        let v = C64::from_polar(1.0, theta);
        let n = v * self.f_prime(v);
        n / n.norm()
    }

    /// `sqrt((z - beta)(z - conj beta))` with its cut on the vertical chord
    /// joining `conj beta` and `beta`; behaves as `z` at infinity.
    pub fn w_chord(&self, z: C64) -> C64 {
        let u = z - self.beta.re;
        if u == C64::new(0.0, 0.0) {
            return c(0.0, self.beta.im);
        }
        let h = self.beta.im / u;
        u * (1.0 + h * h).sqrt()
    }

    /// `C_{conj beta} = a(conj beta - b) sqrt(conj beta - beta) / (2 conj beta (conj beta - a))`.
    pub fn c_beta_bar(&self) -> C64 {
        let bb = self.beta.conj();
        self.a * (bb - self.b) * (bb - self.beta).sqrt() / (2.0 * bb * (bb - self.a))
    }

    /// `l_2D = 2(c+t) log rho - 2c log alpha + (alpha^2 - 1)(a^2 - 2a rho/alpha) - rho^2/alpha^2`.
    pub fn ell_2d(&self) -> f64 {
        let (a, c_, t, r, al) = (self.a, self.c, self.t, self.rho, self.alpha);
        2.0 * (c_ + t) * r.ln() - 2.0 * c_ * al.ln() + (al * al - 1.0) * (a * a - 2.0 * a * r / al)
            - r * r / (al * al)
    }

    /// Closed polygon approximating the outer boundary of `K`, counterclockwise.
    pub fn boundary_polygon(&self, n: usize) -> Vec<C64> {
        (0..n).map(|k| self.boundary_point(2.0 * PI * k as f64 / n as f64)).collect()
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo * fhi > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Real roots of `x^3 + b x^2 + c x + d`.
pub(crate) fn cubic_real_roots(b: f64, c_: f64, d: f64) -> Vec<f64> {
    let shift = b / 3.0;
    let p = c_ - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c_ / 3.0 + d;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    if disc > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let th = arg.acos() / 3.0;
        (0..3).map(|k| m * (th - 2.0 * PI * k as f64 / 3.0).cos() - shift).collect()
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v - shift]
    }
}

/// Post-critical data, also used as the critical extension for `t < t_c`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PostGeometry {
    pub a: f64,
    pub c: f64,
    pub t: f64,
    pub beta: C64,
    pub b: C64,
    pub ell: f64,
    pub big_radius: f64,
    pub small_radius: f64,
}

impl PostGeometry {
    pub fn solve(a: f64, c_: f64, t: f64) -> Result<Self> {
        if !(a > 0.0 && c_ > 0.0 && t > 0.0) {
            return Err(Error::InvalidParams(format!("a={a}, c={c_}, t={t}")));
        }
        let disc = (t - a * a).powi(2) - 4.0 * a * a * c_;
        let s = (a * a + t) / (2.0 * a);
        let (beta, b) = if disc >= 0.0 {
            let h = disc.sqrt() / (2.0 * a);
            // The product is known exactly; take the larger root directly and
            // recover the smaller one from beta*b = t + c.
            let big = s + h;
            (c((t + c_) / big, 0.0), c(big, 0.0))
        } else {
            let h = (-disc).sqrt() / (2.0 * a);
            (c(s, h), c(s, -h))
        };
        let ell = robin_constant(a, c_, t, beta);
        Ok(PostGeometry { a, c: c_, t, beta, b, ell, big_radius: (t + c_).sqrt(), small_radius: c_.sqrt() })
    }

    /// `l_2D = (c+t) log(c+t) - (c+t)`.
    pub fn ell_2d(&self) -> f64 {
        let s = self.c + self.t;
        s * s.ln() - s
    }

    /// `gamma_1 = sqrt(beta(beta - a)/(a(b - beta)))`.
    pub fn gamma_1(&self) -> C64 {
        (self.beta * (self.beta - self.a) / (self.a * (self.b - self.beta))).sqrt()
    }

    /// Antiderivative `a z + c log(z - a) - (t + c) log z` of `y` on `Ext(B)`.
    pub fn phi_primitive(&self, z: C64) -> C64 {
        self.a * z + self.c * (z - self.a).ln() - (self.t + self.c) * z.ln()
    }

    /// `y` on `Ext(B)`: `a(z - b)(z - beta)/(z(z - a))`.
    pub fn y_ext(&self, z: C64) -> C64 {
        self.a * (z - self.b) * (z - self.beta) / (z * (z - self.a))
    }

    /// Whether `z` lies in the closed annulus `K`.
    pub fn in_k(&self, z: C64) -> bool {
        z.norm() <= self.big_radius && (z - self.a).norm() >= self.small_radius
    }
}

/// `l = (1/t) Re[(t+c) log beta - c log(beta - a) - beta a]`.
pub fn robin_constant(a: f64, c_: f64, t: f64, beta: C64) -> f64 {
    ((t + c_) * beta.ln() - c_ * (beta - a).ln() - beta * a).re / t
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalGeometry {
    pub b_c: f64,
    /// `-4 N^{2/3} W_beta^2`.
    pub s: f64,
    /// `c^{1/6} a^{-1/3} b_c^{-2/3} N^{2/3} (t - t_c)`, the form used in the asymptotic formulas.
    pub s_linear: f64,
    pub gamma_c: f64,
    pub b_star: f64,
    pub gamma_star: f64,
    pub zeta_beta: C64,
    pub w_beta: C64,
}

impl CriticalGeometry {
    pub fn solve(post: &PostGeometry, big_n: f64) -> Result<Self> {
        let (a, c_, t) = (post.a, post.c, post.t);
        let tc = critical_time(a, c_);
        let b_c = a + c_.sqrt();
        let gamma_c = 2.0 * b_c.cbrt() * c_.powf(1.0 / 6.0) / a.cbrt();
        let s_linear = c_.powf(1.0 / 6.0) * a.powf(-1.0 / 3.0) * b_c.powf(-2.0 / 3.0)
            * big_n.powf(2.0 / 3.0)
            * (t - tc);

        let phi_b = post.phi_primitive(post.b) - post.phi_primitive(post.beta);
        let mag = 3f64.cbrt() / 2f64.powf(5.0 / 3.0) * phi_b.norm().cbrt();
        let w_beta = if t <= tc { c(mag, 0.0) } else { c(0.0, mag) };
        let s = (-4.0 * big_n.powf(2.0 / 3.0) * w_beta * w_beta).re;
        let zeta_beta = big_n.cbrt() * w_beta;

        let mut b_star = b_c + (t - tc) / (4.0 * b_c);
        let mut gamma_star = gamma_c;
        if (t - tc).abs() > 1e-12 * tc {
            let target = 0.5 * phi_b;
            let mut z = c(b_star, 0.0);
            for _ in 0..60 {
                let f = post.phi_primitive(z) - post.phi_primitive(post.beta) - target;
                let dz = f / post.y_ext(z);
                z -= dz;
                if dz.norm() < 1e-15 * b_c {
                    break;
                }
            }
            if z.is_finite() && (z.re - b_star).abs() < 0.5 * c_.sqrt() {
                b_star = z.re;
                let ys = post.y_ext(c(b_star, 0.0)).re;
                let g = 8.0 * (w_beta * w_beta).re / ys;
                if g.is_finite() && g > 0.0 {
                    gamma_star = g;
                }
            }
        }
        Ok(CriticalGeometry { b_c, s, s_linear, gamma_c, b_star, gamma_star, zeta_beta, w_beta })
    }
}

/// Regime-tagged geometry.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "regime")]
pub enum Geometry {
    #[serde(rename = "pre-critical")]
    Pre(PreGeometry),
    #[serde(rename = "post-critical")]
    Post(PostGeometry),
    #[serde(rename = "critical")]
    Critical { post: PostGeometry, crit: CriticalGeometry },
}

impl Geometry {
    /// Geometry for `params` in `regime`; `Critical` uses the post-critical
    /// formulas extended across `t_c`.
    pub fn solve(params: &ModelParams, regime: Regime) -> Result<Self> {
        Self::solve_at(params.a, params.c, params.t, params.big_n, regime)
    }

    pub fn solve_at(a: f64, c_: f64, t: f64, big_n: f64, regime: Regime) -> Result<Self> {
        Ok(match regime {
            Regime::PreCritical => Geometry::Pre(PreGeometry::solve(a, c_, t)?),
            Regime::PostCritical => Geometry::Post(PostGeometry::solve(a, c_, t)?),
            Regime::Critical { .. } => {
                let post = PostGeometry::solve(a, c_, t)?;
                let crit = CriticalGeometry::solve(&post, big_n)?;
                Geometry::Critical { post, crit }
            }
        })
    }

    pub fn a(&self) -> f64 {
        match self {
            Geometry::Pre(g) => g.a,
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.a,
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            Geometry::Pre(g) => g.c,
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.c,
        }
    }

    pub fn t(&self) -> f64 {
        match self {
            Geometry::Pre(g) => g.t,
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.t,
        }
    }

    pub fn beta(&self) -> C64 {
        match self {
            Geometry::Pre(g) => g.beta,
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.beta,
        }
    }

    pub fn b(&self) -> C64 {
        match self {
            Geometry::Pre(g) => c(g.b, 0.0),
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.b,
        }
    }

    pub fn post(&self) -> Option<&PostGeometry> {
        match self {
            Geometry::Pre(_) => None,
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => Some(g),
        }
    }

    pub fn pre(&self) -> Option<&PreGeometry> {
        match self {
            Geometry::Pre(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_pre(&self) -> bool {
        matches!(self, Geometry::Pre(_))
    }

    /// Logarithmic capacity of the polynomial convex hull of `K`.
    pub fn capacity(&self) -> f64 {
        match self {
            Geometry::Pre(g) => g.rho,
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.big_radius,
        }
    }

    pub fn ell_2d(&self) -> f64 {
        match self {
            Geometry::Pre(g) => g.ell_2d(),
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.ell_2d(),
        }
    }

    /// Length scale used for step sizes and tolerances.
    pub fn scale(&self) -> f64 {
        2.0 * (self.t() + self.c()).sqrt()
    }

    /// `y` on the reference sheet, before the side of the cut is applied.
    /// Pre-critical: the chord branch of the square root; otherwise the
    /// `Ext(B)` formula.
    pub fn y_reference(&self, z: C64) -> C64 {
        match self {
            Geometry::Pre(g) => g.a * (z - g.b) * g.w_chord(z) / ((z - g.a) * z),
            Geometry::Post(g) | Geometry::Critical { post: g, .. } => g.y_ext(z),
        }
    }

    /// `y(z)^2`, a rational function free of branch choices.
    pub fn y_squared(&self, z: C64) -> C64 {
        match self {
            Geometry::Pre(g) => {
                let u = g.a * (z - g.b) / ((z - g.a) * z);
                u * u * (z - g.beta) * (z - g.beta.conj())
            }
            _ => {
                let y = self.y_reference(z);
                y * y
            }
        }
    }
}

fn check_regular(geo: &Geometry, z: C64) -> Result<()> {
    let tol = 1e-14 * geo.scale();
    if z.norm() < tol || (z - geo.a()).norm() < tol {
        return Err(Error::Pole(z));
    }
    Ok(())
}

/// `y(z)` with `B` as branch cut: `y -> a` at infinity pre-critically and
/// `+` on `Ext(B)` otherwise.
pub fn eval_y(geo: &Geometry, cut: &Cut, z: C64) -> Result<C64> {
    check_regular(geo, z)?;
    cut.ensure_off(z)?;
    Ok(cut.sheet(z) * geo.y_reference(z))
}

pub(crate) fn y_on_sheet(geo: &Geometry, cut: &Cut, z: C64) -> C64 {
    cut.sheet(z) * geo.y_reference(z)
}

/// Schwarz function `a/2 + c/(2(z-a)) + (c+t)/(2z) - y/2`.
pub fn schwarz_s(geo: &Geometry, cut: &Cut, z: C64) -> Result<C64> {
    let y = eval_y(geo, cut, z)?;
    Ok(schwarz_from_y(geo, z, y))
}

pub(crate) fn schwarz_from_y(geo: &Geometry, z: C64, y: C64) -> C64 {
    let (a, c_, t) = (geo.a(), geo.c(), geo.t());
    0.5 * a + 0.5 * c_ / (z - a) + 0.5 * (c_ + t) / z - 0.5 * y
}

/// Continuation of `S` through the cut, `S + y`.
pub fn schwarz_back(geo: &Geometry, cut: &Cut, z: C64) -> Result<C64> {
    let y = eval_y(geo, cut, z)?;
    Ok(schwarz_from_y(geo, z, y) + y)
}

/// Pre-critical inverse conformal map `F`, analytic off `B`, `F(z) ~ z/rho`.
#[allow(non_snake_case)]
pub fn conformal_F(geo: &PreGeometry, cut: &Cut, z: C64) -> Result<C64> {
    cut.ensure_off(z)?;
    Ok(conformal_f_inverse(geo, cut.sheet(z), z))
}

pub(crate) fn conformal_f_inverse(geo: &PreGeometry, sheet: f64, z: C64) -> C64 {
    (z + geo.abs_beta + sheet * geo.w_chord(z)) / (2.0 * geo.rho)
}

/// `rho F'(z)` written through `v = F(z)`: `1/(1 + (kappa/rho)/(v - alpha)^2)`.
pub(crate) fn rho_f_prime(geo: &PreGeometry, v: C64) -> C64 {
    let d = v - geo.alpha;
    1.0 / (1.0 + (geo.kappa / geo.rho) / (d * d))
}

/// `sqrt(rho F'(z))` with the branch tending to 1 at infinity.
pub(crate) fn sqrt_rho_f_prime(geo: &PreGeometry, v: C64) -> C64 {
    let d = v - geo.alpha;
    1.0 / (1.0 + (geo.kappa / geo.rho) / (d * d)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_pre() -> PreGeometry {
        PreGeometry::solve(3.7619, 6.9168, 4.0557).unwrap()
    }

    #[test]
    fn reference_pre_parameters() {
        let g = reference_pre();
        assert!((g.rho - 2.1).abs() < 1e-3, "{}", g.rho);
        assert!((g.alpha - 0.4).abs() < 1e-3, "{}", g.alpha);
        assert!((g.kappa - 0.5).abs() < 1e-3, "{}", g.kappa);
        assert!((g.beta - c(-0.41, 2.04939)).norm() < 2e-3, "{}", g.beta);
        assert!((g.b - 5.25).abs() < 5e-3, "{}", g.b);
        let r = g.residuals;
        assert!(r.cubic < 1e-14 && r.val_s1 < 1e-11 && r.val_s2 < 1e-11 && r.val_s3 < 1e-11, "{r:?}");
    }

    #[test]
    fn b_identities() {
        for (a, c_, t) in [(1.0, 1.0, 1.0), (1.0, 1.0 / 6.0, 5.0 / 6.0), (3.7619, 6.9168, 4.0557), (2.0, 0.3, 0.5)] {
            let g = PreGeometry::solve(a, c_, t).unwrap();
            assert!((g.b - (a - g.beta.re + t / a)).abs() < 1e-11 * g.b);
            assert!((g.b * g.abs_beta - (t + c_)).abs() < 1e-11 * (t + c_));
            assert!((g.abs_beta - g.beta.norm()).abs() < 1e-12 * g.abs_beta);
            assert!(g.b > a);
            assert!(1.0 - g.alpha * g.alpha > g.kappa / g.rho);
        }
    }

    #[test]
    fn map_identities() {
        let g = reference_pre();
        assert!((g.f(c(1.0 / g.alpha, 0.0)).unwrap() - g.a).norm() < 1e-10);
        let fm1 = g.f(c(-1.0, 0.0)).unwrap();
        assert!((fm1 - (-g.rho - g.kappa / (g.alpha * (1.0 + g.alpha)))).norm() < 1e-12);
        assert!((g.deck(g.v_beta).unwrap() - g.v_beta).norm() < 1e-13);
        let v = c(1.3, -0.7);
        assert!((g.deck(g.deck(v).unwrap()).unwrap() - v).norm() < 1e-13);
        assert!((g.f(v).unwrap() - (g.rho / g.alpha) * v * g.deck(v).unwrap()).norm() < 1e-12);
        assert!((g.f(g.v_beta).unwrap() - g.beta).norm() < 1e-12);
        assert!(g.f(c(g.alpha, 0.0)).is_err());
    }

    #[test]
    fn enclosed_area_is_pi_t() {
        let g = reference_pre();
        let n = 4096;
        let pts = g.boundary_polygon(n);
        let area: f64 = (0..n).map(|k| {
            let (p, q) = (pts[k], pts[(k + 1) % n]);
            0.5 * (p.re * q.im - q.re * p.im)
        }).sum();
        assert!((area - PI * g.t).abs() < 1e-5 * area, "{area}");
    }

    #[test]
    fn post_identities() {
        let g = PostGeometry::solve(1.0, 1.0 / 6.0, 59.0 / 30.0).unwrap();
        assert!(((g.beta + g.b).re - 89.0 / 30.0).abs() < 1e-13 * 3.0);
        assert!(((g.beta * g.b).re - 64.0 / 30.0).abs() < 1e-13 * 3.0);
        assert!(g.a < g.beta.re && g.beta.re < g.b.re);
        let g = PostGeometry::solve(1.0, 1.0, 3.0).unwrap();
        assert!((g.beta - 2.0).norm() < 1e-12 && (g.b - 2.0).norm() < 1e-12);
        let g = PostGeometry::solve(1.0, 1.0, 2.9).unwrap();
        assert!(g.beta.im > 0.0 && (g.b - g.beta.conj()).norm() < 1e-15);
    }

    #[test]
    fn critical_constants() {
        let post = PostGeometry::solve(1.0, 1.0 / 6.0, 55.0 / 30.0).unwrap();
        let cg = CriticalGeometry::solve(&post, 30.0).unwrap();
        assert!((cg.s - cg.s_linear).abs() < 0.05 * cg.s_linear.abs() + 1e-3, "{} {}", cg.s, cg.s_linear);
        assert!(cg.s > 0.0 && cg.w_beta.re == 0.0);
        assert!((cg.gamma_star - cg.gamma_c).abs() < 0.2 * cg.gamma_c, "{} {}", cg.gamma_star, cg.gamma_c);
        let post = PostGeometry::solve(1.0, 1.0 / 6.0, 54.0 / 30.0).unwrap();
        let cg = CriticalGeometry::solve(&post, 30.0).unwrap();
        assert!(cg.s < 0.0 && cg.w_beta.im == 0.0);
        assert!((cg.s - cg.s_linear).abs() < 0.05 * cg.s_linear.abs() + 1e-3);
    }

    #[test]
    fn ell_2d_continuous_at_tc() {
        for (a, c_) in [(1.0, 1.0 / 6.0), (1.0, 1.0), (2.0, 0.5)] {
            let tc = critical_time(a, c_);
            let eps = 1e-9;
            let lo = PreGeometry::solve(a, c_, tc - eps).unwrap().ell_2d();
            let hi = PostGeometry::solve(a, c_, tc + eps).unwrap().ell_2d();
            assert!((lo - hi).abs() < 1e-6, "{a} {c_}: {lo} {hi}");
        }
    }
}

//! The potentials `phi`, `g`, the Robin constants and the effective
//! potentials `U_OP = Re phi`, `U = Q - 2t Re g + l_2D` and `U_2D`.
//!
//! Post-critically everything has a closed form. Pre-critically `g` is
//! integrated from a far real point `R0` along a path avoiding `B`, using
//! `g' = (S - c/(z-a))/t`, which is analytic off `B`; `phi` then follows
//! from `phi = V - 2t g + t l`.

use std::f64::consts::PI;

use crate::contours::{phi_near_cut, trace_branch_cut, Cut, PhiField, SegIndex};
use crate::geometry::{schwarz_from_y, Geometry, PreGeometry};
use crate::quad::adaptive;
use crate::{c, Error, Result, C64};

/// `V(z) = a z - c log(z - a) + (c+t) log z`.
pub fn external_v(a: f64, c_: f64, t: f64, z: C64) -> C64 {
    a * z - c_ * (z - a).ln() + (c_ + t) * z.ln()
}

/// `Q(z) = |z|^2 - 2c log|z - a|`.
pub fn external_q(a: f64, c_: f64, z: C64) -> f64 {
    z.norm_sqr() - 2.0 * c_ * (z - a).norm().ln()
}

/// Visibility graph of waypoints around `B`, rooted at `R0`.
#[derive(Debug, Clone)]
struct Router {
    points: Vec<C64>,
    dist: Vec<f64>,
    parent: Vec<usize>,
}

impl Router {
    fn build(cut: &Cut, r0: C64, geo: &PreGeometry) -> Self {
        let curve = &cut.curve;
        let pts = &curve.points;
        let n = pts.len();
        let scale = 2.0 * (geo.t + geo.c).sqrt();
        let mut points = vec![r0];
        let far = pts.iter().map(|p| p.norm()).fold(0.0, f64::max) * 1.3 + 0.5 * scale;
        for k in 0..24 {
            points.push(C64::from_polar(far, 2.0 * PI * k as f64 / 24.0));
        }
        let off = 0.02 * scale;
        let samples = 64;
        for k in 1..samples {
            let i = k * (n - 1) / samples;
            let tan = pts[i + 1] - pts[i - 1];
            let nrm = C64::i() * tan / tan.norm();
            for side in [1.0, -1.0] {
                let q = pts[i] + side * off * nrm;
                if cut.distance(q) > 0.5 * off {
                    points.push(q);
                }
            }
        }
        for (end, inward) in [(pts[0], pts[1]), (pts[n - 1], pts[n - 2])] {
            let dir = (end - inward) / (end - inward).norm();
            for k in 0..8 {
                let q = end + off * dir * C64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0);
                if cut.distance(q) > 0.3 * off {
                    points.push(q);
                }
            }
        }
        let m = points.len();
        let mut dist = vec![f64::INFINITY; m];
        let mut parent = vec![usize::MAX; m];
        let mut done = vec![false; m];
        dist[0] = 0.0;
        for _ in 0..m {
            let (u, du) = match (0..m).filter(|&i| !done[i]).map(|i| (i, dist[i])).min_by(|a, b| a.1.total_cmp(&b.1)) {
                Some(x) if x.1.is_finite() => x,
                _ => break,
            };
            done[u] = true;
            for v in 0..m {
                if done[v] {
                    continue;
                }
                let w = (points[v] - points[u]).norm();
                if du + w < dist[v] && !cut.blocks(points[u], points[v]) {
                    dist[v] = du + w;
                    parent[v] = u;
                }
            }
        }
        Router { points, dist, parent }
    }

    /// Polyline from `R0` to `z` that does not meet `B`.
    fn route(&self, cut: &Cut, z: C64) -> Option<Vec<C64>> {
        if !cut.blocks(self.points[0], z) {
            return Some(vec![self.points[0], z]);
        }
        let mut order: Vec<usize> = (1..self.points.len()).filter(|&i| self.dist[i].is_finite()).collect();
        order.sort_by(|&i, &j| {
            (self.dist[i] + (self.points[i] - z).norm()).total_cmp(&(self.dist[j] + (self.points[j] - z).norm()))
        });
        for i in order {
            if !cut.blocks(self.points[i], z) {
                let mut path = vec![z];
                let mut k = i;
                while k != usize::MAX {
                    path.push(self.points[k]);
                    k = self.parent[k];
                }
                path.reverse();
                return Some(path);
            }
        }
        None
    }
}

/// Geometry, cut and precomputed constants for evaluating the potentials.
#[derive(Debug, Clone)]
pub struct PotentialContext {
    pub geo: Geometry,
    pub cut: Cut,
    /// Robin constant `l`.
    pub ell: f64,
    pub ell_2d: f64,
    /// Pre-critical `phi(b)`, real and positive.
    pub phi_of_b: Option<f64>,
    r0: f64,
    g_r0: f64,
    router: Option<Router>,
    boundary: Option<SegIndex>,
}

impl PotentialContext {
    pub fn new(geo: Geometry) -> Result<Self> {
        let cut = trace_branch_cut(&geo)?;
        Self::with_cut(geo, cut)
    }

    pub fn with_cut(geo: Geometry, cut: Cut) -> Result<Self> {
        let ell_2d = geo.ell_2d();
        match &geo {
            Geometry::Pre(pg) => {
                let pg = *pg;
                let far = cut.curve.points.iter().map(|p| p.norm()).fold(0.0, f64::max);
                let r0 = 2.0 * (far + pg.a + pg.b);
                let mut ctx = PotentialContext {
                    geo,
                    cut,
                    ell: 0.0,
                    ell_2d,
                    phi_of_b: None,
                    r0,
                    g_r0: 0.0,
                    router: None,
                    boundary: None,
                };
                let phi_b = ctx.phi_b_pre(&pg)?;
                ctx.phi_of_b = Some(phi_b);
                ctx.ell = ctx.ell_pre(&pg, phi_b);
                ctx.g_r0 = ctx.g_at_r0(&pg);
                ctx.router = Some(Router::build(&ctx.cut, c(r0, 0.0), &pg));
                let ring = pg.boundary_polygon(4096);
                let segs = (0..ring.len()).map(|k| (ring[k], ring[(k + 1) % ring.len()])).collect();
                ctx.boundary = Some(SegIndex::new(segs, 0.01 * ctx.geo.scale()));
                Ok(ctx)
            }
            Geometry::Post(p) | Geometry::Critical { post: p, .. } => {
                let ell = p.ell;
                Ok(PotentialContext {
                    geo,
                    cut,
                    ell,
                    ell_2d,
                    phi_of_b: None,
                    r0: 0.0,
                    g_r0: 0.0,
                    router: None,
                    boundary: None,
                })
            }
        }
    }

    fn y(&self, z: C64, sheet: f64) -> C64 {
        sheet * self.geo.y_reference(z)
    }

    /// `phi(b) = int_beta^b y` along the straight segment, which stays off `B`.
    fn phi_b_pre(&self, pg: &PreGeometry) -> Result<f64> {
        let beta = pg.beta;
        let b = c(pg.b, 0.0);
        let z1 = beta + 1e-3 * (b - beta);
        if self.cut.blocks(z1, b) {
            return Err(Error::Routing(b));
        }
        let field = PhiField { geo: &self.geo };
        let y1 = self.y(z1, self.cut.sheet(z1));
        let head = field.integral_from_zero(beta, z1, y1);
        let (body, _) = adaptive(
            |s| {
                let z = z1 + s * (b - z1);
                self.y(z, self.cut.sheet(z)) * (b - z1)
            },
            0.0,
            1.0,
            1e-15,
            1e-14,
            2000,
        );
        Ok((head + body).re)
    }

    /// `x^2 (y(x) - a + t/x)` at `x = 1/u` on the real axis beyond `b`,
    /// written through `y^2 - (a - t/x)^2` whose two leading coefficients
    /// cancel exactly.
    fn tail_x2(&self, pg: &PreGeometry, u: f64) -> f64 {
        let (a, t, b) = (pg.a, pg.t, pg.b);
        let (p, q) = (pg.beta.re, pg.beta.norm_sqr());
        // a^2 (x-b)^2 (x^2 - 2px + q) - (ax - t)^2 (x - a)^2, coefficients of x^2, x, 1.
        let l = [b * b, -2.0 * b, 1.0];
        let r = [q, -2.0 * p, 1.0];
        let m = [t * t, -2.0 * a * t, a * a];
        let n = [a * a, -2.0 * a, 1.0];
        let coef = |k: usize| -> f64 {
            let mut s = 0.0;
            for i in 0..=k.min(2) {
                if k - i <= 2 {
                    s += a * a * l[i] * r[k - i] - m[i] * n[k - i];
                }
            }
            s
        };
        let low = coef(2) + coef(1) * u + coef(0) * u * u;
        let y_plus_l = if u == 0.0 { 2.0 * a } else { self.geo.y_reference(c(1.0 / u, 0.0)).re + a - t * u };
        low / ((1.0 - a * u).powi(2) * y_plus_l)
    }

    /// `t l = phi(b) + int_b^inf (y - a + t/x) dx - a b + t log b`.
    fn ell_pre(&self, pg: &PreGeometry, phi_b: f64) -> f64 {
        let (a, t, b) = (pg.a, pg.t, pg.b);
        let f = |x: f64| self.geo.y_reference(c(x, 0.0)).re - a + t / x;
        let big = 4.0 * b.max(self.r0);
        let (i1, _) = adaptive(|x| C64::new(f(x), 0.0), b, big, 1e-15, 1e-14, 2000);
        let (i2, _) = adaptive(|u| C64::new(self.tail_x2(pg, u), 0.0), 0.0, 1.0 / big, 1e-16, 1e-14, 200);
        (phi_b + i1.re + i2.re - a * b + t * b.ln()) / t
    }

    /// `g(R0) = log R0 - int_{R0}^inf (g'(x) - 1/x) dx`, where
    /// `x^2 (g' - 1/x) = -(c a/(2(1 - a u)) + x^2 (y - a + t/x)/2)/t`.
    fn g_at_r0(&self, pg: &PreGeometry) -> f64 {
        let (a, c_, t) = (pg.a, pg.c, pg.t);
        let (i, _) = adaptive(
            |u| C64::new(-(c_ * a / (2.0 * (1.0 - a * u)) + 0.5 * self.tail_x2(pg, u)) / t, 0.0),
            0.0,
            1.0 / self.r0,
            1e-16,
            1e-14,
            200,
        );
        self.r0.ln() - i.re
    }

    /// `g'(z) = (S(z) - c/(z-a))/t` with `y` on the given sheet.
    fn g_prime(&self, z: C64, sheet: f64) -> C64 {
        let y = self.y(z, sheet);
        let (a, c_, t) = (self.geo.a(), self.geo.c(), self.geo.t());
        (schwarz_from_y(&self.geo, z, y) - c_ / (z - a)) / t
    }

    /// `int_p^q g'` along a segment that avoids `B`, splitting where it crosses
    /// the chord of the reference square root.
    fn g_segment(&self, p: C64, q: C64, sheet_p: f64) -> C64 {
        let beta = self.geo.beta();
        let mut breaks = vec![0.0];
        if q.re != p.re {
            let s = (beta.re - p.re) / (q.re - p.re);
            if s > 0.0 && s < 1.0 && (p.im + s * (q.im - p.im)).abs() < beta.im {
                breaks.push(s);
            }
        }
        breaks.push(1.0);
        let mut total = C64::new(0.0, 0.0);
        let mut sheet = sheet_p;
        let tol = 1e-15 * (1.0 + (q - p).norm());
        for w in breaks.windows(2) {
            let (v, _) = adaptive(|s| self.g_prime(p + s * (q - p), sheet) * (q - p), w[0], w[1], tol, 1e-14, 4000);
            total += v;
            sheet = -sheet;
        }
        total
    }

    fn check_point(&self, z: C64) -> Result<()> {
        let tol = 1e-12 * self.geo.scale();
        if z.norm() < tol || (z - self.geo.a()).norm() < tol {
            return Err(Error::Pole(z));
        }
        self.cut.ensure_off(z)
    }

    /// `g(z)`; `g(z) - log z -> 0` at infinity.
    pub fn g(&self, z: C64) -> Result<C64> {
        self.check_point(z)?;
        match &self.geo {
            Geometry::Pre(_) => {
                let router = self.router.as_ref().unwrap();
                let path = router.route(&self.cut, z).ok_or(Error::Routing(z))?;
                let mut total = C64::new(self.g_r0, 0.0);
                for w in path.windows(2) {
                    total += self.g_segment(w[0], w[1], self.cut.sheet(w[0]));
                }
                Ok(total)
            }
            Geometry::Post(p) | Geometry::Critical { post: p, .. } => {
                if self.cut.inside(z) {
                    Ok(p.a / p.t * z + self.ell)
                } else {
                    Ok(z.ln() + p.c / p.t * (z / (z - p.a)).ln())
                }
            }
        }
    }

    /// `phi(z) = int_beta^z y`. Near `B` the path follows `B`; elsewhere
    /// `phi = V - 2t g + t l` with principal logarithms, so only `Re phi`
    /// and `e^{N phi}` for integer `Nc` are branch-free there.
    pub fn phi(&self, z: C64) -> Result<C64> {
        self.check_point(z)?;
        if z == self.geo.beta() {
            return Ok(C64::new(0.0, 0.0));
        }
        match &self.geo {
            Geometry::Pre(_) => {
                if self.cut.distance(z) < 0.1 * self.geo.scale() {
                    return Ok(phi_near_cut(&self.geo, &self.cut, z));
                }
                let (a, c_, t) = (self.geo.a(), self.geo.c(), self.geo.t());
                Ok(external_v(a, c_, t, z) - 2.0 * t * self.g(z)? + t * self.ell)
            }
            Geometry::Post(p) | Geometry::Critical { post: p, .. } => {
                let ext = p.phi_primitive(z) - p.phi_primitive(p.beta);
                Ok(if self.cut.inside(z) { -ext } else { ext })
            }
        }
    }

    /// `U_OP = Re phi`.
    pub fn u_op(&self, z: C64) -> Result<f64> {
        self.check_point(z)?;
        match &self.geo {
            Geometry::Pre(_) => {
                let (a, c_, t) = (self.geo.a(), self.geo.c(), self.geo.t());
                let rv = a * z.re - c_ * (z - a).norm().ln() + (c_ + t) * z.norm().ln();
                Ok(rv - 2.0 * t * self.g(z)?.re + t * self.ell)
            }
            _ => Ok(self.phi(z)?.re),
        }
    }

    pub fn q(&self, z: C64) -> f64 {
        external_q(self.geo.a(), self.geo.c(), z)
    }

    /// `U = Q - 2t Re g + l_2D`.
    pub fn u(&self, z: C64) -> Result<f64> {
        Ok(self.q(z) - 2.0 * self.geo.t() * self.g(z)?.re + self.ell_2d)
    }

    pub fn in_k(&self, z: C64) -> bool {
        match &self.geo {
            Geometry::Pre(_) => self.boundary.as_ref().unwrap().ray_crossings(z) % 2 == 1,
            Geometry::Post(p) | Geometry::Critical { post: p, .. } => p.in_k(z),
        }
    }

    /// `U_2D`: zero on `K`, `U` elsewhere.
    pub fn u_2d(&self, z: C64) -> Result<f64> {
        if self.in_k(z) {
            Ok(0.0)
        } else {
            self.u(z)
        }
    }

    /// `N phi(z)` for `z` near `B`, on the side of `B` containing `z`, with
    /// the imaginary part continuous along the lens so that `e^{N phi}` is
    /// well defined there.
    pub(crate) fn n_phi_near_cut(&self, z: C64, big_n: f64) -> C64 {
        match &self.geo {
            Geometry::Pre(_) => big_n * phi_near_cut(&self.geo, &self.cut, z),
            Geometry::Post(p) | Geometry::Critical { post: p, .. } => {
                // e^{N phi_Ext} = e^{Na(z-beta)} ((z-a)/z / ((beta-a)/beta))^m (beta/z)^{n-r}
                let nt = (big_n * p.t).round();
                let m = big_n * p.c;
                let ext = big_n * p.a * (z - p.beta) + m * ((1.0 - p.a / z).ln() - (1.0 - p.a / p.beta).ln())
                    + nt * (p.beta / z).ln();
                if self.cut.inside(z) {
                    -ext
                } else {
                    ext
                }
            }
        }
    }
}

/// `phi(z)`.
pub fn eval_phi(ctx: &PotentialContext, z: C64) -> Result<C64> {
    ctx.phi(z)
}

/// `g(z)`.
pub fn eval_g(ctx: &PotentialContext, z: C64) -> Result<C64> {
    ctx.g(z)
}

pub fn eval_u(ctx: &PotentialContext, z: C64) -> Result<f64> {
    ctx.u(z)
}

pub fn eval_u_op(ctx: &PotentialContext, z: C64) -> Result<f64> {
    ctx.u_op(z)
}

pub fn eval_u_2d(ctx: &PotentialContext, z: C64) -> Result<f64> {
    ctx.u_2d(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Regime;

    fn pre_ctx(a: f64, c_: f64, t: f64) -> PotentialContext {
        PotentialContext::new(Geometry::solve_at(a, c_, t, 1.0, Regime::PreCritical).unwrap()).unwrap()
    }

    #[test]
    fn u_vanishes_on_boundary_pre() {
        for (a, c_, t) in [(1.0, 1.0, 1.0), (1.0, 1.0 / 6.0, 5.0 / 6.0), (3.7619, 6.9168, 4.0557)] {
            let ctx = pre_ctx(a, c_, t);
            let g = *ctx.geo.pre().unwrap();
            for k in 0..12 {
                let th = 2.0 * PI * (k as f64 + 0.3) / 12.0;
                let z = g.boundary_point(th);
                let u = ctx.u(z).unwrap();
                assert!(u.abs() < 1e-9, "({a},{c_},{t}) theta={th}: U={u:e}");
                let eps = 1e-3;
                let up = ctx.u(z + eps * g.boundary_normal(th)).unwrap();
                assert!((up / (2.0 * eps * eps) - 1.0).abs() < 0.05, "{up}");
            }
        }
    }

    #[test]
    fn g_is_log_at_infinity() {
        let ctx = pre_ctx(1.0, 1.0, 1.0);
        let g = *ctx.geo.pre().unwrap();
        // g - log z ~ -m1/z with m1 = (1/(pi t)) int_K w dA = (1/(2 pi i t)) oint |w|^2 dw.
        let n = 20000;
        let mut m1 = C64::new(0.0, 0.0);
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            let v = C64::from_polar(1.0, th);
            let w = g.boundary_point(th);
            m1 += w.norm_sqr() * g.f_prime(v) * C64::i() * v * (2.0 * PI / n as f64);
        }
        m1 /= 2.0 * PI * C64::i() * g.t;
        for z in [c(1e6, 0.0), c(-1e6, 3.0), c(0.0, -1e6)] {
            let d = ctx.g(z).unwrap() - z.ln();
            assert!(d.norm() < 1e-6, "{z}: {d}");
            assert!((d * z + m1).norm() < 1e-4, "{z}: {} vs {m1}", d * z);
        }
        assert!(ctx.phi_of_b.unwrap() > 0.0);
    }

    #[test]
    fn post_closed_forms() {
        let geo = Geometry::solve_at(1.0, 1.0 / 6.0, 59.0 / 30.0, 30.0, Regime::PostCritical).unwrap();
        let ctx = PotentialContext::new(geo).unwrap();
        let p = *ctx.geo.post().unwrap();
        for k in 0..8 {
            let z = C64::from_polar(p.big_radius, 0.4 + k as f64 * 0.7);
            assert!(ctx.u(z).unwrap().abs() < 1e-12);
        }
        // Re g continuous across B at beta.
        let d = 1e-6;
        let inner = ctx.g(p.beta - d).unwrap().re;
        let outer = ctx.g(p.beta + d).unwrap().re;
        assert!((inner - outer).abs() < 1e-5);
    }

    #[test]
    fn jump_relation_pre() {
        let ctx = pre_ctx(1.0, 1.0, 1.0);
        let pts = &ctx.cut.curve.points;
        let t = ctx.geo.t();
        for i in [pts.len() / 4, pts.len() / 2, 3 * pts.len() / 4] {
            let tan = pts[i + 1] - pts[i - 1];
            let nrm = C64::i() * tan / tan.norm();
            let (zp, zm) = (pts[i] + 1e-7 * nrm, pts[i] - 1e-7 * nrm);
            let lhs = t * ctx.g(zp).unwrap().re;
            let rhs = t * ctx.g(zm).unwrap().re + ctx.u_op(zm).unwrap();
            assert!((lhs - rhs).abs() < 1e-6, "{lhs} {rhs}");
            assert!(ctx.u_op(zp).unwrap().abs() < 1e-5);
        }
    }
}

//! Strong asymptotics of `P_{n,N}`, the norming constants `h_n` and the
//! one-point density `rho_n`, dispatched on the regime and on the zone of `z`.
//!
//! Every value is carried as a complex logarithm until the very end, since
//! `e^{N t g}` overflows already for moderate `N`.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::contours::{classify_zone, Contours, PhiField, Zone, ZoneTag};
use crate::geometry::{
    conformal_F, rho_f_prime, sqrt_rho_f_prime, y_on_sheet, CriticalGeometry, Geometry, PostGeometry, PreGeometry,
};
use crate::model::{ModelParams, Regime, DEFAULT_WINDOW};
use crate::potentials::PotentialContext;
use crate::specialfn::{airy_ai, entire_f, hastings_mcleod, HastingsMcLeodTable};
use crate::{c, Error, Result, C64};

/// Relative error order of a leading term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorOrder {
    #[serde(rename = "N^-1")]
    NInv,
    #[serde(rename = "N^-3/2")]
    NInvThreeHalves,
    #[serde(rename = "N^-2/3")]
    NInvTwoThirds,
    #[serde(rename = "N^-1/3")]
    NInvThird,
    #[serde(rename = "N^-1/2")]
    NInvHalf,
}

impl ErrorOrder {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorOrder::NInv => "N^-1",
            ErrorOrder::NInvThreeHalves => "N^-3/2",
            ErrorOrder::NInvTwoThirds => "N^-2/3",
            ErrorOrder::NInvThird => "N^-1/3",
            ErrorOrder::NInvHalf => "N^-1/2",
        }
    }

    pub fn exponent(&self) -> f64 {
        match self {
            ErrorOrder::NInv => -1.0,
            ErrorOrder::NInvThreeHalves => -1.5,
            ErrorOrder::NInvTwoThirds => -2.0 / 3.0,
            ErrorOrder::NInvThird => -1.0 / 3.0,
            ErrorOrder::NInvHalf => -0.5,
        }
    }
}

/// `P(z) = value * e^{log_scale}` with `1 <= |value| < 2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvalResult {
    pub value: C64,
    pub log_scale: f64,
    pub zone: ZoneTag,
    pub error_order: ErrorOrder,
    /// Set when only the order-of-magnitude envelope is known.
    pub bound_only: bool,
}

impl EvalResult {
    fn from_log(l: C64, zone: ZoneTag, error_order: ErrorOrder, bound_only: bool) -> Self {
        let k = (l.re / LN_2).floor();
        let log_scale = k * LN_2;
        let value = C64::from_polar((l.re - log_scale).exp(), l.im);
        EvalResult { value, log_scale, zone, error_order, bound_only }
    }

    pub fn ln_abs(&self) -> f64 {
        self.log_scale + self.value.norm().ln()
    }

    pub fn arg(&self) -> f64 {
        self.value.arg()
    }

    /// `log P` with the imaginary part in `(-pi, pi]`.
    pub fn ln(&self) -> C64 {
        c(self.ln_abs(), self.arg())
    }
}

/// Local variables of the parametrices at the branch points.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct LocalCoordinates {
    /// `(4/3) zeta^{3/2} = N (phi - phi(conj beta))`, pre-critical near `conj beta`.
    pub zeta_airy: Option<C64>,
    pub c_beta_bar: Option<C64>,
    pub gamma_1: Option<f64>,
    /// Post-critical `zeta` with `zeta^2 = -2 N phi(z)`, close to `(z - beta) sqrt(N) / gamma_1`.
    pub xi: Option<C64>,
    pub s: Option<f64>,
}

/// `log(e^x + e^y)`.
fn log_add(x: C64, y: C64) -> C64 {
    let (hi, lo) = if x.re >= y.re { (x, y) } else { (y, x) };
    if lo.re == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp()).ln()
}

/// `phi` continued from `beta` with ratio logarithms; `-2 N phi = zeta^2` near `beta`.
fn post_phi(p: &PostGeometry, z: C64) -> C64 {
    p.a * (z - p.beta) + p.c * ((z - p.a) / (p.beta - p.a)).ln() - (p.t + p.c) * (z / p.beta).ln()
}

/// Whether the exterior term survives on the inner side of `B`.
///
/// It is absent in the sector around `(a, beta)` where `Re zeta < 0`,
/// bounded by the curves from `beta` on which `phi` is real and positive.
/// Near `beta`, `Im zeta^2 = -2N Im phi` has the sign of `Re zeta Im z`.
fn exterior_term_inside(p: &PostGeometry, z: C64) -> bool {
    let side = if z.im >= 0.0 { 1.0 } else { -1.0 };
    post_phi(p, z).im * side < 0.0
}

/// Everything needed to evaluate the asymptotics for one parameter tuple.
#[derive(Debug, Clone)]
pub struct AsymptoticContext {
    pub params: ModelParams,
    pub regime: Regime,
    pub potentials: PotentialContext,
    pub contours: Contours,
    hm: Option<HastingsMcLeodTable>,
    /// Pre-critical sign of the second term of the two-term formula on the
    /// left and right side of `B`.
    lens_sign: [f64; 2],
    /// Pre-critical `zeta ~ lambda (z - conj beta)` near `conj beta`.
    airy_lambda: C64,
}

/// Half-range of the Hastings-McLeod table built for the critical regime.
pub const HM_RANGE: f64 = 10.0;

impl AsymptoticContext {
    pub fn new(params: ModelParams) -> Result<Self> {
        Self::with_regime(params, params.classify(DEFAULT_WINDOW))
    }

    pub fn with_regime(params: ModelParams, regime: Regime) -> Result<Self> {
        let geo = Geometry::solve(&params, regime)?;
        let big_n = params.big_n;
        let radius = match &geo {
            Geometry::Pre(g) => 0.1 * (g.beta - g.b).norm(),
            Geometry::Post(p) => (6.0 * p.gamma_1().norm() / big_n.sqrt())
                .min(0.5 * (p.beta - p.a).norm())
                .min(0.5 * (p.b - p.beta).norm()),
            Geometry::Critical { crit, .. } => 0.5 * crit.gamma_c * big_n.powf(-1.0 / 3.0),
        };
        let contours = Contours::build(&geo, radius)?;
        let potentials = PotentialContext::with_cut(geo, contours.cut.clone())?;
        let hm = match regime {
            Regime::Critical { .. } => Some(hastings_mcleod(-HM_RANGE, HM_RANGE, 4000)?),
            _ => None,
        };
        let mut ctx = AsymptoticContext {
            params,
            regime,
            potentials,
            contours,
            hm,
            lens_sign: [1.0, 1.0],
            airy_lambda: c(0.0, 0.0),
        };
        if let Geometry::Pre(pg) = ctx.potentials.geo {
            ctx.lens_sign = ctx.pre_lens_signs(&pg)?;
            ctx.airy_lambda = ctx.pre_airy_lambda(&pg);
        }
        Ok(ctx)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.potentials.geo
    }

    pub fn hm_table(&self) -> Option<&HastingsMcLeodTable> {
        self.hm.as_ref()
    }

    /// `N t = n - r`, an integer.
    fn nt(&self) -> f64 {
        (self.params.n as i64 - self.params.r) as f64
    }

    fn r(&self) -> f64 {
        self.params.r as f64
    }

    fn zone(&self, z: C64) -> Result<ZoneTag> {
        classify_zone(z, &self.contours)
    }

    /// Second-term sign on each side of `B`, fixed by requiring that the
    /// second term on one side continue the first term of the other.
    fn pre_lens_signs(&self, pg: &PreGeometry) -> Result<[f64; 2]> {
        let pts = &self.contours.cut.curve.points;
        let mid = pts.len() / 2;
        let tan = pts[mid + 1] - pts[mid - 1];
        let normal = C64::i() * tan / tan.norm();
        let delta = 1e-6 * self.geometry().scale();
        let left = pts[mid] + delta * normal;
        let right = pts[mid] - delta * normal;
        let cut = &self.contours.cut;
        let mut signs = [1.0, 1.0];
        for (k, (here, there)) in [(left, right), (right, left)].into_iter().enumerate() {
            let v = conformal_F(pg, cut, here)?;
            let second = sqrt_rho_f_prime(pg, v) * (pg.kappa / pg.rho).sqrt() / (v - pg.alpha);
            let other = sqrt_rho_f_prime(pg, conformal_F(pg, cut, there)?);
            signs[k] = if (other / second).re >= 0.0 { 1.0 } else { -1.0 };
        }
        Ok(signs)
    }

    /// `lambda` with `lambda (z - conj beta) < 0` along `B`.
    fn pre_airy_lambda(&self, pg: &PreGeometry) -> C64 {
        let bb = pg.beta.conj();
        let pts = &self.contours.cut.curve.points;
        let reach = 0.3 * self.contours.disk_radius;
        let p = pts.iter().rev().find(|p| (**p - bb).norm() > reach).copied().unwrap_or(pts[0]);
        let theta = (p - bb).arg();
        let mag = (pg.c_beta_bar() * self.params.big_n).norm().powf(2.0 / 3.0);
        -C64::from_polar(mag, -theta)
    }

    pub fn local_coordinates(&self, z: C64) -> Result<LocalCoordinates> {
        let mut out = LocalCoordinates::default();
        match self.geometry() {
            Geometry::Pre(pg) => {
                out.c_beta_bar = Some(pg.c_beta_bar());
                let zb = if z.im > 0.0 { z.conj() } else { z };
                if (zb - pg.beta.conj()).norm() < self.contours.disk_radius {
                    out.zeta_airy = Some(self.airy_zeta(pg, zb)?);
                }
            }
            Geometry::Post(p) => {
                let g1 = p.gamma_1().re;
                out.gamma_1 = Some(g1);
                out.xi = Some(self.post_zeta(p, z));
            }
            Geometry::Critical { post, crit } => {
                out.gamma_1 = Some(post.gamma_1().re).filter(|g| g.is_finite());
                out.s = Some(crit.s_linear);
            }
        }
        Ok(out)
    }

    /// `zeta` with `(4/3) zeta^{3/2} = N (phi(z) - phi(conj beta))`, on the
    /// branch that is conformal at `conj beta` and maps `B` to the negative axis.
    fn airy_zeta(&self, pg: &PreGeometry, z: C64) -> Result<C64> {
        let geo = self.geometry();
        let cut = &self.contours.cut;
        cut.ensure_off(z)?;
        let bb = pg.beta.conj();
        if z == bb {
            return Ok(c(0.0, 0.0));
        }
        let y0 = y_on_sheet(geo, cut, z);
        let delta = PhiField { geo }.integral_from_zero(bb, z, y0);
        let lw = (0.75 * self.params.big_n * delta).ln();
        let target = self.airy_lambda * (z - bb);
        let best = (0..3)
            .map(|k| ((2.0 / 3.0) * (lw + c(0.0, 2.0 * PI * k as f64))).exp())
            .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
            .unwrap();
        Ok(best)
    }

    /// `log[sqrt(rho F') (rho F)^r e^{N t g}]`.
    fn pre_outer_log(&self, pg: &PreGeometry, z: C64, v: C64) -> Result<C64> {
        let g = self.potentials.g(z)?;
        Ok(sqrt_rho_f_prime(pg, v).ln() + self.r() * (pg.rho * v).ln() + self.nt() * g)
    }

    fn pre_log(&self, pg: &PreGeometry, z: C64, tag: ZoneTag) -> Result<EvalResult> {
        let cut = &self.contours.cut;
        match tag.zone {
            Zone::ExtB | Zone::IntB => {
                let v = conformal_F(pg, cut, z)?;
                Ok(EvalResult::from_log(self.pre_outer_log(pg, z, v)?, tag, ErrorOrder::NInv, false))
            }
            Zone::OmegaPlus | Zone::OmegaMinus => {
                let v = conformal_F(pg, cut, z)?;
                let first = self.pre_outer_log(pg, z, v)?;
                let sign = self.lens_sign[if tag.zone == Zone::OmegaPlus { 0 } else { 1 }];
                let deck = pg.alpha - (pg.kappa / pg.rho) / (v - pg.alpha);
                let second = first
                    + (sign * (pg.kappa / pg.rho).sqrt() / (v - pg.alpha)).ln()
                    + self.r() * (deck / v).ln()
                    + self.potentials.n_phi_near_cut(z, self.params.big_n);
                Ok(EvalResult::from_log(log_add(first, second), tag, ErrorOrder::NInv, false))
            }
            Zone::NearBetaBar => {
                let l = self.pre_airy_log(pg, z)?;
                Ok(EvalResult::from_log(l, tag, ErrorOrder::NInvThird, false))
            }
            Zone::NearBeta => {
                // Real coefficients: P(z) = conj P(conj z).
                let l = self.pre_airy_log(pg, z.conj())?.conj();
                Ok(EvalResult::from_log(l, tag, ErrorOrder::NInvThird, false))
            }
        }
    }

    /// Airy parametrix at `conj beta`; the fourth root is the product of
    /// `sqrt(rho F')` and `zeta^{1/4}`, which matches the outer formula.
    fn pre_airy_log(&self, pg: &PreGeometry, z: C64) -> Result<C64> {
        let zeta = self.airy_zeta(pg, z)?;
        let v = conformal_F(pg, &self.contours.cut, z)?;
        let g = self.potentials.g(z)?;
        let ai = airy_ai(zeta);
        let z32 = (1.5 * zeta.ln()).exp();
        Ok(c((2.0 * PI.sqrt()).ln(), 0.0)
            + sqrt_rho_f_prime(pg, v).ln()
            + 0.25 * zeta.ln()
            + self.r() * (pg.v_beta.conj() * pg.rho).ln()
            + ai.ln()
            + (2.0 / 3.0) * z32
            + self.nt() * g)
    }

    /// `log[z^n (z/(z-a))^{Nc}]`.
    fn ext_log(&self, p: &PostGeometry, z: C64) -> C64 {
        self.params.n as f64 * z.ln() + self.params.charge() * (z / (z - p.a)).ln()
    }

    /// `log[e^{N a z + t N l} / (beta - z)]`.
    fn int_log(&self, p: &PostGeometry, z: C64) -> C64 {
        self.params.big_n * p.a * z + self.nt() * p.ell - (p.beta - z).ln()
    }

    fn post_log(&self, p: &PostGeometry, z: C64, tag: ZoneTag) -> Result<EvalResult> {
        let big_n = self.params.big_n;
        let g1 = p.gamma_1();
        let coef = g1.ln() + self.r() * p.beta.ln() - 0.5 * (2.0 * PI * big_n).ln();
        let (l, order) = match tag.zone {
            Zone::ExtB => (self.ext_log(p, z), ErrorOrder::NInvThreeHalves),
            Zone::IntB => (coef + self.int_log(p, z), ErrorOrder::NInv),
            Zone::OmegaPlus if !exterior_term_inside(p, z) => (coef + self.int_log(p, z), ErrorOrder::NInv),
            Zone::OmegaPlus | Zone::OmegaMinus => {
                (log_add(self.ext_log(p, z), coef + self.int_log(p, z)), ErrorOrder::NInv)
            }
            Zone::NearBeta | Zone::NearBetaBar => (self.post_local_log(p, z), ErrorOrder::NInvHalf),
        };
        Ok(EvalResult::from_log(l, tag, order, false))
    }

    /// Parametrix at `beta` in the conformal variable `zeta^2 = -2 N phi(z)`:
    /// `e^{N a z + t N l} beta^r C(zeta) H(z)` plus the exterior term for
    /// `Re zeta > 0`, where `C` is the Cauchy part of `F` and
    /// `H = gamma_1 zeta / (sqrt(N) (z - beta))`.
    fn post_local_log(&self, p: &PostGeometry, z: C64) -> C64 {
        let big_n = self.params.big_n;
        let g1 = p.gamma_1();
        let zeta = self.post_zeta(p, z);
        let h = if (z - p.beta).norm() > 0.0 { g1 * zeta / (big_n.sqrt() * (z - p.beta)) } else { c(1.0, 0.0) };
        let cauchy = if zeta.re < 0.0 { entire_f(zeta) } else { -entire_f(-zeta) };
        let local = big_n * p.a * z + self.nt() * p.ell + self.r() * p.beta.ln() + (cauchy * h).ln();
        if zeta.re > 0.0 {
            log_add(local, self.ext_log(p, z))
        } else {
            local
        }
    }

    /// `zeta` with `zeta^2 = -2 N phi_Ext(z)` and `zeta ~ (z - beta) sqrt(N)/gamma_1`.
    fn post_zeta(&self, p: &PostGeometry, z: C64) -> C64 {
        let big_n = self.params.big_n;
        let linear = (z - p.beta) * big_n.sqrt() / p.gamma_1();
        let root = (-2.0 * big_n * post_phi(p, z)).sqrt();
        if (root - linear).norm() <= (root + linear).norm() {
            root
        } else {
            -root
        }
    }

    fn critical_log(&self, p: &PostGeometry, crit: &CriticalGeometry, z: C64, tag: ZoneTag) -> Result<EvalResult> {
        let hm = self.hm.as_ref().expect("critical context carries a table");
        let s = crit.s_linear;
        if !hm.contains(s) {
            return Err(Error::TableRange(s));
        }
        let n13 = self.params.big_n.cbrt();
        let ext_factor = 1.0 - crit.gamma_c * hm.u(s) / (2.0 * n13 * (z - crit.b_c));
        let phase = (2.0 / 3.0) * s.abs() * c(s, 0.0).sqrt();
        let coef = c((crit.gamma_c * hm.q(s) / (2.0 * n13)).ln(), 0.0) + self.r() * crit.b_c.ln() + phase;
        let ext = || ext_factor.ln() + self.ext_log(p, z);
        let (l, order, bound) = match tag.zone {
            Zone::ExtB => (ext(), ErrorOrder::NInvTwoThirds, false),
            Zone::IntB => (coef + self.int_log(p, z), ErrorOrder::NInvThird, false),
            Zone::OmegaPlus | Zone::OmegaMinus => (log_add(ext(), coef + self.int_log(p, z)), ErrorOrder::NInvThird, false),
            Zone::NearBeta | Zone::NearBetaBar => (self.nt() * self.potentials.g(z)?, ErrorOrder::NInvThird, true),
        };
        Ok(EvalResult::from_log(l, tag, order, bound))
    }

    /// Leading asymptotic value of `P_{n,N}(z)` in the context's regime.
    pub fn eval_p(&self, z: C64) -> Result<EvalResult> {
        let tag = self.zone(z)?;
        match self.geometry() {
            Geometry::Pre(pg) => self.pre_log(pg, z, tag),
            Geometry::Post(p) => self.post_log(p, z, tag),
            Geometry::Critical { post, crit } => self.critical_log(post, crit, z, tag),
        }
    }

    /// `log h_n = log(2 pi sqrt(pi/(2N))) + (2r+1) log rho + N l_2D`.
    pub fn log_hn(&self) -> f64 {
        let big_n = self.params.big_n;
        let geo = self.geometry();
        (2.0 * PI * (PI / (2.0 * big_n)).sqrt()).ln() + (2.0 * self.r() + 1.0) * geo.capacity().ln() + big_n * geo.ell_2d()
    }

    /// `(F(z), F'(z))` of the exterior conformal map of the hull of `K`.
    fn conformal_pair(&self, z: C64) -> Result<(C64, C64)> {
        match self.geometry() {
            Geometry::Pre(pg) => {
                let v = conformal_F(pg, &self.contours.cut, z)?;
                Ok((v, rho_f_prime(pg, v) / pg.rho))
            }
            Geometry::Post(p) | Geometry::Critical { post: p, .. } => {
                Ok((z / p.big_radius, c(1.0 / p.big_radius, 0.0)))
            }
        }
    }

    /// `log rho_n(z) = log[|F|^{2r} sqrt(2N/pi) |F'| / (2 pi)] - N U(z)`.
    pub fn log_rho_n(&self, z: C64) -> Result<f64> {
        let big_n = self.params.big_n;
        let (f, fp) = self.conformal_pair(z)?;
        let u = self.potentials.u(z)?;
        Ok(2.0 * self.r() * f.norm().ln() + 0.5 * (2.0 * big_n / PI).ln() + fp.norm().ln() - (2.0 * PI).ln() - big_n * u)
    }

    /// Exponent `alpha` of the uniform bound `P = e^{N t g} O(N^alpha)` at `z`.
    pub fn envelope_exponent(&self, z: C64) -> Result<f64> {
        let tag = self.zone(z)?;
        let inside = self.contours.cut.inside(z);
        Ok(match (self.geometry(), tag.zone) {
            (Geometry::Pre(_), Zone::NearBeta | Zone::NearBetaBar) => 1.0 / 6.0,
            (Geometry::Post(_), Zone::IntB) => -0.5,
            (Geometry::Critical { .. }, Zone::IntB) if inside => -1.0 / 3.0,
            _ => 0.0,
        })
    }
}

/// Leading asymptotics of `P_{n,N}(z)` for a pre-critical context.
pub fn eval_p_pre(ctx: &AsymptoticContext, z: C64) -> Result<EvalResult> {
    match ctx.geometry() {
        Geometry::Pre(_) => ctx.eval_p(z),
        _ => Err(Error::Regime(format!("{} context passed to the pre-critical evaluator", ctx.regime.name()))),
    }
}

/// Leading asymptotics of `P_{n,N}(z)` for a post-critical context.
pub fn eval_p_post(ctx: &AsymptoticContext, z: C64) -> Result<EvalResult> {
    match ctx.geometry() {
        Geometry::Post(_) => ctx.eval_p(z),
        _ => Err(Error::Regime(format!("{} context passed to the post-critical evaluator", ctx.regime.name()))),
    }
}

/// Leading asymptotics of `P_{n,N}(z)` for a critical context.
pub fn eval_p_critical(ctx: &AsymptoticContext, z: C64) -> Result<EvalResult> {
    match ctx.geometry() {
        Geometry::Critical { .. } => ctx.eval_p(z),
        _ => Err(Error::Regime(format!("{} context passed to the critical evaluator", ctx.regime.name()))),
    }
}

pub fn eval_hn_asymptotic(ctx: &AsymptoticContext) -> f64 {
    ctx.log_hn()
}

/// `log rho_n(z)` from the asymptotic formula.
pub fn eval_rho_n(ctx: &AsymptoticContext, z: C64) -> Result<f64> {
    ctx.log_rho_n(z)
}

/// `log rho_n(z) = 2 log|P| - N Q(z) - log h_n` from given `log|P|` and `log h_n`.
pub fn log_rho_from_parts(params: &ModelParams, z: C64, ln_abs_p: f64, log_hn: f64) -> f64 {
    let q = crate::potentials::external_q(params.a, params.c, z);
    2.0 * ln_abs_p - params.big_n * q - log_hn
}

/// Critical intercept `gamma_c q(s) e^{(2/3) s^{3/2}} / (2 N^{1/3})` against
/// the post-critical `gamma_1 / sqrt(2 pi N)` at the same `(a, c, N, s > 0)`;
/// returns `(critical, post)`.
pub fn matching_prefactors(a: f64, c_: f64, big_n: f64, s: f64, table: &HastingsMcLeodTable) -> Result<(f64, f64)> {
    let bc = a + c_.sqrt();
    let tc = crate::model::critical_time(a, c_);
    let t = tc + s / (c_.powf(1.0 / 6.0) * a.powf(-1.0 / 3.0) * bc.powf(-2.0 / 3.0) * big_n.powf(2.0 / 3.0));
    let post = PostGeometry::solve(a, c_, t)?;
    let crit = CriticalGeometry::solve(&post, big_n)?;
    if !table.contains(s) {
        return Err(Error::TableRange(s));
    }
    let critical = crit.gamma_c * table.q(s) * ((2.0 / 3.0) * s.powf(1.5)).exp() / (2.0 * big_n.cbrt());
    let post_value = post.gamma_1().re / (2.0 * PI * big_n).sqrt();
    Ok((critical, post_value))
}

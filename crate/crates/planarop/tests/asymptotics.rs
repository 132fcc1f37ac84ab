use num_complex::Complex64 as C64;
use planarop::asymptotics::{eval_p_post, eval_p_pre, AsymptoticContext, EvalResult};
use planarop::contours::{Contours, Zone};
use planarop::model::{ModelParams, Regime};
use planarop::validation::{relative_error, Suite};

fn ctx(n: u32, big_n: f64) -> AsymptoticContext {
    AsymptoticContext::new(ModelParams::from_degree(1.0, 1.0 / 6.0, n, big_n, 0).unwrap()).unwrap()
}

/// Same context with a different local disk radius.
fn with_disk(ctx: &AsymptoticContext, radius: f64) -> AsymptoticContext {
    let mut out = ctx.clone();
    out.contours = Contours::build(ctx.geometry(), radius).unwrap();
    out
}

fn ratio_error(a: &EvalResult, b: &EvalResult) -> f64 {
    relative_error(a, (b.ln_abs(), b.arg()))
}

#[test]
fn oracle_agreement_at_the_reference_points() {
    let suite = Suite::new(0);
    for (n, z, tol) in [(25u32, 3.0, 0.15), (59, 2.5, 0.05), (55, 2.8, 0.3)] {
        let c = ctx(n, 30.0);
        let r = c.eval_p(C64::new(z, 0.0)).unwrap();
        let exact = suite.oracle(n, 30.0).unwrap().eval_log(C64::new(z, 0.0));
        let err = relative_error(&r, exact);
        assert!(err < tol, "n = {n}, z = {z}: {err}");
        assert_eq!(r.zone.zone, Zone::ExtB);
    }
}

#[test]
fn mantissa_is_normalized() {
    let c = ctx(25, 30.0);
    for z in [C64::new(3.0, 0.0), C64::new(-0.5, 0.1), C64::new(0.4, -1.2)] {
        let r = c.eval_p(z).unwrap();
        let m = r.value.norm();
        assert!((1.0..2.0).contains(&m), "{m}");
        assert!(r.value.is_finite() && r.log_scale.is_finite());
    }
}

#[test]
fn regime_checked_entry_points() {
    let post = ctx(59, 30.0);
    assert!(eval_p_pre(&post, C64::new(2.5, 0.0)).is_err());
    assert!(eval_p_post(&post, C64::new(2.5, 0.0)).is_ok());
}

/// Point `z` near `z0` with `local(z) = target`, by a secant iteration.
fn solve_local(z0: C64, target: C64, local: impl Fn(C64) -> C64) -> C64 {
    let mut z = z0;
    for _ in 0..60 {
        let f = local(z) - target;
        let h = 1e-7;
        let d = (local(z + h) - local(z - h)) / (2.0 * h);
        let step = f / d;
        z -= step;
        if step.norm() < 1e-14 {
            break;
        }
    }
    z
}

#[test]
fn airy_parametrix_matches_the_outer_formula() {
    let base = ctx(100, 120.0);
    let pg = *base.geometry().pre().unwrap();
    let bb = pg.beta.conj();
    let wide = with_disk(&base, 0.45 * (pg.beta - pg.b).norm());
    let narrow = with_disk(&base, 1e-4);
    let zeta = |z: C64| wide.local_coordinates(z).unwrap().zeta_airy.unwrap();
    // Start on the image of the positive axis, away from the cut.
    let probe = bb + 0.05 * (pg.b - bb) / (pg.b - bb).norm();
    let z = solve_local(probe, C64::new(5.0, 0.0), zeta);
    assert!((zeta(z) - 5.0).norm() < 1e-9);
    let inner = wide.eval_p(z).unwrap();
    let outer = narrow.eval_p(z).unwrap();
    assert_eq!(inner.zone.zone, Zone::NearBetaBar);
    assert_eq!(outer.zone.zone, Zone::ExtB);
    let err = ratio_error(&inner, &outer);
    assert!(err < 1e-2, "{err}");
}

#[test]
fn local_formula_near_beta_matches_the_two_term_formula() {
    // The matching error is the 1/zeta^2 term of the Cauchy transform.
    let base = ctx(59000, 30000.0);
    let p = *base.geometry().post().unwrap();
    let wide = with_disk(&base, 0.45 * (p.beta - p.a).norm().min((p.b - p.beta).norm()));
    let narrow = with_disk(&base, 1e-4);
    let zeta = |z: C64| wide.local_coordinates(z).unwrap().xi.unwrap();
    let scale = p.gamma_1().norm() / 30000f64.sqrt();
    let worst = |radius: f64| {
        let mut worst = 0.0f64;
        let mut seen = 0;
        for k in 0..16 {
            let dir = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 16.0);
            let z = solve_local(p.beta + radius * scale * dir, radius * dir, zeta);
            assert!((zeta(z) - radius * dir).norm() < 1e-9);
            let outer = narrow.eval_p(z).unwrap();
            if !matches!(outer.zone.zone, Zone::OmegaPlus | Zone::OmegaMinus) {
                continue;
            }
            let inner = wide.eval_p(z).unwrap();
            assert_eq!(inner.zone.zone, Zone::NearBeta);
            worst = worst.max(ratio_error(&inner, &outer));
            seen += 1;
        }
        assert!(seen >= 8, "{seen}");
        worst
    };
    let (w4, w8) = (worst(4.0), worst(8.0));
    assert!(w4 < 0.1, "{w4}");
    assert!(w8 < 0.03 && w8 < w4 / 3.0, "{w4} {w8}");
}

#[test]
fn two_term_formula_is_continuous_across_the_cut() {
    for (n, big_n) in [(25u32, 30.0), (59, 30.0)] {
        let c = ctx(n, big_n);
        let pts = &c.contours.cut.curve.points;
        let mut worst = 0.0f64;
        for k in (pts.len() / 6..5 * pts.len() / 6).step_by(pts.len() / 12) {
            let tan = pts[k + 1] - pts[k - 1];
            let nrm = C64::i() * tan / tan.norm();
            let d = 1e-6;
            let (Ok(l), Ok(r)) = (c.eval_p(pts[k] + d * nrm), c.eval_p(pts[k] - d * nrm)) else {
                continue;
            };
            if (pts[k] - c.contours.beta).norm() < 2.0 * c.contours.disk_radius
                || (pts[k] - c.contours.beta.conj()).norm() < 2.0 * c.contours.disk_radius
            {
                continue;
            }
            worst = worst.max(ratio_error(&l, &r));
        }
        assert!(worst < 1e-3, "n = {n}: {worst}");
    }
}

#[test]
fn post_exterior_equals_geometric_form() {
    let c = ctx(59, 30.0);
    let nt = 59.0;
    let m = 5.0;
    for z in [C64::new(2.5, 0.0), C64::new(-2.0, 1.0), C64::new(0.3, 2.5), C64::new(1.8, -1.7)] {
        let geometric = nt * c.potentials.g(z).unwrap();
        let direct = 59.0 * z.ln() + m * (z / (z - 1.0)).ln();
        let diff = (geometric - direct).exp() - 1.0;
        assert!(diff.norm() < 1e-9, "{z}: {diff}");
    }
}

#[test]
fn interior_suppression_scales_like_inverse_root_n() {
    let suite = Suite::new(0);
    let z = C64::new(0.3, 0.0);
    let excess = |n: u32, big_n: f64| {
        let c = ctx(n, big_n);
        let exact = suite.oracle(n, big_n).unwrap().eval_log(z).0;
        exact - n as f64 * c.potentials.g(z).unwrap().re
    };
    let (e30, e60) = (excess(59, 30.0), excess(118, 60.0));
    assert!(e30 < 0.0 && e60 < e30);
    let slope = e60 - e30;
    assert!((slope + 0.5 * 2f64.ln()).abs() < 0.2, "{slope}");
}

#[test]
fn critical_formula_at_s_zero() {
    let tc = 1.0 + 2.0 * (1.0f64 / 6.0).sqrt();
    let params = ModelParams::from_time(1.0, 1.0 / 6.0, tc, 60, 0).unwrap();
    let c = AsymptoticContext::with_regime(params, Regime::Critical { s_estimate: 0.0 }).unwrap();
    let table = c.hm_table().unwrap();
    assert!(table.q(0.0) > 0.0 && table.u(0.0).is_finite());
    for z in [C64::new(3.0, 0.0), C64::new(0.3, 0.1), C64::new(-1.0, 2.0)] {
        let r = c.eval_p(z).unwrap();
        assert!(r.value.is_finite() && r.log_scale.is_finite());
    }
}

#[test]
fn norming_constant_error_decreases() {
    let suite = Suite::new(0);
    for (n, n2) in [(25u32, 50u32), (59, 118)] {
        let d30 = (ctx(n, 30.0).log_hn() - suite.oracle(n, 30.0).unwrap().poly.log_hn()).abs();
        let d60 = (ctx(n2, 60.0).log_hn() - suite.oracle(n2, 60.0).unwrap().poly.log_hn()).abs();
        assert!(d30 < 3.0 / 30.0 && d60 < d30, "{d30} {d60}");
    }
}

#[test]
fn asymptotic_density_matches_exact_density_outside() {
    let suite = Suite::new(0);
    let c = ctx(59, 30.0);
    let case = suite.oracle(59, 30.0).unwrap();
    for z in [C64::new(2.0, 0.0), C64::new(-1.5, 0.5), C64::new(0.5, 1.6)] {
        let exact = planarop::asymptotics::log_rho_from_parts(&c.params, z, case.eval_log(z).0, case.poly.log_hn());
        let asym = c.log_rho_n(z).unwrap();
        assert!((exact - asym).abs() < 0.05, "{z}: {exact} vs {asym}");
    }
}

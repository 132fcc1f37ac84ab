use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use planarop::geometry::{eval_y, Geometry};
use planarop::model::Regime;
use planarop::potentials::PotentialContext;

fn context(t: f64, regime: Regime) -> PotentialContext {
    PotentialContext::new(Geometry::solve_at(1.0, 1.0 / 6.0, t, 30.0, regime).unwrap()).unwrap()
}

fn contexts() -> [PotentialContext; 2] {
    [context(25.0 / 30.0, Regime::PreCritical), context(59.0 / 30.0, Regime::PostCritical)]
}

fn clear_of_singularities(ctx: &PotentialContext, z: C64, margin: f64) -> bool {
    ctx.cut.distance(z) > margin && z.norm() > margin && (z - ctx.geo.a()).norm() > margin
}

#[test]
fn derivative_of_phi_is_y() {
    for ctx in contexts() {
        for z in [C64::new(2.5, 0.3), C64::new(-1.2, 1.1), C64::new(0.4, -1.9), C64::new(-2.0, -0.2)] {
            assert!(clear_of_singularities(&ctx, z, 0.1));
            let h = 1e-5;
            let d = (ctx.phi(z + h).unwrap() - ctx.phi(z - h).unwrap()) / (2.0 * h);
            let y = eval_y(&ctx.geo, &ctx.cut, z).unwrap();
            assert!((d - y).norm() < 1e-6 * (1.0 + y.norm()), "{z}: {d} vs {y}");
        }
    }
}

#[test]
fn u_is_positive_off_the_droplet() {
    for ctx in contexts() {
        let boundary_near = |z: C64| {
            (0..64).any(|k| {
                let w = z + C64::from_polar(0.05, 2.0 * PI * k as f64 / 64.0);
                ctx.in_k(w) != ctx.in_k(z)
            })
        };
        let mut seen = 0;
        for i in 0..41 {
            for j in 0..41 {
                let z = C64::new(-3.0 + 0.15 * i as f64 + 0.013, -3.0 + 0.15 * j as f64 + 0.007);
                if ctx.in_k(z) || boundary_near(z) || !clear_of_singularities(&ctx, z, 0.05) {
                    continue;
                }
                let u = ctx.u(z).unwrap();
                assert!(u > 0.0, "{z}: {u}");
                assert_eq!(ctx.u_2d(z).unwrap(), u);
                seen += 1;
            }
        }
        assert!(seen > 500, "{seen}");
    }
}

/// Largest jump of `N phi` modulo `2 pi i` between neighbours on the closed
/// loop `path`, after removing the increment predicted by `N y`.
fn loop_jump(ctx: &PotentialContext, big_n: f64, path: impl Fn(f64) -> C64) -> f64 {
    let k = 2000;
    let zs: Vec<C64> = (0..=k).map(|i| path(i as f64 / k as f64)).collect();
    let vals: Vec<C64> = zs.iter().map(|&z| big_n * ctx.phi(z).unwrap()).collect();
    (0..k)
        .map(|i| {
            let mid = 0.5 * (zs[i] + zs[i + 1]);
            let predicted = big_n * eval_y(&ctx.geo, &ctx.cut, mid).unwrap() * (zs[i + 1] - zs[i]);
            let d = vals[i + 1] - vals[i] - predicted;
            let im = d.im - 2.0 * PI * (d.im / (2.0 * PI)).round();
            C64::new(d.re, im).norm()
        })
        .fold(0.0, f64::max)
}

#[test]
fn exponential_of_n_phi_is_single_valued() {
    let big_n = 30.0;
    for ctx in contexts() {
        let a = ctx.geo.a();
        // Around everything, then around the pole at a alone.
        let outer = loop_jump(&ctx, big_n, |s| C64::from_polar(3.2, 2.0 * PI * s + 0.1));
        assert!(outer < 1e-3, "{outer}");
        let pole = loop_jump(&ctx, big_n, |s| a + C64::from_polar(0.2, 2.0 * PI * s + 0.1));
        assert!(pole < 1e-3, "{pole}");
    }
}

#[test]
fn phi_vanishes_at_beta_with_the_local_exponent() {
    // y has a square-root zero at beta before t_c and a simple zero after.
    for (ctx, power) in contexts().into_iter().zip([1.5, 2.0]) {
        let beta = ctx.geo.beta();
        let dir = C64::new(0.6, 0.8);
        let (h1, h2) = (1e-3, 2e-3);
        let (p1, p2) = (ctx.phi(beta + h1 * dir).unwrap(), ctx.phi(beta + h2 * dir).unwrap());
        let exponent = (p2.norm() / p1.norm()).log2();
        assert!((exponent - power).abs() < 0.02, "{exponent}");
        let z = C64::new(2.7, -0.4);
        assert!((ctx.u_op(z).unwrap() - ctx.phi(z).unwrap().re).abs() < 1e-9);
    }
}

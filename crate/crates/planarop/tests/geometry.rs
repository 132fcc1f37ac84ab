use num_complex::Complex64 as C64;
use planarop::geometry::{PostGeometry, PreGeometry};
use planarop::model::critical_time;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pre_critical_system_is_solved(a in 0.3f64..3.0, c in 0.05f64..3.0, frac in 0.05f64..0.97) {
        let t = frac * critical_time(a, c);
        let g = PreGeometry::solve(a, c, t).unwrap();
        let r = g.residuals;
        prop_assert!(r.cubic < 1e-10 && r.val_s1 < 1e-10 && r.val_s2 < 1e-10 && r.val_s3 < 1e-10, "{r:?}");
        prop_assert!(g.alpha > 0.0 && g.alpha < 1.0 && g.kappa > 0.0 && g.rho > 0.0);
        prop_assert!(g.beta.im > 0.0);
        prop_assert!(((g.beta.norm() - g.abs_beta) / g.abs_beta).abs() < 1e-12);
    }

    #[test]
    fn pre_critical_map_sends_the_circle_around_area_pi_t(a in 0.3f64..3.0, c in 0.05f64..3.0, frac in 0.05f64..0.97) {
        let t = frac * critical_time(a, c);
        let g = PreGeometry::solve(a, c, t).unwrap();
        // Laurent coefficients of f at infinity: rho, then -kappa alpha^(k-1) for v^-k.
        let laurent = g.rho * g.rho - (g.kappa / (1.0 - g.alpha * g.alpha)).powi(2);
        prop_assert!((laurent / t - 1.0).abs() < 1e-10, "{laurent} vs {t}");
        if frac < 0.9 {
            let poly = g.boundary_polygon(4000);
            let n = poly.len();
            let area: f64 = (0..n).map(|k| {
                let (p, q) = (poly[k], poly[(k + 1) % n]);
                0.5 * (p.re * q.im - q.re * p.im)
            }).sum();
            let ratio = area / (std::f64::consts::PI * t);
            prop_assert!((ratio - 1.0).abs() < 1e-3, "{ratio}");
        }
    }

    #[test]
    fn post_critical_endpoints_are_the_zeros_of_y(a in 0.3f64..3.0, c in 0.05f64..3.0, extra in 0.02f64..3.0) {
        let t = critical_time(a, c) + extra;
        let p = PostGeometry::solve(a, c, t).unwrap();
        prop_assert!(p.beta.im == 0.0 && p.b.im == 0.0);
        prop_assert!(a < p.beta.re && p.beta.re < p.b.re);
        prop_assert!(((p.beta * p.b).re / (t + c) - 1.0).abs() < 1e-12);
        prop_assert!(((p.beta + p.b).re - (a * a + t) / a).abs() < 1e-12 * p.b.re);
        // y is the derivative of the primitive; compare at a few points off the axis.
        for z in [C64::new(-1.0, 2.0), C64::new(p.b.re + 1.0, 0.5), C64::new(0.3, -0.7)] {
            let h = 1e-5;
            let d = (p.phi_primitive(z + h) - p.phi_primitive(z - h)) / (2.0 * h);
            prop_assert!((d - p.y_ext(z)).norm() < 1e-6 * (1.0 + p.y_ext(z).norm()));
        }
    }

    #[test]
    fn beta_is_continuous_at_the_critical_time(a in 0.3f64..3.0, c in 0.05f64..3.0) {
        let tc = critical_time(a, c);
        let target = C64::new(a + c.sqrt(), 0.0);
        let eps = 1e-8;
        let below = PreGeometry::solve(a, c, tc * (1.0 - eps)).unwrap().beta;
        let above = PostGeometry::solve(a, c, tc * (1.0 + eps)).unwrap().beta;
        let scale = (a + c.sqrt()) * 1e-2;
        prop_assert!((below - target).norm() < scale, "{below} vs {target}");
        prop_assert!((above - target).norm() < scale, "{above} vs {target}");
    }
}

#[test]
fn critical_time_closed_form() {
    assert!((critical_time(1.0, 1.0 / 6.0) - (1.0 + 2.0 * (1.0f64 / 6.0).sqrt())).abs() < 1e-15);
    assert!((critical_time(2.0, 1.0) - 8.0).abs() < 1e-15);
}

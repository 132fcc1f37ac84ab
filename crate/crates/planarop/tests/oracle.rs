use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use planarop::oracle::{default_precision, exact_moments, exact_polynomial_for, exact_zeros, ratio, OracleParams};
use proptest::prelude::*;

fn params(a: (i64, i64), big_n: (i64, i64), m: u32) -> OracleParams {
    OracleParams::new(ratio(a.0, a.1), ratio(big_n.0, big_n.1), m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn polynomials_are_orthogonal(a in 1i64..8, n_num in 1i64..40, m in 0u32..6, n in 1usize..16) {
        let p = params((a, 3), (n_num, 2), m);
        let mm = exact_moments(&p, n + 1).unwrap();
        let poly = mm.factor(default_precision(n)).unwrap().polynomial(n).unwrap();
        prop_assert_eq!(poly.degree(), n);
        prop_assert!(poly.coefficients[n].to_f64() == 1.0);
        let res = poly.orthogonality_residual(&mm);
        prop_assert!(res < 1e-60, "{}", res);
    }

    #[test]
    fn zeros_come_in_conjugate_pairs(a in 1i64..8, n_num in 2i64..40, m in 0u32..6, n in 2usize..14) {
        let p = params((a, 3), (n_num, 2), m);
        let poly = exact_polynomial_for(&p, n).unwrap();
        let z = exact_zeros(&poly, 11).unwrap();
        prop_assert_eq!(z.roots.len(), n);
        for r in &z.roots {
            prop_assert!(z.roots.iter().any(|s| (s - r.conj()).norm() < 1e-12 * (1.0 + r.norm())));
        }
    }

    #[test]
    fn radial_weight_gives_monomials(n_num in 1i64..30, m in 1u32..6, n in 1usize..12) {
        let p = params((0, 1), (n_num, 1), m);
        let poly = exact_polynomial_for(&p, n).unwrap();
        prop_assert!(poly.coefficients[..n].iter().all(|c| c.is_zero()));
        let k = n + m as usize;
        let ln_fact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
        let expect = PI.ln() + ln_fact - (k as f64 + 1.0) * (n_num as f64).ln();
        prop_assert!((poly.log_hn() - expect).abs() < 1e-12 * expect.abs().max(1.0));
    }
}

/// `int P_n(z) conj(z)^k |z-a|^{2m} e^{-N|z|^2} dA`; Simpson in `r`, trapezoid in angle.
fn inner_product(coef: &[f64], a: f64, big_n: f64, m: i32, k: i32) -> C64 {
    let (nr, nt) = (3000, 256);
    let rmax = (40.0 / big_n).sqrt();
    let dr = rmax / nr as f64;
    let mut s = C64::new(0.0, 0.0);
    for i in 1..nr {
        let r = i as f64 * dr;
        let simpson = if i % 2 == 1 { 4.0 / 3.0 } else { 2.0 / 3.0 };
        for j in 0..nt {
            let z = C64::from_polar(r, 2.0 * PI * j as f64 / nt as f64);
            let p = coef.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
            let w = (z - a).norm_sqr().powi(m) * (-big_n * r * r).exp();
            s += p * z.conj().powi(k) * w * r * simpson;
        }
    }
    s * dr * 2.0 * PI / nt as f64
}

#[test]
fn orthogonality_by_quadrature() {
    let (n, big_n, m) = (4usize, 3.0, 2u32);
    let poly = exact_polynomial_for(&params((1, 1), (3, 1), m), n).unwrap();
    let coef = poly.coefficients_f64();
    let norm = inner_product(&coef, 1.0, big_n, m as i32, n as i32);
    assert!((norm.re.ln() - poly.log_hn()).abs() < 1e-6, "{} vs {}", norm.re.ln(), poly.log_hn());
    for k in 0..n as i32 {
        let ip = inner_product(&coef, 1.0, big_n, m as i32, k);
        assert!(ip.norm() < 1e-8 * norm.re, "k = {k}: {ip}");
    }
}

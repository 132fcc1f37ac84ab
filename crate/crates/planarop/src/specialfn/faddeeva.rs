use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::C64;

const TERMS: usize = 64;

/// Coefficients of Weideman's rational approximation with `TERMS` terms.
fn coefficients() -> &'static (f64, Vec<f64>) {
    static COEF: OnceLock<(f64, Vec<f64>)> = OnceLock::new();
    COEF.get_or_init(|| {
        let n = TERMS;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = (n as f64 / 2f64.sqrt()).sqrt();
        // f_k for k = -M+1..M-1 sampled at t = L tan(theta/2), padded with f = 0 at theta = -pi.
        let mut f = vec![0.0; m2];
        for (idx, k) in (-(m as i64) + 1..m as i64).enumerate() {
            let theta = k as f64 * PI / m as f64;
            let t = l * (0.5 * theta).tan();
            f[idx + 1] = (-t * t).exp() * (l * l + t * t);
        }
        // fftshift then real part of the DFT, divided by 2M.
        let shifted: Vec<f64> = (0..m2).map(|i| f[(i + m) % m2]).collect();
        let mut a = Vec::with_capacity(n);
        for j in 1..=n {
            let s: f64 = shifted
                .iter()
                .enumerate()
                .map(|(i, v)| v * (2.0 * PI * (i * j) as f64 / m2 as f64).cos())
                .sum();
            a.push(s / m2 as f64);
        }
        a.reverse();
        (l, a)
    })
}

fn weideman(z: C64) -> C64 {
    let (l, a) = coefficients();
    let i = C64::i();
    let den = *l - i * z;
    let zz = (*l + i * z) / den;
    let p = a.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * zz + c);
    2.0 * p / (den * den) + (1.0 / PI.sqrt()) / den
}

/// Laplace continued fraction, accurate for large `|z|` with `Im z >= 0`.
fn continued_fraction(z: C64) -> C64 {
    let mut t = z;
    for k in (1..=40).rev() {
        t = z - (0.5 * k as f64) / t;
    }
    C64::i() / (PI.sqrt() * t)
}

/// Faddeeva function `w(z) = e^{-z^2} erfc(-iz)`.
pub fn faddeeva_w(z: C64) -> C64 {
    if z.im < 0.0 {
        return 2.0 * (-z * z).exp() - faddeeva_w(-z);
    }
    if z.norm() > 12.0 {
        continued_fraction(z)
    } else {
        weideman(z)
    }
}

/// `F(zeta) = (1/2 pi i) int_{-i inf}^{i inf} e^{s^2/2}/(s - zeta) ds + [Re zeta > 0] e^{zeta^2/2}`,
/// which equals `w(-i zeta/sqrt 2)/2`.
pub fn entire_f(zeta: C64) -> C64 {
    0.5 * faddeeva_w(-C64::i() * zeta / 2f64.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive;

    const W_REF: [(f64, f64, f64, f64); 10] = [
        (0.5, 0.5, 0.53315670791217491377, 0.23048823138445840871),
        (2.0, 0.1, 0.040201398161451288505, 0.33158268733456308067),
        (-1.0, 3.0, 0.16426113639298619924, -0.05019713513524859062),
        (5.0, 0.01, 0.00024080339195117516647, 0.11524544620269498306),
        (0.1, 10.0, 0.056135514562873149612, 0.00055587748921268723779),
        (3.0, -1.0, -0.064673574793859687036, 0.17373084850174396446),
        (-2.0, -0.5, -0.12293249482276237412, -0.32755513633331258763),
        (0.0, 0.0, 1.0, 0.0),
        (7.0, 2.0, 0.021853396687438291323, 0.075009635935424815468),
        (30.0, 1.0, 0.00062722538361012560118, 0.018795842399890712629),
    ];

    const F_REF: [(f64, f64, f64, f64); 8] = [
        (1.0, 0.5, 1.0302606459896139831, 0.76320292014020849379),
        (-1.0, 0.5, 0.24661444717952464033, 0.065642877522386075578),
        (0.3, -2.0, 0.023614504119612018965, -0.29655740224892773598),
        (-2.5, -1.0, 0.12864148150983276372, -0.042026415357596889689),
        (3.0, 3.0, -0.98060514041513991527, 0.47449890663713404867),
        (-4.0, 0.0, 0.094410641301968936671, 0.0),
        (0.5, 0.0, 0.783529618346428247, 0.0),
        (2.0, -0.7, 0.8248795291810657771, -5.7410037945884811111),
    ];

    #[test]
    fn faddeeva_reference() {
        for (x, y, wr, wi) in W_REF {
            let w = faddeeva_w(C64::new(x, y));
            let e = (w - C64::new(wr, wi)).norm() / C64::new(wr, wi).norm();
            assert!(e < 1e-12, "({x},{y}): {e:e}");
        }
    }

    #[test]
    fn entire_f_reference() {
        for (x, y, fr, fi) in F_REF {
            let f = entire_f(C64::new(x, y));
            let e = (f - C64::new(fr, fi)).norm() / C64::new(fr, fi).norm();
            assert!(e < 1e-12, "({x},{y}): {e:e}");
        }
    }

    #[test]
    fn continuous_across_imaginary_axis() {
        for y in [-2.0, 0.0, 2.0] {
            let d = entire_f(C64::new(1e-4, y)) - entire_f(C64::new(-1e-4, y));
            assert!(d.norm() < 1e-3, "{d}");
            let d = entire_f(C64::new(1e-12, y)) - entire_f(C64::new(-1e-12, y));
            assert!(d.norm() < 1e-10, "{d}");
        }
    }

    fn by_quadrature(zeta: C64) -> C64 {
        // s = i y: (1/2 pi) int e^{-y^2/2}/(i y - zeta) dy
        let f = |u: f64| {
            let y = u / (1.0 - u * u);
            let jac = (1.0 + u * u) / (1.0 - u * u).powi(2);
            (-0.5 * y * y).exp() / (C64::i() * y - zeta) * jac
        };
        let (v, _) = adaptive(f, -1.0, 1.0, 1e-15, 1e-13, 4000);
        let mut out = v / (2.0 * PI);
        if zeta.re > 0.0 {
            out += (0.5 * zeta * zeta).exp();
        }
        out
    }

    #[test]
    fn agrees_with_quadrature_on_grid() {
        for i in 0..10 {
            for j in 0..10 {
                let zeta = C64::new(-6.0 + 12.0 * (i as f64 + 0.5) / 10.0, -6.0 + 12.0 * (j as f64 + 0.5) / 10.0);
                if zeta.re.abs() < 0.25 || zeta.norm() > 6.0 {
                    continue;
                }
                let a = entire_f(zeta);
                let b = by_quadrature(zeta);
                assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "{zeta}: {a} {b}");
            }
        }
    }

    #[test]
    fn asymptotics() {
        let z = C64::from_polar(50.0, 2.5);
        let f = entire_f(z);
        let lead = -1.0 / ((2.0 * PI).sqrt() * z);
        assert!((f / lead - 1.0).norm() < 1e-3);
    }
}

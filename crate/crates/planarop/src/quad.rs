//! Fixed and adaptive Gauss rules for complex integrands on `[0, 1]`.

use crate::C64;

const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Nodes and weights of 8-point Gauss-Legendre on `[0, 1]`, in increasing order.
pub(crate) fn gl8() -> [(f64, f64); 8] {
    let mut out = [(0.0, 0.0); 8];
    for i in 0..4 {
        out[3 - i] = (0.5 * (1.0 - GL8_X[i]), 0.5 * GL8_W[i]);
        out[4 + i] = (0.5 * (1.0 + GL8_X[i]), 0.5 * GL8_W[i]);
    }
    out
}

const K15_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_W: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const G7_W: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut impl FnMut(f64) -> C64, lo: f64, hi: f64) -> (C64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = fc * K15_W[7];
    let mut g = fc * G7_W[3];
    for i in 0..7 {
        let dx = h * K15_X[i];
        let s = f(c - dx) + f(c + dx);
        k += s * K15_W[i];
        if i % 2 == 1 {
            g += s * G7_W[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[lo, hi]`.
///
/// Stops when the estimated error is below `abs_tol + rel_tol * |I|` or after
/// `max_intervals` subdivisions; returns the integral and the error estimate.
pub(crate) fn adaptive(
    mut f: impl FnMut(f64) -> C64,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> (C64, f64) {
    let (v, e) = gk15(&mut f, lo, hi);
    let mut parts = vec![(lo, hi, v, e)];
    let mut total = v;
    let mut err = e;
    while err > abs_tol.max(rel_tol * total.norm()) && parts.len() < max_intervals {
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .unwrap();
        let (a, b, v0, e0) = parts.swap_remove(idx);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        parts.push((a, m, v1, e1));
        parts.push((m, b, v2, e2));
    }
    // Re-sum to shed the drift of the running updates.
    let total = parts.iter().fold(C64::new(0.0, 0.0), |s, p| s + p.2);
    let err = parts.iter().map(|p| p.3).sum();
    (total, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl8_is_exact_for_degree_15() {
        let s: f64 = gl8().iter().map(|(x, w)| w * x.powi(15)).sum();
        assert!((s - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let (v, _) = adaptive(|x| C64::new(x.sqrt().recip(), 0.0), 0.0, 1.0, 1e-12, 1e-12, 400);
        assert!((v.re - 2.0).abs() < 1e-9, "{v}");
        let (v, _) = adaptive(|x| C64::new(0.0, x.cos()), 0.0, 3.0, 1e-14, 1e-14, 100);
        assert!((v.im - 3f64.sin()).abs() < 1e-14);
    }
}

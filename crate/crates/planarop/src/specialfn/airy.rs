use std::f64::consts::PI;

use crate::C64;

/// `Ai(0)`.
const AI0: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0)`.
const AIP0: f64 = 0.258_819_403_792_806_8;

const SERIES_RADIUS: f64 = 1.5;
const ASYMPTOTIC_RADIUS: f64 = 10.0;
const STEP: f64 = 0.25;

fn maclaurin(z: C64) -> (C64, C64) {
    if z == C64::new(0.0, 0.0) {
        return (C64::new(AI0, 0.0), C64::new(-AIP0, 0.0));
    }
    let z3 = z * z * z;
    let one = C64::new(1.0, 0.0);
    // f = sum 3^k (1/3)_k z^{3k}/(3k)!, g = sum 3^k (2/3)_k z^{3k+1}/(3k+1)!
    let (mut f, mut g) = (one, z);
    let (mut tf, mut tg) = (one, z);
    let (mut df, mut dg) = (C64::new(0.0, 0.0), one);
    for k in 0..200 {
        let k = k as f64;
        tf *= z3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= z3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        // derivatives of the new terms
        df += tf * (3.0 * k + 3.0) / z;
        dg += tg * (3.0 * k + 4.0) / z;
        if tf.norm() < 1e-18 * f.norm() && tg.norm() < 1e-18 * g.norm().max(1e-300) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * df - AIP0 * dg)
}

fn asymptotic(z: C64) -> (C64, C64) {
    let sz = z.sqrt();
    let xi = 2.0 / 3.0 * z * sz;
    let z14 = sz.sqrt();
    let (mut su, mut sv) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
    let mut u = 1.0;
    let mut pow = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        pow *= -1.0 / xi;
        let term = u * pow;
        if term.norm() > last || term.norm() < 1e-17 {
            break;
        }
        last = term.norm();
        su += term;
        sv += v * pow;
    }
    let e = (-xi).exp() / (2.0 * PI.sqrt());
    (e / z14 * su, -e * z14 * sv)
}

/// Taylor steps of `y'' = z y` from `(z0, y, y')` to `z1`.
fn propagate(z0: C64, mut y: C64, mut dy: C64, z1: C64) -> (C64, C64) {
    let dist = (z1 - z0).norm();
    let steps = (dist / STEP).ceil().max(1.0) as usize;
    let h = (z1 - z0) / steps as f64;
    let mut z = z0;
    for _ in 0..steps {
        let mut cm1 = C64::new(0.0, 0.0);
        let mut c0 = y;
        let mut c1 = dy;
        let (mut sy, mut sdy) = (c0 + c1 * h, c1);
        let mut hp = h;
        for k in 0..60 {
            let kf = k as f64;
            let c2 = (z * c0 + cm1) / ((kf + 2.0) * (kf + 1.0));
            let hk = hp * h;
            sy += c2 * hk;
            sdy += c2 * (kf + 2.0) * hp;
            hp = hk;
            cm1 = c0;
            c0 = c1;
            c1 = c2;
            if k > 8 && (c2 * hk).norm() < 1e-18 * sy.norm() {
                break;
            }
        }
        y = sy;
        dy = sdy;
        z += h;
    }
    (y, dy)
}

/// `(Ai(z), Ai'(z))`.
pub fn airy_ai_pair(z: C64) -> (C64, C64) {
    let r = z.norm();
    let arg = z.arg();
    if r <= SERIES_RADIUS {
        return maclaurin(z);
    }
    if r >= ASYMPTOTIC_RADIUS {
        if arg.abs() <= 2.0 * PI / 3.0 {
            return asymptotic(z);
        }
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let (a1, d1) = asymptotic(w * z);
        let (a2, d2) = asymptotic(w * w * z);
        return (-w * a1 - w * w * a2, -w * w * d1 - w * w * w * w * d2);
    }
    let dir = z / r;
    if arg.abs() <= PI / 3.0 {
        let start = dir * ASYMPTOTIC_RADIUS;
        let (y, dy) = asymptotic(start);
        propagate(start, y, dy, z)
    } else {
        let start = dir * SERIES_RADIUS;
        let (y, dy) = maclaurin(start);
        propagate(start, y, dy, z)
    }
}

pub fn airy_ai(z: C64) -> C64 {
    airy_ai_pair(z).0
}

#[cfg(test)]
mod tests {
    use super::*;

    // (re, im, Ai re, Ai im, Ai' re, Ai' im), 30-digit reference evaluation.
    const REF: [(f64, f64, f64, f64, f64, f64); 14] = [
        (0.5, 0.3, 0.22634795458107735139, -0.06800141109668116938, -0.23013706202248152172, 0.036523158004756680215),
        (2.0, 1.0, 0.0016977668572654568228, -0.040718017053223981234, -0.01511027928322695793, 0.062458954713600138155),
        (-3.0, 0.5, -0.52817234188234967819, 0.18682298552967844078, 0.49990997337087834131, 0.62687921674662165741),
        (4.0, -2.0, -0.00081129129641103826873, -0.0012857063294070026435, 0.0023053459439492297359, 0.0023322335254499053451),
        (-6.0, -1.0, -1.8665305812449398039, -0.95596548351847812099, 2.6829944789224481942, -4.3554803240860822477),
        (7.5, 7.0, 5.6386770270142767897e-6, -0.000011477432437226149972, -0.000030198624558537787952, 0.000027875363889129985204),
        (1.0, 9.0, -5271.2096417361342238, -3265.9261712648883311, 5374.6701623552890768, 17767.57743515844863),
        (-12.0, 0.2, -0.083034556720587234339, 0.22148670647121570533, 1.2801882407695612884, 0.16989118851870439857),
        (15.0, -3.0, 2.4526700772259410867e-18, -2.9629596308766196793e-18, -8.4523645681026037014e-18, 1.2516791565713311649e-17),
        (-2.0, -14.0, 901313588431.51556235, 903268522275.62643911, -4768795953449.1695428, 321215439395.79727338),
        (19.0, 0.0, 1.4177043777933527189e-25, 0.0, -6.1981458271300150586e-25, 0.0),
        (0.1, -0.1, 0.32903639772698088851, 0.025763613062431528007, -0.2586473308558162591, -0.0033772896557438373486),
        (3.0, 5.0, -0.14004978934573721371, 0.029748277034203537159, 0.33191621088406506396, 0.098426626515808810857),
        (-8.0, 8.0, -2221557713.2273907738, 702648577.68647326278, 4996511121.7828957466, 5975361553.7229361162),
    ];

    #[test]
    fn reference_values() {
        for (x, y, ar, ai, dr, di) in REF {
            let (a, d) = airy_ai_pair(C64::new(x, y));
            let ea = (a - C64::new(ar, ai)).norm() / C64::new(ar, ai).norm();
            let ed = (d - C64::new(dr, di)).norm() / C64::new(dr, di).norm();
            assert!(ea < 1e-12 && ed < 1e-12, "z=({x},{y}): {ea:e} {ed:e}");
        }
    }

    #[test]
    fn value_at_zero() {
        // Ai(0) = 3^{-2/3}/Gamma(2/3)
        let g = super::super::log_gamma_real(2.0 / 3.0).exp();
        assert!((airy_ai(C64::new(0.0, 0.0)).re - 3f64.powf(-2.0 / 3.0) / g).abs() < 1e-15);
    }

    #[test]
    fn ode_and_connection() {
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let z = C64::from_polar(12.0 * next(), 2.0 * PI * next());
            let s = airy_ai(z) + w * airy_ai(w * z) + w * w * airy_ai(w * w * z);
            let scale = airy_ai(z).norm() + airy_ai(w * z).norm() + airy_ai(w * w * z).norm();
            assert!(s.norm() < 1e-9 * scale, "{z}");
            let h = 1e-3;
            let f = |d: f64| airy_ai(z + d);
            let second = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
            assert!((second - z * f(0.0)).norm() < 1e-6 * (1.0 + (z * f(0.0)).norm()), "{z}");
        }
    }
}

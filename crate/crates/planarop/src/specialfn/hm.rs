use serde::Serialize;

use super::airy::airy_ai_pair;
use crate::{c, Error, Result};

/// Tabulated Hastings-McLeod solution `q'' = s q + 2 q^3`, `q ~ Ai(s)` as
/// `s -> +inf`, with `u = q'^2 - s q^2 - q^4` (so `u' = -q^2`).
#[derive(Debug, Clone, Serialize)]
pub struct HastingsMcLeodTable {
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub q_prime: Vec<f64>,
    pub u: Vec<f64>,
    /// Largest `|q'' - s q - 2 q^3|` at the nodes, with `q''` from finite differences.
    pub residual: f64,
}

fn ai_real(s: f64) -> (f64, f64) {
    let (a, d) = airy_ai_pair(c(s, 0.0));
    (a.re, d.re)
}

/// `sqrt(-s/2)(1 + 1/(8 s^3) - 73/(128 s^6))` and its derivative.
fn left_asymptotic(s: f64) -> (f64, f64) {
    let r = (-0.5 * s).sqrt();
    let p = 1.0 + 1.0 / (8.0 * s.powi(3)) - 73.0 / (128.0 * s.powi(6));
    let dp = -3.0 / (8.0 * s.powi(4)) + 438.0 / (128.0 * s.powi(7));
    let dr = -0.25 / r;
    (r * p, dr * p + r * dp)
}

fn numerov(s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>> {
    let h = (s_max - s_min) / (n - 1) as f64;
    let s: Vec<f64> = (0..n).map(|i| s_min + h * i as f64).collect();
    let mut q: Vec<f64> = s
        .iter()
        .map(|&x| (ai_real(x).0.powi(2) + (-x).max(0.0) * 0.5).sqrt())
        .collect();
    q[0] = left_asymptotic(s_min).0;
    q[n - 1] = ai_real(s_max).0;
    let h12 = h * h / 12.0;
    let f = |x: f64, y: f64| x * y + 2.0 * y * y * y;
    let df = |x: f64, y: f64| x + 6.0 * y * y;
    let residual = |q: &[f64]| -> Vec<f64> {
        (1..n - 1)
            .map(|i| {
                q[i + 1] - 2.0 * q[i] + q[i - 1]
                    - h12 * (f(s[i + 1], q[i + 1]) + 10.0 * f(s[i], q[i]) + f(s[i - 1], q[i - 1]))
            })
            .collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut r = residual(&q);
    for _ in 0..100 {
        let rn = norm(&r);
        if rn < 1e-15 {
            return Ok(q);
        }
        // Tridiagonal Jacobian over interior unknowns, Thomas algorithm.
        let m = n - 2;
        let mut lo = vec![0.0; m];
        let mut di = vec![0.0; m];
        let mut up = vec![0.0; m];
        for k in 0..m {
            let i = k + 1;
            lo[k] = 1.0 - h12 * df(s[i - 1], q[i - 1]);
            di[k] = -2.0 - 10.0 * h12 * df(s[i], q[i]);
            up[k] = 1.0 - h12 * df(s[i + 1], q[i + 1]);
        }
        let mut rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        for k in 1..m {
            let w = lo[k] / di[k - 1];
            di[k] -= w * up[k - 1];
            rhs[k] -= w * rhs[k - 1];
        }
        let mut dx = vec![0.0; m];
        dx[m - 1] = rhs[m - 1] / di[m - 1];
        for k in (0..m - 1).rev() {
            dx[k] = (rhs[k] - up[k] * dx[k + 1]) / di[k];
        }
        let mut lambda = 1.0;
        loop {
            let mut trial = q.clone();
            for k in 0..m {
                trial[k + 1] += lambda * dx[k];
            }
            let rt = residual(&trial);
            if norm(&rt) < rn || lambda < 1e-4 {
                q = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
        if norm(&dx) * lambda < 1e-15 {
            return Ok(q);
        }
    }
    if norm(&r) < 1e-12 {
        Ok(q)
    } else {
        Err(Error::Convergence(format!("Hastings-McLeod Newton stalled at residual {:e}", norm(&r))))
    }
}

/// Finite-difference weights for derivative `order` at `x0` on `xs` (Fornberg).
fn fd_weights(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    w[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[i][k] = c1 * (k as f64 * w[i - 1][k - 1] - c5 * w[i - 1][k]) / c2;
                }
                w[i][0] = -c1 * c5 * w[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                w[j][k] = (c4 * w[j][k] - k as f64 * w[j][k - 1]) / c3;
            }
            w[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    w.into_iter().map(|row| row[order]).collect()
}

/// Derivative of `order` at every node from 7-point stencils (one-sided near the ends).
fn differentiate(s: &[f64], v: &[f64], order: usize) -> Vec<f64> {
    let n = s.len();
    let width = 7 + order.saturating_sub(1);
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(width / 2).min(n - width);
            let xs = &s[start..start + width];
            fd_weights(s[i], xs, order)
                .iter()
                .zip(&v[start..start + width])
                .map(|(w, y)| w * y)
                .sum()
        })
        .collect()
}

/// Solve for the Hastings-McLeod function on `[s_min, s_max]` with `n_grid` nodes.
///
/// Two Numerov solves on `h` and `h/2` are combined by Richardson extrapolation.
pub fn hastings_mcleod(s_min: f64, s_max: f64, n_grid: usize) -> Result<HastingsMcLeodTable> {
    if !(s_min < -2.0 && s_max > 2.0 && n_grid >= 64) {
        return Err(Error::InvalidParams(format!(
            "hastings_mcleod needs s_min < -2 < 2 < s_max and n_grid >= 64, got [{s_min}, {s_max}], {n_grid}"
        )));
    }
    let coarse = numerov(s_min, s_max, n_grid)?;
    let fine = numerov(s_min, s_max, 2 * n_grid - 1)?;
    let h = (s_max - s_min) / (n_grid - 1) as f64;
    let s: Vec<f64> = (0..n_grid).map(|i| s_min + h * i as f64).collect();
    let q: Vec<f64> = (0..n_grid).map(|i| (16.0 * fine[2 * i] - coarse[i]) / 15.0).collect();
    let q_prime = differentiate(&s, &q, 1);
    let u = (0..n_grid)
        .map(|i| q_prime[i].powi(2) - s[i] * q[i].powi(2) - q[i].powi(4))
        .collect();
    let mut table = HastingsMcLeodTable { s, q, q_prime, u, residual: 0.0 };
    table.residual = table.node_residuals()[3..n_grid - 3].iter().fold(0.0, |m, r| m.max(*r));
    Ok(table)
}

/// Quintic Hermite interpolation from values, first and second derivatives.
fn hermite5(h: f64, x: f64, y0: [f64; 3], y1: [f64; 3]) -> f64 {
    let t = x / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
    h00 * y0[0] + h * h10 * y0[1] + h * h * h20 * y0[2] + h01 * y1[0] + h * h11 * y1[1] + h * h * h21 * y1[2]
}

impl HastingsMcLeodTable {
    /// `|q'' - s q - 2 q^3|` at every node, with `q''` from finite differences.
    /// The end nodes use one-sided stencils and are less accurate.
    pub fn node_residuals(&self) -> Vec<f64> {
        let q2 = differentiate(&self.s, &self.q, 2);
        (0..self.s.len()).map(|i| (q2[i] - self.s[i] * self.q[i] - 2.0 * self.q[i].powi(3)).abs()).collect()
    }

    pub fn s_min(&self) -> f64 {
        self.s[0]
    }

    pub fn s_max(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.s_min() && s <= self.s_max()
    }

    fn locate(&self, s: f64) -> (usize, f64, f64) {
        let h = self.s[1] - self.s[0];
        let i = (((s - self.s[0]) / h).floor() as usize).min(self.s.len() - 2);
        (i, s - self.s[i], h)
    }

    /// `q(s)`; outside the table, `Ai(s)` on the right and the three-term expansion on the left.
    pub fn q(&self, s: f64) -> f64 {
        if s > self.s_max() {
            return ai_real(s).0;
        }
        if s < self.s_min() {
            return left_asymptotic(s).0;
        }
        let (i, x, h) = self.locate(s);
        let node = |j: usize| {
            let (sj, qj) = (self.s[j], self.q[j]);
            [qj, self.q_prime[j], sj * qj + 2.0 * qj.powi(3)]
        };
        hermite5(h, x, node(i), node(i + 1))
    }

    pub fn q_prime(&self, s: f64) -> f64 {
        if s > self.s_max() {
            return ai_real(s).1;
        }
        if s < self.s_min() {
            return left_asymptotic(s).1;
        }
        let (i, x, h) = self.locate(s);
        let node = |j: usize| {
            let (sj, qj, dj) = (self.s[j], self.q[j], self.q_prime[j]);
            [dj, sj * qj + 2.0 * qj.powi(3), qj + sj * dj + 6.0 * qj * qj * dj]
        };
        hermite5(h, x, node(i), node(i + 1))
    }

    /// `u(s) = q'^2 - s q^2 - q^4`.
    pub fn u(&self, s: f64) -> f64 {
        if !self.contains(s) {
            let (q, d) = (self.q(s), self.q_prime(s));
            return d * d - s * q * q - q.powi(4);
        }
        let (i, x, h) = self.locate(s);
        let node = |j: usize| {
            let (qj, dj) = (self.q[j], self.q_prime[j]);
            [self.u[j], -qj * qj, -2.0 * qj * dj]
        };
        hermite5(h, x, node(i), node(i + 1))
    }
}

/// Largest `|u' + q^2|` over interior nodes, `u'` by finite differences.
pub fn u_prime_identity_check(table: &HastingsMcLeodTable) -> f64 {
    let du = differentiate(&table.s, &table.u, 1);
    (3..table.s.len() - 3)
        .map(|i| (du[i] + table.q[i].powi(2)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Instant;

    fn table() -> HastingsMcLeodTable {
        hastings_mcleod(-10.0, 10.0, 4001).unwrap()
    }

    #[test]
    fn fd_weights_match_known_stencils() {
        let xs: Vec<f64> = (-3..=3).map(|k| k as f64).collect();
        let w = fd_weights(0.0, &xs, 1);
        let known = [-1.0 / 60.0, 3.0 / 20.0, -0.75, 0.0, 0.75, -3.0 / 20.0, 1.0 / 60.0];
        for (a, b) in w.iter().zip(known) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn painleve_residual_and_boundary_behaviour() {
        let start = Instant::now();
        let t = table();
        assert!(start.elapsed().as_secs_f64() < 10.0);
        assert!(t.residual < 1e-8, "residual {:e}", t.residual);
        assert!((t.q(6.0) / ai_real(6.0).0 - 1.0).abs() < 1e-6);
        assert!(((t.q(-8.0) / 2.0) - 1.0).abs() < 1e-3);
        assert!(u_prime_identity_check(&t) < 1e-6);
    }

    #[test]
    fn grid_refinement_agrees() {
        let a = hastings_mcleod(-10.0, 10.0, 2001).unwrap();
        let b = table();
        for s in [-7.3, -2.0, 0.0, 1.7, 5.0] {
            assert!((a.q(s) - b.q(s)).abs() < 1e-7, "{s}");
        }
    }

    #[test]
    fn known_values() {
        // q(0) and q'(0) of the Hastings-McLeod solution.
        let t = table();
        assert!((t.q(0.0) - 0.367_061_551_548_078_1).abs() < 1e-9, "{}", t.q(0.0));
        assert!((t.q_prime(0.0) + 0.295_372_105_447_550_7).abs() < 1e-9, "{}", t.q_prime(0.0));
    }
}

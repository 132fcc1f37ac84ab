//! Problem parameters, the `N = (n - r)/t` scaling and regime classification.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default half-width of the critical window, in units of `N^{-2/3}`.
///
/// With this width `a = 1, c = 1/6, n = 59, N = 30` classifies as
/// post-critical while `n = 54, 55` at the same `N` are critical.
pub const DEFAULT_WINDOW: f64 = 1.0;

/// Critical time `t_c = a(a + 2 sqrt c)`.
pub fn critical_time(a: f64, c: f64) -> f64 {
    a * (a + 2.0 * c.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Regime {
    PreCritical,
    Critical { s_estimate: f64 },
    PostCritical,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::PreCritical => "pre-critical",
            Regime::Critical { .. } => "critical",
            Regime::PostCritical => "post-critical",
        }
    }

    /// Classification without a finite `N`: the window collapses to the
    /// single point `t = t_c`.
    pub fn of_time(a: f64, c: f64, t: f64) -> Regime {
        let tc = critical_time(a, c);
        if t < tc {
            Regime::PreCritical
        } else if t > tc {
            Regime::PostCritical
        } else {
            Regime::Critical { s_estimate: 0.0 }
        }
    }
}

/// The tuple `(a, c, t, n, N, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub a: f64,
    pub c: f64,
    pub t: f64,
    pub n: u32,
    pub big_n: f64,
    pub r: i64,
    t_c: f64,
}

impl ModelParams {
    /// Parameters from degree and `N`; `t = (n - r)/N`.
    pub fn from_degree(a: f64, c: f64, n: u32, big_n: f64, r: i64) -> Result<Self> {
        check_ac(a, c)?;
        if !(big_n > 0.0 && big_n.is_finite()) {
            return Err(Error::InvalidParams(format!("N must be positive, got {big_n}")));
        }
        let t = (n as i64 - r) as f64 / big_n;
        if t <= 0.0 {
            return Err(Error::InvalidParams(format!("n - r must be positive (n={n}, r={r})")));
        }
        Ok(ModelParams { a, c, t, n, big_n, r, t_c: critical_time(a, c) })
    }

    /// Parameters from time and degree; `N = (n - r)/t`.
    pub fn from_time(a: f64, c: f64, t: f64, n: u32, r: i64) -> Result<Self> {
        check_ac(a, c)?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParams(format!("t must be positive, got {t}")));
        }
        let k = n as i64 - r;
        if k <= 0 {
            return Err(Error::InvalidParams(format!("n - r must be positive (n={n}, r={r})")));
        }
        Ok(ModelParams { a, c, t, n, big_n: k as f64 / t, r, t_c: critical_time(a, c) })
    }

    pub fn t_c(&self) -> f64 {
        self.t_c
    }

    /// `m = Nc`.
    pub fn charge(&self) -> f64 {
        self.big_n * self.c
    }

    pub fn classify(&self, window: f64) -> Regime {
        classify(self, window)
    }

    /// `s = c^{1/6} a^{-1/3} b_c^{-2/3} N^{2/3} (t - t_c)`.
    pub fn s_estimate(&self) -> f64 {
        let bc = self.a + self.c.sqrt();
        self.c.powf(1.0 / 6.0) * self.a.powf(-1.0 / 3.0) * bc.powf(-2.0 / 3.0)
            * self.big_n.powf(2.0 / 3.0)
            * (self.t - self.t_c)
    }
}

fn check_ac(a: f64, c: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParams(format!("a must be positive, got {a}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParams(format!("c must be positive, got {c}")));
    }
    Ok(())
}

/// Regime of `params` with critical window `window * N^{-2/3}` around `t_c`.
pub fn classify(params: &ModelParams, window: f64) -> Regime {
    let delta = window * params.big_n.powf(-2.0 / 3.0);
    let dt = params.t - params.t_c;
    if dt < -delta {
        Regime::PreCritical
    } else if dt > delta {
        Regime::PostCritical
    } else {
        Regime::Critical { s_estimate: params.s_estimate() }
    }
}

#[derive(Serialize)]
struct ParamsJson {
    a: f64,
    c: f64,
    t: f64,
    n: u32,
    #[serde(rename = "N")]
    big_n: f64,
    r: i64,
    t_c: f64,
    regime: Regime,
}

impl Serialize for ModelParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamsJson {
            a: self.a,
            c: self.c,
            t: self.t,
            n: self.n,
            big_n: self.big_n,
            r: self.r,
            t_c: self.t_c,
            regime: self.classify(DEFAULT_WINDOW),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_times() {
        assert!((critical_time(1.0, 1.0 / 6.0) - 1.816496580927726).abs() < 1e-14);
        assert_eq!(critical_time(1.0, 1.0), 3.0);
        assert!((critical_time(2.0, 1e-300) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn regimes_of_reference_cases() {
        let p = ModelParams::from_degree(1.0, 1.0 / 6.0, 25, 30.0, 0).unwrap();
        assert_eq!(p.classify(DEFAULT_WINDOW), Regime::PreCritical);
        let p = ModelParams::from_degree(1.0, 1.0 / 6.0, 59, 30.0, 0).unwrap();
        assert_eq!(p.classify(DEFAULT_WINDOW), Regime::PostCritical);
        let p = ModelParams::from_time(1.0, 1.0, 3.0, 300, 0).unwrap();
        assert_eq!(p.big_n, 100.0);
        assert_eq!(p.classify(DEFAULT_WINDOW), Regime::Critical { s_estimate: 0.0 });
    }

    #[test]
    fn window_contains_matched_critical_degrees() {
        for n in [54, 55] {
            let p = ModelParams::from_degree(1.0, 1.0 / 6.0, n, 30.0, 0).unwrap();
            assert!(matches!(p.classify(DEFAULT_WINDOW), Regime::Critical { .. }), "n={n}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ModelParams::from_degree(-1.0, 1.0, 5, 3.0, 0).is_err());
        assert!(ModelParams::from_degree(1.0, 1.0, 5, 3.0, 5).is_err());
        assert!(ModelParams::from_time(1.0, 1.0, 0.0, 5, 0).is_err());
    }
}

//! `planarop`: reproducible experiments on planar orthogonal polynomials with
//! a point charge. Every command writes its artifacts into `--out`.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use planarop::asymptotics::AsymptoticContext;
use planarop::contours::{trace_branch_cut, trace_lens, zero_curve, TracedCurve};
use planarop::geometry::Geometry;
use planarop::model::{critical_time, ModelParams, Regime, DEFAULT_WINDOW};
use planarop::oracle::{
    default_precision, exact_moments, exact_zeros, parse_rational, rational_from_f64, rational_to_f64,
    OracleParams,
};
use planarop::specialfn::hastings_mcleod;
use planarop::validation::{validate_params, Suite};

use output::{num, Output};

#[derive(Parser)]
#[command(name = "planarop", version, about = "Planar orthogonal polynomials with a point charge")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Serialize)]
struct Global {
    /// Position of the point charge on the positive axis.
    #[arg(long, global = true, default_value = "1")]
    a: String,
    /// Charge strength; rationals such as 1/6 are accepted.
    #[arg(long, global = true, default_value = "1/6")]
    c: String,
    /// Time `t = (n - r)/N`; give either `t` or `n` and `N`.
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Degree.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Scaling parameter.
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    big_n: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    r: i64,
    /// Working precision of the oracle, `max(256, 8n)` by default.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed of the Aberth starting points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// `x0:x1:nx,y0:y1:ny`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry report with the branch cut, lens and zero curves.
    Geometry,
    /// Branch cut and lens curves only.
    Trace,
    /// Asymptotic `P_n` at points or on a grid.
    Eval {
        /// Points `x,y`; repeatable.
        #[arg(long = "z", allow_hyphen_values = true)]
        points: Vec<String>,
        /// File with one `x,y` point per line; `#` starts a comment.
        #[arg(long = "points")]
        points_file: Option<PathBuf>,
        /// Compare with the exact polynomial.
        #[arg(long)]
        exact: bool,
    },
    /// Density `rho_n` on a grid.
    Density {
        /// Use the exact polynomial instead of the asymptotics.
        #[arg(long)]
        exact: bool,
    },
    /// Potentials `phi`, `g`, `U`, `U_OP`, `Q` on a grid.
    Field,
    /// Exact zeros with distances to the branch cut and zero curve.
    Zeros,
    /// Post-critical zero curve.
    ZeroCurve,
    /// Norming constant `h_n`.
    Hn,
    /// Hastings-McLeod table with the Painleve II residual.
    HmTable {
        #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
        smin: f64,
        #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
        smax: f64,
        #[arg(long, default_value_t = 3201)]
        nodes: usize,
    },
    /// Exact polynomial, norm and zeros for integer charge `m`.
    Oracle {
        /// Charge `m = N c`; taken from `N c` when omitted.
        #[arg(long)]
        m: Option<u32>,
    },
    /// Asymptotics against the oracle; `--suite` runs all acceptance criteria.
    Validate {
        #[arg(long)]
        suite: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Geometry => "geometry",
            Command::Trace => "trace",
            Command::Eval { .. } => "eval",
            Command::Density { .. } => "density",
            Command::Field => "field",
            Command::Zeros => "zeros",
            Command::ZeroCurve => "zero-curve",
            Command::Hn => "hn",
            Command::HmTable { .. } => "hm-table",
            Command::Oracle { .. } => "oracle",
            Command::Validate { .. } => "validate",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
struct Grid {
    x_min: f64,
    x_max: f64,
    nx: usize,
    y_min: f64,
    y_max: f64,
    ny: usize,
}

impl Grid {
    fn parse(s: &str) -> Result<Grid> {
        let axis = |p: &str| -> Result<(f64, f64, usize)> {
            let f: Vec<&str> = p.split(':').collect();
            if f.len() != 3 {
                bail!("grid axis {p:?} is not lo:hi:count");
            }
            let (lo, hi, n) = (f[0].trim().parse()?, f[1].trim().parse()?, f[2].trim().parse()?);
            if n < 2 || !(hi > lo) {
                bail!("grid axis {p:?} needs lo < hi and count >= 2");
            }
            Ok((lo, hi, n))
        };
        let (x, y) = s.split_once(',').ok_or_else(|| anyhow!("grid {s:?} is not x0:x1:nx,y0:y1:ny"))?;
        let ((x_min, x_max, nx), (y_min, y_max, ny)) = (axis(x)?, axis(y)?);
        Ok(Grid { x_min, x_max, nx, y_min, y_max, ny })
    }

    fn points(&self) -> Vec<C64> {
        let at = |lo: f64, hi: f64, n: usize, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .map(|(i, j)| C64::new(at(self.x_min, self.x_max, self.nx, i), at(self.y_min, self.y_max, self.ny, j)))
            .collect()
    }
}

struct Run {
    cli_name: &'static str,
    global: Global,
    a: f64,
    c: f64,
    out: Output,
}

impl Run {
    fn header(&self, extra: Value) -> Value {
        let mut h = json!({
            "command": self.cli_name,
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.global,
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut h, extra) {
            m.extend(e);
        }
        h
    }

    /// Full parameters when `n` is known; `None` for a bare `t`.
    fn params(&self) -> Result<Option<ModelParams>> {
        let g = &self.global;
        let p = match (g.t, g.n, g.big_n) {
            (Some(_), _, Some(_)) => bail!("give either --t or --N, not both"),
            (None, Some(n), Some(big_n)) => ModelParams::from_degree(self.a, self.c, n, big_n, g.r),
            (Some(t), Some(n), None) => ModelParams::from_time(self.a, self.c, t, n, g.r),
            (Some(_), None, None) => return Ok(None),
            _ => bail!("give --t, or --n with --N"),
        };
        Ok(Some(p.map_err(lib)?))
    }

    fn require_params(&self) -> Result<ModelParams> {
        self.params()?.ok_or_else(|| anyhow!("this command needs --n and --N (or --n and --t)"))
    }

    fn grid(&self) -> Result<Grid> {
        Grid::parse(self.global.grid.as_deref().ok_or_else(|| anyhow!("this command needs --grid"))?)
    }

    fn context(&self) -> Result<AsymptoticContext> {
        AsymptoticContext::new(self.require_params()?).map_err(lib)
    }
}

fn lib(e: planarop::Error) -> anyhow::Error {
    anyhow::Error::new(SolverError(e))
}

/// Errors of the numerical library; they map to exit code 2.
#[derive(Debug)]
struct SolverError(planarop::Error);

impl std::fmt::Display for SolverError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::error::Error for SolverError {}

fn parse_real(s: &str) -> Result<f64> {
    Ok(rational_to_f64(&parse_rational(s).map_err(lib)?))
}

fn curve_rows(curve: &TracedCurve) -> Vec<Vec<String>> {
    curve
        .points
        .iter()
        .zip(&curve.arclength)
        .zip(&curve.residual)
        .map(|((z, s), r)| vec![num(z.re), num(z.im), num(*s), num(*r)])
        .collect()
}

const CURVE_COLUMNS: [&str; 4] = ["x", "y", "arclength", "residual"];

fn curve_summary(curve: &TracedCurve) -> Value {
    json!({
        "nodes": curve.points.len(),
        "length": curve.length(),
        "closed": curve.closed,
        "max_residual": curve.max_residual(),
        "negative_axis_crossings": curve.negative_axis_crossings(),
    })
}

/// Geometry for the configured parameters: the regime follows the critical
/// window when `N` is known and the sign of `t - t_c` otherwise.
fn solve_geometry(run: &Run) -> Result<(Geometry, Regime, Option<ModelParams>)> {
    let params = run.params()?;
    let (t, big_n, regime) = match params {
        Some(p) => (p.t, p.big_n, p.classify(DEFAULT_WINDOW)),
        None => {
            let t = run.global.t.unwrap();
            (t, 1.0, Regime::of_time(run.a, run.c, t))
        }
    };
    let geo = Geometry::solve_at(run.a, run.c, t, big_n, regime).map_err(lib)?;
    Ok((geo, regime, params))
}

fn write_curves(run: &mut Run, geo: &Geometry, params: Option<&ModelParams>) -> Result<(Value, bool)> {
    let cut = trace_branch_cut(geo).map_err(lib)?;
    let lens = trace_lens(geo, &cut, 0.05 * geo.scale(), 1e-6).map_err(lib)?;
    let header = run.header(json!({}));
    run.out.csv("branch_cut.csv", &header, &CURVE_COLUMNS, &curve_rows(&cut.curve))?;
    run.out.csv("lens_plus.csv", &header, &CURVE_COLUMNS, &curve_rows(&lens.plus))?;
    run.out.csv("lens_minus.csv", &header, &CURVE_COLUMNS, &curve_rows(&lens.minus))?;
    let mut summary = json!({
        "branch_cut": curve_summary(&cut.curve),
        "lens_width": lens.width,
    });
    let mut ok = cut.curve.max_residual() < 1e-7;
    if let (Some(p), Geometry::Post(_)) = (params, geo) {
        let zc = zero_curve(geo, p.big_n, p.r as f64, &cut).map_err(lib)?;
        run.out.csv("zero_curve.csv", &header, &CURVE_COLUMNS, &curve_rows(&zc))?;
        summary["zero_curve"] = curve_summary(&zc);
        ok &= zc.max_residual() < 1e-7;
    }
    Ok((summary, ok))
}

fn cmd_geometry(run: &mut Run) -> Result<bool> {
    let (geo, regime, params) = solve_geometry(run)?;
    let (curves, mut ok) = write_curves(run, &geo, params.as_ref())?;
    if let Geometry::Pre(p) = &geo {
        let r = p.residuals;
        ok &= [r.cubic, r.val_s1, r.val_s2, r.val_s3].iter().all(|x| *x < 1e-9);
    }
    let report = json!({
        "header": run.header(json!({})),
        "regime": regime,
        "t_c": critical_time(run.a, run.c),
        "geometry": geo,
        "beta": geo.beta(),
        "b": geo.b(),
        "capacity": geo.capacity(),
        "ell_2d": geo.ell_2d(),
        "curves": curves,
        "residuals_pass": ok,
    });
    run.out.json("geometry.json", &report)?;
    if !ok {
        return Err(lib(planarop::Error::Convergence("geometry residuals above tolerance".into())));
    }
    Ok(true)
}

fn cmd_trace(run: &mut Run) -> Result<bool> {
    let (geo, regime, params) = solve_geometry(run)?;
    let (curves, ok) = write_curves(run, &geo, params.as_ref())?;
    run.out.json("trace.json", &json!({ "header": run.header(json!({})), "regime": regime, "curves": curves }))?;
    Ok(ok)
}

fn parse_point(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
    let [x, y] = parts[..] else { bail!("point {s:?} is not x,y") };
    Ok(C64::new(x.parse()?, y.parse()?))
}

fn read_points(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

fn cmd_eval(run: &mut Run, points: &[String], points_file: Option<&Path>, exact: bool) -> Result<bool> {
    let ctx = run.context()?;
    let mut points = points.to_vec();
    if let Some(path) = points_file {
        points.extend(read_points(path)?);
    }
    let from_grid = points.is_empty();
    let zs: Vec<C64> = if from_grid {
        run.grid()?.points()
    } else {
        points.iter().map(|s| parse_point(s)).collect::<Result<_>>()?
    };
    let poly = if exact {
        let p = &ctx.params;
        let op = OracleParams::from_f64(p.a, p.big_n, p.c).map_err(lib)?;
        let prec = run.global.precision_bits.unwrap_or(default_precision(p.n as usize));
        Some(exact_moments(&op, p.n as usize + 1).and_then(|m| m.factor(prec)?.polynomial(p.n as usize)).map_err(lib)?)
    } else {
        None
    };
    let rows: Vec<Vec<String>> = zs
        .par_iter()
        .map(|&z| {
            let mut row = vec![num(z.re), num(z.im)];
            match ctx.eval_p(z) {
                Ok(r) => row.extend([
                    r.zone.zone.name().to_string(),
                    r.error_order.name().to_string(),
                    r.bound_only.to_string(),
                    num(r.ln_abs()),
                    num(r.arg()),
                ]),
                Err(_) => row.extend(["none".into(), "none".into(), "true".into(), num(f64::NAN), num(f64::NAN)]),
            }
            if let Some(poly) = &poly {
                let (l, a) = poly.eval_log(z);
                let rel = ctx
                    .eval_p(z)
                    .map(|r| planarop::validation::relative_error(&r, (l, a)))
                    .unwrap_or(f64::NAN);
                row.extend([num(l), num(a), num(rel)]);
            }
            row
        })
        .collect();
    let mut columns = vec!["x", "y", "zone", "error_order", "bound_only", "ln_abs", "arg"];
    if exact {
        columns.extend(["exact_ln_abs", "exact_arg", "rel_error"]);
    }
    let header = run.header(json!({ "regime": ctx.regime }));
    run.out.csv("eval.csv", &header, &columns, &rows)?;
    if !from_grid {
        for row in &rows {
            println!("{}", row.join(","));
        }
    }
    Ok(true)
}

fn cmd_density(run: &mut Run, exact: bool) -> Result<bool> {
    let ctx = run.context()?;
    let grid = run.grid()?;
    let p = ctx.params;
    let poly = if exact {
        let op = OracleParams::from_f64(p.a, p.big_n, p.c).map_err(lib)?;
        let prec = run.global.precision_bits.unwrap_or(default_precision(p.n as usize));
        Some(exact_moments(&op, p.n as usize + 1).and_then(|m| m.factor(prec)?.polynomial(p.n as usize)).map_err(lib)?)
    } else {
        None
    };
    let scale = 2.0 * std::f64::consts::PI * (std::f64::consts::PI / (2.0 * p.big_n)).sqrt();
    let rows: Vec<Vec<String>> = grid
        .points()
        .par_iter()
        .map(|&z| {
            let log_rho = match &poly {
                Some(poly) => {
                    let (l, _) = poly.eval_log(z);
                    planarop::asymptotics::log_rho_from_parts(&p, z, l, poly.log_hn())
                }
                None => ctx.log_rho_n(z).unwrap_or(f64::NAN),
            };
            vec![num(z.re), num(z.im), num(log_rho), num(log_rho.exp()), num(scale * log_rho.exp())]
        })
        .collect();
    let header = run.header(json!({ "regime": ctx.regime, "source": if exact { "exact" } else { "asymptotic" } }));
    run.out.csv("density.csv", &header, &["x", "y", "log_rho", "rho", "scaled_rho"], &rows)?;
    Ok(true)
}

fn cmd_field(run: &mut Run) -> Result<bool> {
    let ctx = run.context()?;
    let grid = run.grid()?;
    let pot = &ctx.potentials;
    let rows: Vec<Vec<String>> = grid
        .points()
        .par_iter()
        .map(|&z| {
            let phi = pot.phi(z).unwrap_or(C64::new(f64::NAN, f64::NAN));
            let g = pot.g(z).unwrap_or(C64::new(f64::NAN, f64::NAN));
            let zone = planarop::contours::classify_zone(z, &ctx.contours).map(|t| t.zone.name()).unwrap_or("on_cut");
            vec![
                num(z.re),
                num(z.im),
                num(phi.re),
                num(phi.im),
                num(g.re),
                num(g.im),
                num(pot.u(z).unwrap_or(f64::NAN)),
                num(pot.u_op(z).unwrap_or(f64::NAN)),
                num(pot.u_2d(z).unwrap_or(f64::NAN)),
                num(pot.q(z)),
                pot.in_k(z).to_string(),
                zone.to_string(),
            ]
        })
        .collect();
    let columns = ["x", "y", "phi_re", "phi_im", "g_re", "g_im", "u", "u_op", "u_2d", "q", "in_k", "zone"];
    let header = run.header(json!({ "regime": ctx.regime }));
    run.out.csv("field.csv", &header, &columns, &rows)?;
    Ok(true)
}

fn oracle_params(run: &Run, big_n: f64, m: Option<u32>) -> Result<OracleParams> {
    let op = match m {
        Some(m) => {
            let a = parse_rational(&run.global.a).map_err(lib)?;
            let big_n = rational_from_f64(big_n).map_err(lib)?;
            OracleParams::new(a, big_n, m)
        }
        None => OracleParams::from_f64(run.a, big_n, run.c),
    };
    op.map_err(lib)
}

fn cmd_zeros(run: &mut Run) -> Result<bool> {
    let ctx = run.context()?;
    let p = ctx.params;
    let op = oracle_params(run, p.big_n, None)?;
    let prec = run.global.precision_bits.unwrap_or(default_precision(p.n as usize));
    let poly = exact_moments(&op, p.n as usize + 1)
        .and_then(|m| m.factor(prec)?.polynomial(p.n as usize))
        .map_err(lib)?;
    let zeros = exact_zeros(&poly, run.global.seed).map_err(lib)?;
    let curve = match ctx.geometry() {
        Geometry::Post(_) => Some(zero_curve(ctx.geometry(), p.big_n, p.r as f64, &ctx.contours.cut).map_err(lib)?),
        _ => None,
    };
    let rows: Vec<Vec<String>> = zeros
        .roots
        .iter()
        .map(|&z| {
            let dc = curve
                .as_ref()
                .map(|c| planarop::validation::polyline_distance(&c.points, true, z))
                .unwrap_or(f64::NAN);
            vec![num(z.re), num(z.im), num(ctx.contours.cut.distance(z)), num(dc)]
        })
        .collect();
    let header = run.header(json!({
        "regime": ctx.regime,
        "max_residual": zeros.max_residual,
        "last_correction": zeros.last_correction,
    }));
    run.out.csv("zeros.csv", &header, &["x", "y", "dist_to_cut", "dist_to_zero_curve"], &rows)?;
    Ok(true)
}

fn cmd_zero_curve(run: &mut Run) -> Result<bool> {
    let ctx = run.context()?;
    let p = ctx.params;
    let curve = zero_curve(ctx.geometry(), p.big_n, p.r as f64, &ctx.contours.cut).map_err(lib)?;
    let header = run.header(json!({ "regime": ctx.regime, "summary": curve_summary(&curve) }));
    run.out.csv("zero_curve.csv", &header, &CURVE_COLUMNS, &curve_rows(&curve))?;
    Ok(true)
}

fn cmd_hn(run: &mut Run) -> Result<bool> {
    let ctx = run.context()?;
    let p = ctx.params;
    let asym = ctx.log_hn();
    let mut report = json!({
        "header": run.header(json!({})),
        "regime": ctx.regime,
        "log_hn_asym": asym,
    });
    if let Ok(op) = OracleParams::from_f64(p.a, p.big_n, p.c) {
        let prec = run.global.precision_bits.unwrap_or(default_precision(p.n as usize));
        let poly = exact_moments(&op, p.n as usize + 1)
            .and_then(|m| m.factor(prec)?.polynomial(p.n as usize))
            .map_err(lib)?;
        report["log_hn_exact"] = json!(poly.log_hn());
        report["diff"] = json!(asym - poly.log_hn());
        report["tolerance"] = json!(3.0 / p.big_n);
    }
    println!("{}", serde_json::to_string(&report["log_hn_asym"])?);
    run.out.json("hn.json", &report)?;
    Ok(true)
}

fn cmd_hm_table(run: &mut Run, smin: f64, smax: f64, nodes: usize) -> Result<bool> {
    let t = hastings_mcleod(smin, smax, nodes).map_err(lib)?;
    let res = t.node_residuals();
    let rows: Vec<Vec<String>> = (0..t.s.len())
        .map(|i| vec![num(t.s[i]), num(t.q[i]), num(t.q_prime[i]), num(t.u[i]), num(res[i])])
        .collect();
    let header = run.header(json!({ "smin": smin, "smax": smax, "nodes": nodes, "residual": t.residual }));
    run.out.csv("hm_table.csv", &header, &["s", "q", "q_prime", "u", "residual"], &rows)?;
    Ok(true)
}

fn cmd_oracle(run: &mut Run, m: Option<u32>) -> Result<bool> {
    let g = &run.global;
    let (n, big_n) = match (g.n, g.big_n, g.t) {
        (Some(n), Some(big_n), None) => (n, big_n),
        (Some(n), None, Some(t)) => (n, (n as i64 - g.r) as f64 / t),
        _ => bail!("oracle needs --n with --N or --t"),
    };
    let op = oracle_params(run, big_n, m)?;
    let prec = run.global.precision_bits.unwrap_or(default_precision(n as usize));
    let mm = exact_moments(&op, n as usize + 1).map_err(lib)?;
    let poly = mm.factor(prec).and_then(|f| f.polynomial(n as usize)).map_err(lib)?;
    let zeros = exact_zeros(&poly, run.global.seed).map_err(lib)?;
    let digits = (prec as f64 * std::f64::consts::LOG10_2) as usize;
    let report = json!({
        "header": run.header(json!({})),
        "a": op.a.to_string(),
        "N": op.big_n.to_string(),
        "m": op.m,
        "n": n,
        "precision_bits": prec,
        "log_hn": poly.log_hn(),
        "h_over_pi": planarop::oracle::decimal_string(&poly.h_over_pi.to_rational(), digits),
        "orthogonality_residual": poly.orthogonality_residual(&mm),
        "coefficients": poly.coefficient_strings(digits),
        "zeros_max_residual": zeros.max_residual,
        "zeros_last_correction": zeros.last_correction,
    });
    run.out.json("oracle.json", &report)?;
    let rows: Vec<Vec<String>> = zeros.roots.iter().map(|z| vec![num(z.re), num(z.im)]).collect();
    let header = run.header(json!({ "m": op.m, "n": n }));
    run.out.csv("zeros.csv", &header, &["x", "y"], &rows)?;
    Ok(true)
}

fn cmd_validate(run: &mut Run, suite: bool) -> Result<bool> {
    if suite {
        let reports = Suite::new(run.global.seed).run_all();
        let pass = reports.iter().all(|r| r.pass());
        for r in &reports {
            println!("AC{:<2} {}  {}", r.id, if r.pass() { "PASS" } else { "FAIL" }, r.title);
        }
        run.out.json("validation.json", &json!({ "header": run.header(json!({})), "criteria": reports, "pass": pass }))?;
        return Ok(pass);
    }
    let params = run.require_params()?;
    let checks = validate_params(&params, run.global.seed).map_err(lib)?;
    let pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        println!("{} {}: {} (threshold {})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.measured, c.threshold);
    }
    let regime = params.classify(DEFAULT_WINDOW);
    run.out.json(
        "validation.json",
        &json!({ "header": run.header(json!({})), "regime": regime, "checks": checks, "pass": pass }),
    )?;
    Ok(pass)
}

fn execute(cli: Cli) -> Result<bool> {
    let a = parse_real(&cli.global.a)?;
    let c = parse_real(&cli.global.c)?;
    let out = Output::new(&cli.global.out)?;
    let mut run = Run { cli_name: cli.command.name(), global: cli.global, a, c, out };
    let ok = match &cli.command {
        Command::Geometry => cmd_geometry(&mut run),
        Command::Trace => cmd_trace(&mut run),
        Command::Eval { points, points_file, exact } => cmd_eval(&mut run, points, points_file.as_deref(), *exact),
        Command::Density { exact } => cmd_density(&mut run, *exact),
        Command::Field => cmd_field(&mut run),
        Command::Zeros => cmd_zeros(&mut run),
        Command::ZeroCurve => cmd_zero_curve(&mut run),
        Command::Hn => cmd_hn(&mut run),
        Command::HmTable { smin, smax, nodes } => cmd_hm_table(&mut run, *smin, *smax, *nodes),
        Command::Oracle { m } => cmd_oracle(&mut run, *m),
        Command::Validate { suite } => cmd_validate(&mut run, *suite),
    }?;
    for path in run.out.written() {
        eprintln!("wrote {}", path.display());
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let (kind, code) = match e.downcast_ref::<SolverError>() {
                Some(SolverError(err)) => (format!("{err:?}").split('(').next().unwrap_or("").to_string(), 2),
                None => ("usage".to_string(), 2),
            };
            eprintln!("{}", json!({ "error": kind, "message": format!("{e:#}") }));
            ExitCode::from(code)
        }
    }
}

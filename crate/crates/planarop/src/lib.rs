//! Planar orthogonal polynomials for the weight `|z-a|^{2Nc} e^{-N|z|^2}`.
//!
//! The crate computes the geometry of the equilibrium support `K` (conformal
//! map, Schwarz function, branch points), traces the branch cut `B` on which
//! the zeros accumulate, evaluates the potentials `phi`, `g`, `U`, and the
//! strong asymptotics of the monic orthogonal polynomial `P_{n,N}` in the
//! pre-critical, critical and post-critical regimes.
//!
//! Every asymptotic formula can be compared with [`oracle`], which builds
//! `P_{n,N}` and its norm exactly from closed-form moments when `m = Nc` is
//! an integer.
//!
//! ```
//! use planarop::geometry::PreGeometry;
//!
//! let g = PreGeometry::solve(3.7619, 6.9168, 4.0557).unwrap();
//! assert!((g.rho - 2.1).abs() < 1e-3);
//! assert!((g.alpha - 0.4).abs() < 1e-3);
//! assert!((g.kappa - 0.5).abs() < 1e-3);
//! ```

pub mod asymptotics;
pub mod contours;
mod error;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod potentials;
mod quad;
pub mod specialfn;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub(crate) type C64 = Complex64;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

//! Special functions: complex Airy, the entire function `F(zeta)` built
//! from the Faddeeva function, the Hastings-McLeod solution of Painleve II,
//! and `log Gamma` on the positive axis.

mod airy;
mod faddeeva;
mod gamma;
mod hm;

pub use airy::{airy_ai, airy_ai_pair};
pub use faddeeva::{entire_f, faddeeva_w};
pub use gamma::log_gamma_real;
pub use hm::{hastings_mcleod, u_prime_identity_check, HastingsMcLeodTable};

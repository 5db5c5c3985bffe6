//! Gamma, zeta and related special functions, in binary64 and at an
//! explicit extended precision.

mod bernoulli;
mod critical;
mod gamma;
mod incgamma;
mod kernels;
mod stieltjes;
mod zeta;

pub use bernoulli::{bernoulli, bernoulli_float};
pub use critical::{hardy_z, theta, theta_mod_2pi, zeta_critical, RS_THRESHOLD};
pub use gamma::{gamma, gamma_mp, log_gamma, log_gamma_mp, rgamma};
pub use incgamma::{incomplete_gamma_upper, incomplete_gamma_upper_regularized};
pub use kernels::{h_minus, h_plus, h_total, young_rhs};
pub use zeta::{zeta, zeta_em_f64, zeta_mp};

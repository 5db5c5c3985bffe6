//! Beta-type kernels `H^-`, `H^+` and their sum, with the closed form of
//! their total as a product of Gamma values.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::gamma;
use crate::error::{Error, Result};

fn check(w: Complex64, z: Complex64) -> Result<()> {
    if 0.0 < w.re && w.re < z.re && z.re < 1.0 {
        Ok(())
    } else {
        Err(Error::HKernelDomain {
            w: w.to_string(),
            z: z.to_string(),
        })
    }
}

fn g(z: Complex64) -> Complex64 {
    gamma(z).expect("kernel arguments avoid the poles")
}

/// `int_0^inf lambda^w |1 - lambda|^-z dlambda / lambda`
pub fn h_minus(w: Complex64, z: Complex64) -> Result<Complex64> {
    check(w, z)?;
    let g1z = g(1.0 - z);
    Ok(g(w) * g1z / g(1.0 + w - z) + g(z - w) * g1z / g(1.0 - w))
}

/// `int_0^inf lambda^w (1 + lambda)^-z dlambda / lambda`
pub fn h_plus(w: Complex64, z: Complex64) -> Result<Complex64> {
    check(w, z)?;
    Ok(g(z - w) * g(w) / g(z))
}

pub fn h_total(w: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(h_minus(w, z)? + h_plus(w, z)?)
}

pub fn young_rhs(w: Complex64, z: Complex64) -> Result<Complex64> {
    check(w, z)?;
    let two_z = (z * 2f64.ln()).exp();
    Ok(
        two_z * (PI * z / 2.0).sin() * g(1.0 - z) * g(w / 2.0) * g((z - w) / 2.0)
            / (g((1.0 - w) / 2.0) * g((1.0 - z + w) / 2.0)),
    )
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of complex shifts (the sets `A`, `B`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftSet {
    values: Vec<Complex64>,
}

pub const MAX_REAL_PART: f64 = 0.25;

impl ShiftSet {
    /// Shifts with `|Re| <= 1/4`, at least one element.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("shift set must be non-empty".into()));
        }
        if let Some(v) = values
            .iter()
            .find(|v| !(v.re.abs() <= MAX_REAL_PART) || !v.im.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "shift {v} outside |Re| <= {MAX_REAL_PART}"
            )));
        }
        Ok(Self { values })
    }

    /// No bound on the real parts. For identity checks that need shifts
    /// outside the strip (e.g. absolutely convergent Dirichlet series).
    pub fn unrestricted(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput("shift set must be non-empty and finite".into()));
        }
        Ok(Self { values })
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(k: usize) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); k.max(1)],
        }
    }

    /// Staggered real shifts `j * delta * u` for `j = 1..=k`.
    pub fn staggered(k: usize, delta: f64, u: f64) -> Self {
        Self {
            values: (1..=k.max(1))
                .map(|j| Complex64::new(j as f64 * delta * u, 0.0))
                .collect(),
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `A_t = {alpha + t}`.
    pub fn translate(&self, t: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|a| a + t).collect(),
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            values: self.values.iter().map(|a| -a).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn max_abs_re(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.re.abs()))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<Complex64>) -> Self {
        Self { values }
    }
}

use serde::{Deserialize, Serialize};

use crate::arith::ShiftSet;

/// Weights for the double average over moduli and heights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiWeight {
    /// `exp(-1/((x-1)(2-x)))` on `(1, 2)`
    Bump,
    /// identically zero
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiWeight {
    /// `exp(-t^2)`
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub psi: PsiWeight,
    pub phi: PhiWeight,
    pub t_max: f64,
    pub t_step: f64,
}

impl Default for WeightSpec {
    fn default() -> Self {
        Self {
            psi: PsiWeight::Bump,
            phi: PhiWeight::Gaussian,
            t_max: 6.0,
            t_step: 0.25,
        }
    }
}

impl WeightSpec {
    pub fn psi(&self, x: f64) -> f64 {
        match self.psi {
            PsiWeight::Zero => 0.0,
            PsiWeight::Bump if x > 1.0 && x < 2.0 => (-1.0 / ((x - 1.0) * (2.0 - x))).exp(),
            PsiWeight::Bump => 0.0,
        }
    }

    pub fn phi(&self, t: f64) -> f64 {
        match self.phi {
            PhiWeight::Gaussian => (-t * t).exp(),
        }
    }

    /// Trapezoid nodes and weights on `[-t_max, t_max]`, `Phi` included.
    pub fn t_grid(&self) -> Vec<(f64, f64)> {
        let n = (self.t_max / self.t_step).round() as i64;
        (-n..=n)
            .map(|k| {
                let t = k as f64 * self.t_step;
                let w = if k.abs() == n { 0.5 } else { 1.0 } * self.t_step;
                (t, w * self.phi(t))
            })
            .collect()
    }
}

/// Inputs recorded alongside a result.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_range: Option<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub big_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shifts_a: Option<ShiftSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shifts_b: Option<ShiftSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_cutoff: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characters: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub panels: Option<u64>,
}

/// Empirical value against prediction for one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub family: String,
    pub empirical: f64,
    pub predicted: f64,
    /// `|empirical - predicted| / |predicted|`
    pub rel_dev: f64,
    /// combined numerical error bound on both sides
    pub err_bound: f64,
    pub parameters: Parameters,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl MomentReport {
    pub fn new(family: String, empirical: f64, predicted: f64, err_bound: f64, parameters: Parameters) -> Self {
        Self {
            family,
            empirical,
            predicted,
            rel_dev: rel_dev(empirical, predicted),
            err_bound,
            parameters,
            seconds: None,
        }
    }
}

pub fn rel_dev(empirical: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        if empirical == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (empirical - predicted).abs() / predicted.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_weights() {
        let w = WeightSpec::default();
        assert_eq!(w.psi(1.0), 0.0);
        assert_eq!(w.psi(2.0), 0.0);
        assert!((w.psi(1.5) - (-4.0f64).exp()).abs() < 1e-16);
        let g = w.t_grid();
        assert_eq!(g.len(), 49);
        let total: f64 = g.iter().map(|(_, w)| w).sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let zero = WeightSpec {
            psi: PsiWeight::Zero,
            ..w
        };
        assert_eq!(zero.psi(1.5), 0.0);
    }

    #[test]
    fn report_rel_dev() {
        let r = MomentReport::new("q=5".into(), 1.1, 1.0, 0.0, Parameters::default());
        assert!((r.rel_dev - 0.1).abs() < 1e-12);
        assert_eq!(rel_dev(0.0, 0.0), 0.0);
    }
}

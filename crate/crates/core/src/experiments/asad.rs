//! Stylized aggregate supply / aggregate demand example.
//!
//! With γ_x = 0, φ = 1 and the rule ĩ = φ_π π, period t's Phillips curve and
//! demand curve given prior p_t = Ẽ_{t−1}π_t and attention γ_t are
//!
//! ```text
//! AS_t: π = κ/(1 − βγ_t)·x + (u_t + β(1 − γ_t)p_t)/(1 − βγ_t)
//! AD_t: π = −1/(φ_π − γ_t)·x + (1 − γ_t)p_t/(φ_π − γ_t)
//! ```
//!
//! and the prior moves as p_{t+1} = p_t + γ_t(π_t − p_t). The example is stated
//! in the units of its inputs (threshold 4 against a shock of 10), not
//! quarterly percentage points.

use serde::{Deserialize, Serialize};

use crate::beliefs::RegimeId;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AsAdParams {
    pub beta: f64,
    pub kappa: f64,
    pub phi_pi: f64,
    pub gamma_low: f64,
    pub gamma_high: f64,
    pub threshold: f64,
    /// Cost-push shock in periods 0..=3.
    pub u: [f64; 4],
}

impl Default for AsAdParams {
    fn default() -> Self {
        Self::textbook()
    }
}

impl AsAdParams {
    /// β = 0.99, κ = 0.6, φ_π = 1.05, γ = (0.2, 0.4), threshold 4, u₁ = u₂ = 10.
    pub fn textbook() -> Self {
        Self {
            beta: 0.99,
            kappa: 0.6,
            phi_pi: 1.05,
            gamma_low: 0.2,
            gamma_high: 0.4,
            threshold: 4.0,
            u: [0.0, 10.0, 10.0, 0.0],
        }
    }

    /// Same economy with attention stuck at the low level.
    pub fn without_switch(&self) -> Self {
        Self {
            gamma_high: self.gamma_low,
            ..*self
        }
    }
}

/// π = slope·x + intercept
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    fn intersect(&self, other: &Line) -> (f64, f64) {
        let x = (other.intercept - self.intercept) / (self.slope - other.slope);
        (self.slope * x + self.intercept, x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsAdCurves {
    pub period: usize,
    pub regime: RegimeId,
    pub prior_pi: f64,
    pub as_curve: Line,
    pub ad_curve: Line,
    /// Curves at the new prior but the previous period's attention (the
    /// intermediate shift before the rotation); present only when attention
    /// changed between periods.
    pub as_shifted: Option<Line>,
    pub ad_shifted: Option<Line>,
    /// (π, x)
    pub equilibrium: (f64, f64),
}

fn as_line(p: &AsAdParams, slope_gamma: f64, gamma: f64, u: f64, prior: f64) -> Line {
    Line {
        slope: p.kappa / (1.0 - p.beta * slope_gamma),
        intercept: (u + p.beta * (1.0 - gamma) * prior) / (1.0 - p.beta * gamma),
    }
}

fn ad_line(p: &AsAdParams, slope_gamma: f64, gamma: f64, prior: f64) -> Line {
    Line {
        slope: -1.0 / (p.phi_pi - slope_gamma),
        intercept: (1.0 - gamma) * prior / (p.phi_pi - gamma),
    }
}

pub fn asad_example(p: &AsAdParams) -> Result<Vec<AsAdCurves>> {
    for gamma in [p.gamma_low, p.gamma_high] {
        if p.phi_pi <= gamma {
            return Err(Error::DegenerateAdSlope {
                phi_pi: p.phi_pi,
                gamma,
            });
        }
    }
    if !(p.beta > 0.0 && p.beta < 1.0) || p.kappa <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta {} / kappa {} out of range",
            p.beta, p.kappa
        )));
    }
    let mut out = Vec::with_capacity(4);
    let (mut prior, mut pi_lag) = (0.0, 0.0);
    let mut prev_gamma = p.gamma_low;
    for (t, &u) in p.u.iter().enumerate() {
        let regime = if pi_lag <= p.threshold {
            RegimeId::Low
        } else {
            RegimeId::High
        };
        let gamma = if regime.is_high() { p.gamma_high } else { p.gamma_low };
        let as_curve = as_line(p, gamma, gamma, u, prior);
        let ad_curve = ad_line(p, gamma, gamma, prior);
        let switched = gamma != prev_gamma;
        let equilibrium = as_curve.intersect(&ad_curve);
        out.push(AsAdCurves {
            period: t,
            regime,
            prior_pi: prior,
            as_curve,
            ad_curve,
            as_shifted: switched.then(|| as_line(p, prev_gamma, gamma, u, prior)),
            ad_shifted: switched.then(|| ad_line(p, prev_gamma, gamma, prior)),
            equilibrium,
        });
        prior += gamma * (equilibrium.0 - prior);
        pi_lag = equilibrium.0;
        prev_gamma = gamma;
    }
    Ok(out)
}

/// π₂/π₁ − 1
pub fn inflation_growth_1_to_2(curves: &[AsAdCurves]) -> f64 {
    curves[2].equilibrium.0 / curves[1].equilibrium.0 - 1.0
}

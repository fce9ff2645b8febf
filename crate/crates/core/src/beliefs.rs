//! Attention regimes and the expectation-updating laws of motion.
//!
//! Inflation expectations follow a steady-state Kalman update whose gain
//! (attention) depends on whether lagged inflation sits above the attention
//! threshold. Output-gap expectations use a single gain in both regimes unless
//! an explicit high-regime override is configured.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which inflation rate decides the regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdVariable {
    /// π_{t-1}; the regime is predetermined within the period.
    #[default]
    Lagged,
    /// π_t; the period problem is solved for a regime-consistent equilibrium.
    Current,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttentionSpec {
    /// Attention threshold in quarterly pp. `f64::INFINITY` disables the high regime.
    pub threshold: f64,
    pub gamma_pi_low: f64,
    pub gamma_pi_high: f64,
    pub gamma_x: f64,
    /// Output-gap attention in the high regime, when it differs from `gamma_x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_x_high: Option<f64>,
    #[serde(default)]
    pub threshold_variable: ThresholdVariable,
}

impl Default for AttentionSpec {
    fn default() -> Self {
        Self::baseline()
    }
}

impl AttentionSpec {
    pub fn new(threshold: f64, gamma_pi_low: f64, gamma_pi_high: f64, gamma_x: f64) -> Result<Self> {
        let spec = Self {
            threshold,
            gamma_pi_low,
            gamma_pi_high,
            gamma_x,
            gamma_x_high: None,
            threshold_variable: ThresholdVariable::Lagged,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Estimated attention levels with the 4% annualized threshold and γ_x = 0.25.
    pub fn baseline() -> Self {
        Self {
            threshold: 1.0,
            gamma_pi_low: 0.18,
            gamma_pi_high: 0.36,
            gamma_x: 0.25,
            gamma_x_high: None,
            threshold_variable: ThresholdVariable::Lagged,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")))
            }
        };
        unit("gamma_pi_low", self.gamma_pi_low)?;
        unit("gamma_pi_high", self.gamma_pi_high)?;
        unit("gamma_x", self.gamma_x)?;
        if let Some(g) = self.gamma_x_high {
            unit("gamma_x_high", g)?;
        }
        if self.threshold.is_nan() || self.threshold == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter(format!(
                "threshold = {} must be finite or +inf",
                self.threshold
            )));
        }
        Ok(())
    }

    pub fn gamma_pi(&self, regime: RegimeId) -> f64 {
        match regime {
            RegimeId::Low => self.gamma_pi_low,
            RegimeId::High => self.gamma_pi_high,
        }
    }

    pub fn gamma_x(&self, regime: RegimeId) -> f64 {
        match (regime, self.gamma_x_high) {
            (RegimeId::High, Some(g)) => g,
            _ => self.gamma_x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeId {
    Low,
    High,
}

impl RegimeId {
    pub fn is_high(self) -> bool {
        self == RegimeId::High
    }
}

impl std::fmt::Display for RegimeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeId::Low => "low",
            RegimeId::High => "high",
        })
    }
}

/// Prior means carried into the period: Ẽ_{t-1}π_t and Ẽ_{t-1}x̂_t.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BeliefState {
    pub prior_pi: f64,
    pub prior_x: f64,
}

/// The agent's perceived AR(1) law for inflation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerceivedLawParams {
    pub rho_pi: f64,
    pub pi_bar_longrun: f64,
}

impl PerceivedLawParams {
    /// Random-walk beliefs used inside the model.
    pub const RANDOM_WALK: Self = Self {
        rho_pi: 1.0,
        pi_bar_longrun: 0.0,
    };
}

impl Default for PerceivedLawParams {
    fn default() -> Self {
        Self::RANDOM_WALK
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttentionProblemInputs {
    /// 1/λ, the marginal cost of mutual information.
    pub info_cost: f64,
    /// χ, the scale of the quadratic forecast loss.
    pub stakes: f64,
    pub rho_pi: f64,
    /// Prior variance σ²_π.
    pub prior_var: f64,
}

/// Low at or below the threshold, High strictly above it.
pub fn classify_regime(pi_lagged: f64, spec: &AttentionSpec) -> RegimeId {
    if pi_lagged <= spec.threshold {
        RegimeId::Low
    } else {
        RegimeId::High
    }
}

/// Ẽ_tπ_{t+1} = (1−ρ)π̲ + ρẼ_{t−1}π_t + ργ(π_t − Ẽ_{t−1}π_t).
pub fn update_inflation_expectation(
    prior: &BeliefState,
    pi_current: f64,
    regime: RegimeId,
    spec: &AttentionSpec,
    law: &PerceivedLawParams,
) -> f64 {
    update_with_gain(prior.prior_pi, pi_current, spec.gamma_pi(regime), law)
}

pub(crate) fn update_with_gain(prior: f64, current: f64, gain: f64, law: &PerceivedLawParams) -> f64 {
    (1.0 - law.rho_pi) * law.pi_bar_longrun + law.rho_pi * prior + law.rho_pi * gain * (current - prior)
}

pub fn update_output_gap_expectation(prior: &BeliefState, x_current: f64, spec: &AttentionSpec) -> f64 {
    prior.prior_x + spec.gamma_x * (x_current - prior.prior_x)
}

/// Optimal attention from the rational-inattention problem with quadratic
/// loss and mutual-information cost: max{0, 1 − (1/λ)/(2χρ²σ²)}.
pub fn optimal_attention(inputs: &AttentionProblemInputs) -> Result<f64> {
    let AttentionProblemInputs {
        info_cost,
        stakes,
        rho_pi,
        prior_var,
    } = *inputs;
    if !(info_cost > 0.0 && stakes > 0.0 && prior_var > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "info_cost, stakes and prior_var must be positive (got {info_cost}, {stakes}, {prior_var})"
        )));
    }
    if !(0.0..=1.0).contains(&rho_pi) {
        return Err(Error::InvalidParameter(format!("rho_pi = {rho_pi} outside [0, 1]")));
    }
    if rho_pi == 0.0 {
        return Err(Error::DegeneratePersistence);
    }
    Ok((1.0 - info_cost / (2.0 * stakes * rho_pi * rho_pi * prior_var)).max(0.0))
}

/// Signal noise variance σ²_ε that makes γ = σ²_π / (σ²_π + σ²_ε).
pub fn noise_variance_for_attention(gamma: f64, prior_var: f64) -> Result<f64> {
    if !(prior_var > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "prior_var = {prior_var} must be positive"
        )));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} outside [0, 1]")));
    }
    if gamma == 0.0 {
        return Err(Error::InfiniteNoise);
    }
    Ok(prior_var * (1.0 - gamma) / gamma)
}

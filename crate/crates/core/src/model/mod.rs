//! Three-equation New Keynesian model under threshold attention.
//!
//! The per-period equilibrium is a small linear system once the expectation
//! laws of motion are substituted in: the Phillips curve, the Euler equation and
//! the active policy rule pin down (π_t, x̂_t, ĩ_t) given the predetermined
//! state. The rational-expectations benchmark is solved separately as a set of
//! linear decision rules in [`fire`].

mod fire;
mod period;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::beliefs::{AttentionSpec, BeliefState, RegimeId};
use crate::error::{Error, Result};

pub use fire::{solve_fire_policy, FirePolicy, LagVariable};
pub use period::{
    reduced_form_slope, solve_period, solve_period_pinned, solve_period_subjective, solve_period_targeting,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub beta: f64,
    pub kappa: f64,
    /// Real-rate elasticity of output.
    pub varphi: f64,
    pub rho_i: f64,
    pub phi_pi: f64,
    pub phi_x: f64,
    pub rho_u: f64,
    pub sigma_u: f64,
    pub rho_r: f64,
    pub sigma_r: f64,
    /// Output-gap weight Λ in the quadratic loss.
    pub lambda_weight: f64,
    pub attention: AttentionSpec,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::baseline()
    }
}

impl ModelParams {
    /// Quarterly calibration: 1% annualized natural rate, κ = 0.057, Taylor
    /// coefficients (0.7, 2, 0.125), Λ = 0.007, σ = 0.5, ρ = 0.8.
    pub fn baseline() -> Self {
        Self {
            beta: 1.0 / (1.0 + 0.01 / 4.0),
            kappa: 0.057,
            varphi: 1.0,
            rho_i: 0.7,
            phi_pi: 2.0,
            phi_x: 0.125,
            rho_u: 0.8,
            sigma_u: 0.5,
            rho_r: 0.8,
            sigma_r: 0.5,
            lambda_weight: 0.007,
            attention: AttentionSpec::baseline(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidParameter(m));
        let all = [
            self.beta,
            self.kappa,
            self.varphi,
            self.rho_i,
            self.phi_pi,
            self.phi_x,
            self.rho_u,
            self.sigma_u,
            self.rho_r,
            self.sigma_r,
            self.lambda_weight,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return fail("model parameters must be finite".into());
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return fail(format!("beta = {} outside (0, 1)", self.beta));
        }
        if self.kappa <= 0.0 {
            return fail(format!("kappa = {} must be positive", self.kappa));
        }
        if self.varphi <= 0.0 {
            return fail(format!("varphi = {} must be positive", self.varphi));
        }
        if !(0.0..1.0).contains(&self.rho_i) {
            return fail(format!("rho_i = {} outside [0, 1)", self.rho_i));
        }
        if !(0.0..1.0).contains(&self.rho_u) || !(0.0..1.0).contains(&self.rho_r) {
            return fail(format!(
                "shock persistence ({}, {}) outside [0, 1)",
                self.rho_u, self.rho_r
            ));
        }
        if self.sigma_u < 0.0 || self.sigma_r < 0.0 {
            return fail("shock standard deviations must be non-negative".into());
        }
        if self.lambda_weight < 0.0 {
            return fail(format!("lambda_weight = {} must be non-negative", self.lambda_weight));
        }
        self.attention.validate()
    }

    /// Smoothing coefficient actually used by `rule`.
    pub fn smoothing_for(&self, rule: PolicyRule) -> f64 {
        match rule {
            PolicyRule::TaylorSmoothing => self.rho_i,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyRule {
    TaylorSmoothing,
    TaylorNoSmoothing,
    OptimalCommitment,
    OptimalDiscretion,
    StrictTargeting,
}

impl PolicyRule {
    pub const ALL: [PolicyRule; 5] = [
        PolicyRule::TaylorSmoothing,
        PolicyRule::TaylorNoSmoothing,
        PolicyRule::OptimalCommitment,
        PolicyRule::OptimalDiscretion,
        PolicyRule::StrictTargeting,
    ];

    pub fn is_taylor(self) -> bool {
        matches!(self, PolicyRule::TaylorSmoothing | PolicyRule::TaylorNoSmoothing)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyRule::TaylorSmoothing => "taylor-smoothing",
            PolicyRule::TaylorNoSmoothing => "taylor-no-smoothing",
            PolicyRule::OptimalCommitment => "optimal-commitment",
            PolicyRule::OptimalDiscretion => "optimal-discretion",
            PolicyRule::StrictTargeting => "strict-targeting",
        }
    }
}

impl fmt::Display for PolicyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyRule::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown policy rule '{s}'")))
    }
}

/// How private agents form expectations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ExpectationMode {
    ThresholdAttention,
    FixedAttention { gamma_pi: f64 },
    Fire,
}

impl ExpectationMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ExpectationMode::FixedAttention { gamma_pi } if !(0.0..=1.0).contains(&gamma_pi) => Err(
                Error::InvalidParameter(format!("fixed attention {gamma_pi} outside [0, 1]")),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ExpectationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectationMode::ThresholdAttention => f.write_str("threshold"),
            ExpectationMode::FixedAttention { gamma_pi } => write!(f, "fixed:{gamma_pi}"),
            ExpectationMode::Fire => f.write_str("fire"),
        }
    }
}

impl FromStr for ExpectationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mode = match s {
            "threshold" => ExpectationMode::ThresholdAttention,
            "fire" => ExpectationMode::Fire,
            _ => {
                let g = s
                    .strip_prefix("fixed:")
                    .and_then(|g| g.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown expectation mode '{s}'")))?;
                ExpectationMode::FixedAttention { gamma_pi: g }
            }
        };
        mode.validate()?;
        Ok(mode)
    }
}

impl TryFrom<String> for ExpectationMode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ExpectationMode> for String {
    fn from(m: ExpectationMode) -> String {
        m.to_string()
    }
}

/// Predetermined state entering period t.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelState {
    pub beliefs: BeliefState,
    pub i_lag: f64,
    pub pi_lag: f64,
    pub x_lag: f64,
    /// Cost-push shock u_t.
    pub u: f64,
    /// Natural-rate deviation r*_t.
    pub rstar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodOutcome {
    pub pi: f64,
    pub x: f64,
    pub i: f64,
    pub regime: RegimeId,
    /// Ẽ_tπ_{t+1}
    pub e_pi_next: f64,
    /// Ẽ_tx̂_{t+1}
    pub e_x_next: f64,
    pub u: f64,
    pub rstar: f64,
    pub mp_shock: f64,
    /// ½(π² + Λx²)
    pub loss_contrib: f64,
}

/// AR(1) update of the two exogenous processes.
pub fn step_shocks(state: &ModelState, eps_u: f64, eps_r: f64, params: &ModelParams) -> (f64, f64) {
    (params.rho_u * state.u + eps_u, params.rho_r * state.rstar + eps_r)
}

/// Carries the period's outcome into next period's predetermined state.
/// Shocks are left unchanged until [`step_shocks`] is applied.
pub fn advance(state: &ModelState, outcome: &PeriodOutcome) -> ModelState {
    ModelState {
        beliefs: BeliefState {
            prior_pi: outcome.e_pi_next,
            prior_x: outcome.e_x_next,
        },
        i_lag: outcome.i,
        pi_lag: outcome.pi,
        x_lag: outcome.x,
        u: state.u,
        rstar: state.rstar,
    }
}

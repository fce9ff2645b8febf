use crate::error::Result;
use crate::model::{self, ExpectationMode, FirePolicy, ModelParams, ModelState, PeriodOutcome, PolicyRule};

/// One period solver for a (mode, rule) pair, with FIRE decision rules
/// solved once up front.
#[derive(Debug, Clone)]
pub(crate) enum Engine {
    Subjective(ExpectationMode),
    Fire(Box<FirePolicy>),
}

impl Engine {
    pub fn new(mode: &ExpectationMode, rule: PolicyRule, params: &ModelParams) -> Result<Self> {
        mode.validate()?;
        params.validate()?;
        Ok(match mode {
            ExpectationMode::Fire => Engine::Fire(Box::new(model::solve_fire_policy(rule, params)?)),
            m => Engine::Subjective(*m),
        })
    }

    pub fn step(&self, state: &ModelState, rule: PolicyRule, params: &ModelParams, mp: f64) -> Result<PeriodOutcome> {
        match self {
            Engine::Subjective(mode) => model::solve_period(state, rule, params, mode, mp),
            Engine::Fire(policy) => Ok(policy.outcome(state, params, mp)),
        }
    }
}

//! Interaction between a cost-push shock and an expansionary monetary shock.

use serde::Serialize;

use super::engine::Engine;
use super::irf::{run_path, scale_to_impact, ShockKind};
use crate::error::{Error, Result};
use crate::model::{ExpectationMode, ModelParams, PolicyRule};

pub const DEFAULT_IMPACT_EACH: f64 = 3.0;
pub const DEFAULT_HORIZON: usize = 40;

#[derive(Debug, Clone, Serialize)]
pub struct StateDependencyResult {
    pub mode: ExpectationMode,
    pub rule: PolicyRule,
    /// Innovations giving the requested isolated impact, model units.
    pub cost_push_innovation: f64,
    pub monetary_innovation: f64,
    /// Inflation paths, annualized pp.
    pub path_mp_only: Vec<f64>,
    pub path_cp_only: Vec<f64>,
    pub path_both: Vec<f64>,
    /// both − mp_only − cp_only
    pub interaction: Vec<f64>,
    /// max_t |interaction_t|, annualized pp.
    pub peak_interaction: f64,
    pub peak_period: usize,
}

pub fn state_dependency(
    mode: &ExpectationMode,
    rule: PolicyRule,
    params: &ModelParams,
    impact_each_annualized: f64,
    horizon: usize,
) -> Result<StateDependencyResult> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let engine = Engine::new(mode, rule, params)?;
    let target = crate::deannualize(impact_each_annualized);
    let cp = scale_to_impact(&engine, rule, params, ShockKind::CostPush, target)?;
    let mp = scale_to_impact(&engine, rule, params, ShockKind::Monetary, target)?;
    let path = |shocks: &[(ShockKind, f64)]| -> Result<Vec<f64>> {
        Ok(run_path(&engine, *mode, rule, params, shocks, horizon)?
            .pi
            .into_iter()
            .map(crate::annualize)
            .collect())
    };
    let path_cp_only = path(&[(ShockKind::CostPush, cp)])?;
    let path_mp_only = path(&[(ShockKind::Monetary, mp)])?;
    let path_both = path(&[(ShockKind::CostPush, cp), (ShockKind::Monetary, mp)])?;
    let interaction: Vec<f64> = (0..horizon)
        .map(|t| path_both[t] - path_mp_only[t] - path_cp_only[t])
        .collect();
    let (peak_period, peak_interaction) = interaction
        .iter()
        .map(|v| v.abs())
        .enumerate()
        .fold((0, 0.0), |best, (t, v)| if v > best.1 { (t, v) } else { best });
    Ok(StateDependencyResult {
        mode: *mode,
        rule,
        cost_push_innovation: cp,
        monetary_innovation: mp,
        path_mp_only,
        path_cp_only,
        path_both,
        interaction,
        peak_interaction,
        peak_period,
    })
}

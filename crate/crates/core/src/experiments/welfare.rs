//! Welfare, volatility and regime-frequency grid across modes and rules.

use rayon::prelude::*;
use serde::Serialize;

use super::simulate::{average_summaries, simulate_summary, Innovations, SimulationConfig, SimulationSummary};
use crate::error::{Error, Result};
use crate::model::{ExpectationMode, ModelParams, PolicyRule};

#[derive(Debug, Clone, Serialize)]
pub struct WelfareCell {
    pub mode: ExpectationMode,
    pub rule: PolicyRule,
    /// Averaged over seeds.
    pub summary: SimulationSummary,
    pub per_seed: Vec<SimulationSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WelfareGrid {
    pub cells: Vec<WelfareCell>,
    pub seeds: Vec<u64>,
}

impl WelfareGrid {
    pub fn cell(&self, mode: &ExpectationMode, rule: PolicyRule) -> Option<&WelfareCell> {
        self.cells.iter().find(|c| c.mode == *mode && c.rule == rule)
    }
}

/// Threshold attention, fixed attention at γ_π,L, and FIRE.
pub fn default_modes(params: &ModelParams) -> Vec<ExpectationMode> {
    vec![
        ExpectationMode::ThresholdAttention,
        ExpectationMode::FixedAttention {
            gamma_pi: params.attention.gamma_pi_low,
        },
        ExpectationMode::Fire,
    ]
}

/// Every (mode, rule) cell on the same innovation arrays; cells are returned
/// mode-major in the order given.
pub fn welfare_table(
    modes: &[ExpectationMode],
    rules: &[PolicyRule],
    params: &ModelParams,
    seeds: &[u64],
    cfg: &SimulationConfig,
) -> Result<WelfareGrid> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("welfare grid needs at least one seed".into()));
    }
    let innovations: Vec<Innovations> = seeds
        .par_iter()
        .map(|&s| Innovations::generate(s, cfg.total()))
        .collect();
    let jobs: Vec<(ExpectationMode, PolicyRule, usize)> = modes
        .iter()
        .flat_map(|m| {
            rules
                .iter()
                .flat_map(move |r| (0..seeds.len()).map(move |k| (*m, *r, k)))
        })
        .collect();
    let results = jobs
        .par_iter()
        .map(|(m, r, k)| simulate_summary(m, *r, params, &innovations[*k], cfg))
        .collect::<Result<Vec<_>>>()?;
    let cells = results
        .chunks(seeds.len())
        .zip(jobs.chunks(seeds.len()))
        .map(|(sums, job)| WelfareCell {
            mode: job[0].0,
            rule: job[0].1,
            summary: average_summaries(sums).expect("non-empty"),
            per_seed: sums.to_vec(),
        })
        .collect();
    Ok(WelfareGrid {
        cells,
        seeds: seeds.to_vec(),
    })
}

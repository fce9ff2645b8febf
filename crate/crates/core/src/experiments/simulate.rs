//! Stochastic simulations on common random numbers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::Engine;
use crate::beliefs::RegimeId;
use crate::error::{Error, Result};
use crate::model::{self, ExpectationMode, ModelParams, ModelState, PeriodOutcome, PolicyRule};
use crate::rng::{NormalStream, STREAM_COST_PUSH, STREAM_DEMAND};

pub const DEFAULT_PERIODS: usize = 10_000;
pub const DEFAULT_BURN_IN: usize = 500;
const EXPLOSIVE_BOUND: f64 = 1e10;

/// Standard-normal innovation arrays for one seed. Scaling by σ and the shock
/// switches happens at use, so the draws are identical across every mode,
/// rule and switch setting.
#[derive(Debug, Clone, PartialEq)]
pub struct Innovations {
    pub seed: u64,
    pub cost_push: Vec<f64>,
    pub demand: Vec<f64>,
}

impl Innovations {
    pub fn generate(seed: u64, len: usize) -> Self {
        Self {
            seed,
            cost_push: NormalStream::new(seed, STREAM_COST_PUSH).fill_standard_normal(len),
            demand: NormalStream::new(seed, STREAM_DEMAND).fill_standard_normal(len),
        }
    }

    pub fn len(&self) -> usize {
        self.cost_push.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cost_push.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockSwitch {
    #[default]
    Both,
    SupplyOnly,
    DemandOnly,
}

impl ShockSwitch {
    /// (cost-push multiplier, demand multiplier)
    pub fn multipliers(self) -> (f64, f64) {
        match self {
            ShockSwitch::Both => (1.0, 1.0),
            ShockSwitch::SupplyOnly => (1.0, 0.0),
            ShockSwitch::DemandOnly => (0.0, 1.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ShockSwitch::Both => "both",
            ShockSwitch::SupplyOnly => "supply-only",
            ShockSwitch::DemandOnly => "demand-only",
        }
    }
}

impl fmt::Display for ShockSwitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ShockSwitch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [ShockSwitch::Both, ShockSwitch::SupplyOnly, ShockSwitch::DemandOnly]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown shock switch '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub n_periods: usize,
    pub burn_in: usize,
    pub switch: ShockSwitch,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            n_periods: DEFAULT_PERIODS,
            burn_in: DEFAULT_BURN_IN,
            switch: ShockSwitch::Both,
        }
    }
}

impl SimulationConfig {
    pub fn total(&self) -> usize {
        self.n_periods + self.burn_in
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationSummary {
    /// −½·mean(π² + Λx²) over the kept periods, model units.
    pub welfare: f64,
    /// −½·Σ β^t (π_t² + Λx_t²) over the kept periods.
    pub welfare_discounted: f64,
    /// Annualized pp.
    pub sd_pi: f64,
    /// Annualized pp.
    pub mean_pi: f64,
    /// Share of kept periods in the high-attention regime (π_{t−1} above the threshold).
    pub freq_high: f64,
    pub seed: u64,
    pub n_periods: usize,
    pub burn_in: usize,
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    /// Every period including burn-in.
    pub path: Vec<PeriodOutcome>,
    pub summary: SimulationSummary,
}

struct Accumulator {
    n: usize,
    sum_pi: f64,
    sum_pi2: f64,
    loss: f64,
    loss_disc: f64,
    discount: f64,
    high: usize,
}

fn run(
    engine: &Engine,
    mode: &ExpectationMode,
    rule: PolicyRule,
    params: &ModelParams,
    innov: &Innovations,
    cfg: &SimulationConfig,
    mut keep: Option<&mut Vec<PeriodOutcome>>,
) -> Result<SimulationSummary> {
    if innov.len() < cfg.total() {
        return Err(Error::InvalidParameter(format!(
            "{} innovations for {} periods",
            innov.len(),
            cfg.total()
        )));
    }
    if cfg.n_periods == 0 {
        return Err(Error::InvalidParameter("n_periods must be positive".into()));
    }
    let (mu, mr) = cfg.switch.multipliers();
    let (su, sr) = (params.sigma_u * mu, params.sigma_r * mr);
    let mut state = ModelState::default();
    let mut acc = Accumulator {
        n: 0,
        sum_pi: 0.0,
        sum_pi2: 0.0,
        loss: 0.0,
        loss_disc: 0.0,
        discount: 1.0,
        high: 0,
    };
    for t in 0..cfg.total() {
        let (u, r) = model::step_shocks(&state, su * innov.cost_push[t], sr * innov.demand[t], params);
        state.u = u;
        state.rstar = r;
        let o = engine.step(&state, rule, params, 0.0)?;
        if !(o.pi.abs() < EXPLOSIVE_BOUND && o.x.abs() < EXPLOSIVE_BOUND && o.i.abs() < EXPLOSIVE_BOUND) {
            return Err(Error::ExplosivePath {
                rule: rule.to_string(),
                mode: mode.to_string(),
                period: t,
            });
        }
        if t >= cfg.burn_in {
            acc.n += 1;
            acc.sum_pi += o.pi;
            acc.sum_pi2 += o.pi * o.pi;
            acc.loss += o.loss_contrib;
            acc.loss_disc += acc.discount * o.loss_contrib;
            acc.discount *= params.beta;
            if o.regime == RegimeId::High {
                acc.high += 1;
            }
        }
        if let Some(path) = keep.as_deref_mut() {
            path.push(o);
        }
        state = model::advance(&state, &o);
    }
    let n = acc.n as f64;
    let mean = acc.sum_pi / n;
    let var = if acc.n > 1 {
        ((acc.sum_pi2 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SimulationSummary {
        welfare: -acc.loss / n,
        welfare_discounted: -acc.loss_disc,
        sd_pi: crate::annualize(var.sqrt()),
        mean_pi: crate::annualize(mean),
        freq_high: acc.high as f64 / n,
        seed: innov.seed,
        n_periods: cfg.n_periods,
        burn_in: cfg.burn_in,
    })
}

/// Simulates one path on pre-drawn innovations.
pub fn simulate_with(
    mode: &ExpectationMode,
    rule: PolicyRule,
    params: &ModelParams,
    innov: &Innovations,
    cfg: &SimulationConfig,
) -> Result<SimulationRun> {
    let engine = Engine::new(mode, rule, params)?;
    let mut path = Vec::with_capacity(cfg.total());
    let summary = run(&engine, mode, rule, params, innov, cfg, Some(&mut path))?;
    Ok(SimulationRun { path, summary })
}

/// Simulates one path with innovations drawn from `seed`.
pub fn simulate(
    mode: &ExpectationMode,
    rule: PolicyRule,
    params: &ModelParams,
    cfg: &SimulationConfig,
    seed: u64,
) -> Result<SimulationRun> {
    simulate_with(mode, rule, params, &Innovations::generate(seed, cfg.total()), cfg)
}

/// Summary only, without keeping the path.
pub fn simulate_summary(
    mode: &ExpectationMode,
    rule: PolicyRule,
    params: &ModelParams,
    innov: &Innovations,
    cfg: &SimulationConfig,
) -> Result<SimulationSummary> {
    let engine = Engine::new(mode, rule, params)?;
    run(&engine, mode, rule, params, innov, cfg, None)
}

/// Mean of per-seed summaries; `seed` is the first seed.
pub fn average_summaries(s: &[SimulationSummary]) -> Option<SimulationSummary> {
    let first = *s.first()?;
    let n = s.len() as f64;
    let avg = |f: fn(&SimulationSummary) -> f64| s.iter().map(f).sum::<f64>() / n;
    Some(SimulationSummary {
        welfare: avg(|v| v.welfare),
        welfare_discounted: avg(|v| v.welfare_discounted),
        sd_pi: avg(|v| v.sd_pi),
        mean_pi: avg(|v| v.mean_pi),
        freq_high: avg(|v| v.freq_high),
        ..first
    })
}

/// Average share of high-regime periods across seeds at σ_u = σ_r = `sigma`.
pub fn mean_freq_high(
    params: &ModelParams,
    rule: PolicyRule,
    sigma: f64,
    innovations: &[Innovations],
    cfg: &SimulationConfig,
) -> Result<f64> {
    let p = ModelParams {
        sigma_u: sigma,
        sigma_r: sigma,
        ..*params
    };
    let engine = Engine::new(&ExpectationMode::ThresholdAttention, rule, &p)?;
    let freqs = innovations
        .par_iter()
        .map(|inn| run(&engine, &ExpectationMode::ThresholdAttention, rule, &p, inn, cfg, None).map(|s| s.freq_high))
        .collect::<Result<Vec<_>>>()?;
    Ok(freqs.iter().sum::<f64>() / freqs.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub sigma: f64,
    pub freq_high: f64,
    pub target: f64,
    pub iterations: usize,
    pub seeds: Vec<u64>,
    pub bracket: (f64, f64),
}

pub const CALIBRATION_BRACKET: (f64, f64) = (1e-4, 10.0);
pub const CALIBRATION_TOL: f64 = 0.005;
pub const MIN_CALIBRATION_SEEDS: usize = 5;

/// Bisection on the common shock volatility σ_u = σ_r so that the
/// multi-seed average of the high-regime share hits `target`.
pub fn calibrate_shock_volatility(
    target: f64,
    params: &ModelParams,
    rule: PolicyRule,
    seeds: &[u64],
    cfg: &SimulationConfig,
) -> Result<CalibrationResult> {
    if !(target > 0.0 && target < 1.0) && target != 0.0 {
        return Err(Error::InvalidParameter(format!("target {target} outside [0, 1)")));
    }
    if seeds.len() < MIN_CALIBRATION_SEEDS {
        return Err(Error::InvalidParameter(format!(
            "calibration needs at least {MIN_CALIBRATION_SEEDS} seeds, got {}",
            seeds.len()
        )));
    }
    let innovations: Vec<Innovations> = seeds.iter().map(|&s| Innovations::generate(s, cfg.total())).collect();
    let f = |sigma: f64| mean_freq_high(params, rule, sigma, &innovations, cfg);
    let (mut lo, mut hi) = CALIBRATION_BRACKET;
    let mut f_lo = f(lo)?;
    let result = |sigma, freq, iterations, bracket| CalibrationResult {
        sigma,
        freq_high: freq,
        target,
        iterations,
        seeds: seeds.to_vec(),
        bracket,
    };
    if f_lo >= target {
        return Ok(result(lo, f_lo, 0, (lo, hi)));
    }
    let mut f_hi = f(hi)?;
    if f_hi < target {
        hi *= 10.0;
        f_hi = f(hi)?;
        if f_hi < target {
            return Err(Error::Bisection(format!(
                "high-regime share {f_hi} at sigma {hi} still below target {target}"
            )));
        }
    }
    let bracket = (lo, hi);
    for it in 1..=200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if (fm - target).abs() < CALIBRATION_TOL && hi - lo < 1e-3 {
            return Ok(result(mid, fm, it, bracket));
        }
        if fm < f_lo || fm > f_hi {
            return Err(Error::Bisection(format!(
                "high-regime share is not monotone in sigma near {mid} ({f_lo}, {fm}, {f_hi})"
            )));
        }
        if fm < target {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid)?;
    if (fm - target).abs() < CALIBRATION_TOL {
        return Ok(result(mid, fm, 200, bracket));
    }
    Err(Error::Bisection(format!(
        "bisection converged to sigma {mid} with share {fm}, target {target}"
    )))
}

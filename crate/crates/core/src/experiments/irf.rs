//! Deterministic impulse responses and forecast-error paths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::engine::Engine;
use crate::beliefs::RegimeId;
use crate::error::{Error, Result};
use crate::model::{self, ExpectationMode, ModelParams, ModelState, PeriodOutcome, PolicyRule};

/// Default impact of the "large" shock, annualized pp (just above 4%).
pub const LARGE_SHOCK_IMPACT: f64 = 5.0;
/// Default impact of the "small" shock, annualized pp.
pub const SMALL_SHOCK_IMPACT: f64 = 3.0;
const IMPACT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockKind {
    /// AR(1) innovation to u_t.
    CostPush,
    /// AR(1) innovation to r*_t.
    Demand,
    /// One-period additive shift of the Taylor rule.
    Monetary,
}

impl ShockKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ShockKind::CostPush => "cost-push",
            ShockKind::Demand => "demand",
            ShockKind::Monetary => "monetary",
        }
    }

    pub fn persistence(self, params: &ModelParams) -> f64 {
        match self {
            ShockKind::CostPush => params.rho_u,
            ShockKind::Demand => params.rho_r,
            ShockKind::Monetary => 0.0,
        }
    }
}

impl fmt::Display for ShockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ShockKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [ShockKind::CostPush, ShockKind::Demand, ShockKind::Monetary]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown shock '{s}'")))
    }
}

/// Size of the t = 0 shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockSize {
    /// Innovation in model units (quarterly pp).
    Innovation(f64),
    /// Period-0 inflation target, annualized pp.
    ImpactAnnualized(f64),
}

/// A single (shock, innovation) pair at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockSpec {
    pub shock: ShockKind,
    pub innovation: f64,
    pub persistence: f64,
    /// Realized period-0 inflation, annualized pp.
    pub impact_pi_annualized: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrfResult {
    pub mode: ExpectationMode,
    pub rule: PolicyRule,
    pub shocks: Vec<ShockSpec>,
    pub horizon: usize,
    /// Quarterly pp.
    pub pi: Vec<f64>,
    pub x: Vec<f64>,
    /// Quarterly pp.
    pub i: Vec<f64>,
    /// Ẽ_{t−1}π_t, quarterly pp.
    pub prior_pi: Vec<f64>,
    /// Ẽ_tπ_{t+1}, quarterly pp.
    pub e_pi_next: Vec<f64>,
    pub regime: Vec<RegimeId>,
}

impl IrfResult {
    fn with_capacity(mode: ExpectationMode, rule: PolicyRule, horizon: usize) -> Self {
        Self {
            mode,
            rule,
            shocks: Vec::new(),
            horizon,
            pi: Vec::with_capacity(horizon),
            x: Vec::with_capacity(horizon),
            i: Vec::with_capacity(horizon),
            prior_pi: Vec::with_capacity(horizon),
            e_pi_next: Vec::with_capacity(horizon),
            regime: Vec::with_capacity(horizon),
        }
    }

    fn push(&mut self, state: &ModelState, o: &PeriodOutcome) {
        self.pi.push(o.pi);
        self.x.push(o.x);
        self.i.push(o.i);
        self.prior_pi.push(state.beliefs.prior_pi);
        self.e_pi_next.push(o.e_pi_next);
        self.regime.push(o.regime);
    }
}

/// Path from steady state with the given t = 0 innovations (and nothing after).
pub(crate) fn run_path(
    engine: &Engine,
    mode: ExpectationMode,
    rule: PolicyRule,
    params: &ModelParams,
    shocks: &[(ShockKind, f64)],
    horizon: usize,
) -> Result<IrfResult> {
    let mut out = IrfResult::with_capacity(mode, rule, horizon);
    let mut state = ModelState::default();
    for t in 0..horizon {
        let (mut eps_u, mut eps_r, mut mp) = (0.0, 0.0, 0.0);
        if t == 0 {
            for &(k, e) in shocks {
                match k {
                    ShockKind::CostPush => eps_u += e,
                    ShockKind::Demand => eps_r += e,
                    ShockKind::Monetary => mp += e,
                }
            }
        }
        let (u, r) = model::step_shocks(&state, eps_u, eps_r, params);
        state.u = u;
        state.rstar = r;
        let o = engine.step(&state, rule, params, mp)?;
        out.push(&state, &o);
        state = model::advance(&state, &o);
    }
    Ok(out)
}

fn impact(engine: &Engine, rule: PolicyRule, params: &ModelParams, shock: ShockKind, eps: f64) -> Result<f64> {
    let (mut eps_u, mut eps_r, mut mp) = (0.0, 0.0, 0.0);
    match shock {
        ShockKind::CostPush => eps_u = eps,
        ShockKind::Demand => eps_r = eps,
        ShockKind::Monetary => mp = eps,
    }
    let state = ModelState {
        u: eps_u,
        rstar: eps_r,
        ..Default::default()
    };
    Ok(engine.step(&state, rule, params, mp)?.pi)
}

/// Innovation whose period-0 inflation equals `target` (quarterly pp). Impact
/// is linear within a regime, so the first guess is exact unless the period-0
/// regime depends on the outcome; bisection covers that case.
pub(crate) fn scale_to_impact(
    engine: &Engine,
    rule: PolicyRule,
    params: &ModelParams,
    shock: ShockKind,
    target: f64,
) -> Result<f64> {
    if target == 0.0 {
        return Ok(0.0);
    }
    let unit = impact(engine, rule, params, shock, 1.0)?;
    if !(unit.abs() > 1e-14) {
        return Err(Error::Bisection(format!(
            "{shock} shock has no effect on impact inflation under {rule}"
        )));
    }
    let guess = target / unit;
    let f = |e: f64| impact(engine, rule, params, shock, e).map(|p| p - target);
    if f(guess)?.abs() <= IMPACT_TOL {
        return Ok(guess);
    }
    // f is monotone along the ray through `guess` with f(0) = −target.
    let (mut lo, mut hi) = (0.0, guess);
    let sign = target.signum();
    let mut expansions = 0;
    while sign * f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::Bisection(format!(
                "could not bracket impact {target} for {shock} shock under {rule}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let v = f(mid)?;
        if v.abs() <= IMPACT_TOL {
            return Ok(mid);
        }
        if sign * v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Bisection(format!(
        "no {shock} innovation gives impact inflation {target} under {rule}: impact jumps from {} to {} near innovation {lo}",
        f(lo)? + target,
        f(hi)? + target
    )))
}

/// Impulse response to a single t = 0 shock.
pub fn impulse_response(
    mode: &ExpectationMode,
    rule: PolicyRule,
    shock: ShockKind,
    size: ShockSize,
    horizon: usize,
    params: &ModelParams,
) -> Result<IrfResult> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let engine = Engine::new(mode, rule, params)?;
    let innovation = match size {
        ShockSize::Innovation(e) => e,
        ShockSize::ImpactAnnualized(a) => scale_to_impact(&engine, rule, params, shock, crate::deannualize(a))?,
    };
    let mut irf = run_path(&engine, *mode, rule, params, &[(shock, innovation)], horizon)?;
    irf.shocks.push(ShockSpec {
        shock,
        innovation,
        persistence: shock.persistence(params),
        impact_pi_annualized: crate::annualize(irf.pi[0]),
    });
    Ok(irf)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastErrors {
    pub pi: Vec<f64>,
    /// Ẽ_{t−1}π_t
    pub expected: Vec<f64>,
    /// π_t − Ẽ_{t−1}π_t
    pub errors: Vec<f64>,
    /// Periods t where sign(e_t) differs from the previous non-zero error.
    pub sign_changes: Vec<usize>,
}

pub fn forecast_error_paths(irf: &IrfResult) -> ForecastErrors {
    let errors: Vec<f64> = irf.pi.iter().zip(&irf.prior_pi).map(|(p, e)| p - e).collect();
    let mut sign_changes = Vec::new();
    let mut last = 0.0f64;
    for (t, e) in errors.iter().enumerate() {
        if *e == 0.0 {
            continue;
        }
        if last != 0.0 && e.signum() != last.signum() {
            sign_changes.push(t);
        }
        last = *e;
    }
    ForecastErrors {
        pi: irf.pi.clone(),
        expected: irf.prior_pi.clone(),
        errors,
        sign_changes,
    }
}

/// First period at which |π_t| falls to half its impact value.
pub fn half_life(pi: &[f64]) -> Option<usize> {
    let half = 0.5 * pi.first()?.abs();
    pi.iter().position(|p| p.abs() <= half)
}

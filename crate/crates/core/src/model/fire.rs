//! Full-information rational expectations benchmark.
//!
//! Decision rules are linear in the minimal state s = (lag, u, r*, mp), where
//! `lag` is ĩ_{t−1} under the smoothed Taylor rule, x̂_{t−1} under commitment,
//! and absent otherwise. They are found by time iteration: given tomorrow's
//! rules P, rational expectations E_t y_{t+1} = P·E_t s_{t+1} are affine in
//! today's unknowns, so today's rules follow from the same contemporaneous
//! solver used for subjective expectations. Iterating to a fixed point selects
//! the stable solution when one exists.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::beliefs::classify_regime;
use crate::error::{Error, Result};
use crate::rng::NormalStream;

use super::period::{solve_contemporaneous, Affine, Exogenous};
use super::{ModelParams, ModelState, PeriodOutcome, PolicyRule};

const MAX_ITER: usize = 10_000;
const STEP_TOL: f64 = 1e-13;
const RESIDUAL_TOL: f64 = 1e-10;
const RESIDUAL_STATES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LagVariable {
    None,
    Interest,
    OutputGap,
}

impl LagVariable {
    fn for_rule(rule: PolicyRule) -> Self {
        match rule {
            PolicyRule::TaylorSmoothing => LagVariable::Interest,
            PolicyRule::OptimalCommitment => LagVariable::OutputGap,
            _ => LagVariable::None,
        }
    }

    /// Index of the endogenous variable (π, x̂, ĩ) that becomes tomorrow's lag.
    fn source(self) -> Option<usize> {
        match self {
            LagVariable::None => None,
            LagVariable::Interest => Some(2),
            LagVariable::OutputGap => Some(1),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FirePolicy {
    pub rule: PolicyRule,
    pub lag: LagVariable,
    /// Rows (π, x̂, ĩ), columns (lag, u, r*, mp).
    pub coefficients: [[f64; 4]; 3],
    pub residual_norm: f64,
    pub iterations: usize,
    rho_u: f64,
    rho_r: f64,
}

impl FirePolicy {
    fn expectation(
        coeffs: &[[f64; 4]; 3],
        row: usize,
        lag: LagVariable,
        rho_u: f64,
        rho_r: f64,
        s: &[f64; 4],
    ) -> Affine {
        let mut a = [0.0; 3];
        if let Some(k) = lag.source() {
            a[k] = coeffs[row][0];
        }
        Affine {
            a,
            c: coeffs[row][1] * rho_u * s[1] + coeffs[row][2] * rho_r * s[2],
        }
    }

    fn exogenous(lag: LagVariable, s: &[f64; 4]) -> Exogenous {
        Exogenous {
            i_lag: if lag == LagVariable::Interest { s[0] } else { 0.0 },
            x_lag: if lag == LagVariable::OutputGap { s[0] } else { 0.0 },
            u: s[1],
            rstar: s[2],
            mp: s[3],
        }
    }

    pub fn state_vector(&self, state: &ModelState, mp: f64) -> [f64; 4] {
        let lag = match self.lag {
            LagVariable::None => 0.0,
            LagVariable::Interest => state.i_lag,
            LagVariable::OutputGap => state.x_lag,
        };
        [lag, state.u, state.rstar, mp]
    }

    /// (π, x̂, ĩ) at state vector `s`.
    pub fn apply(&self, s: &[f64; 4]) -> [f64; 3] {
        let mut v = [0.0; 3];
        for (row, out) in v.iter_mut().enumerate() {
            *out = (0..4).map(|j| self.coefficients[row][j] * s[j]).sum();
        }
        v
    }

    /// Rational expectations (E_tπ_{t+1}, E_tx̂_{t+1}) given today's outcome.
    pub fn expectations(&self, s: &[f64; 4], v: &[f64; 3]) -> (f64, f64) {
        let e_pi = Self::expectation(&self.coefficients, 0, self.lag, self.rho_u, self.rho_r, s);
        let e_x = Self::expectation(&self.coefficients, 1, self.lag, self.rho_u, self.rho_r, s);
        (e_pi.eval(v), e_x.eval(v))
    }

    /// Residuals of (Phillips curve, Euler equation, policy rule) at `s`.
    pub fn residuals(&self, params: &ModelParams, s: &[f64; 4]) -> [f64; 3] {
        let v = self.apply(s);
        let (e_pi, e_x) = self.expectations(s, &v);
        let [pi, x, i] = v;
        let nkpc = pi - params.beta * e_pi - params.kappa * x - s[1];
        let euler = x - e_x + params.varphi * (i - e_pi - s[2]);
        let w = params.lambda_weight / params.kappa;
        let rule = match self.rule {
            PolicyRule::TaylorSmoothing | PolicyRule::TaylorNoSmoothing => {
                let rho = params.smoothing_for(self.rule);
                let i_lag = if self.lag == LagVariable::Interest { s[0] } else { 0.0 };
                i - rho * i_lag - (1.0 - rho) * (params.phi_pi * pi + params.phi_x * x) - s[3]
            }
            PolicyRule::OptimalCommitment => pi + w * (x - s[0]),
            PolicyRule::OptimalDiscretion => pi + w * x,
            PolicyRule::StrictTargeting => pi,
        };
        [nkpc, euler, rule]
    }

    pub fn outcome(&self, state: &ModelState, params: &ModelParams, mp: f64) -> PeriodOutcome {
        let s = self.state_vector(state, mp);
        let v = self.apply(&s);
        let (e_pi_next, e_x_next) = self.expectations(&s, &v);
        PeriodOutcome {
            pi: v[0],
            x: v[1],
            i: v[2],
            regime: classify_regime(state.pi_lag, &params.attention),
            e_pi_next,
            e_x_next,
            u: state.u,
            rstar: state.rstar,
            mp_shock: mp,
            loss_contrib: 0.5 * (v[0] * v[0] + params.lambda_weight * v[1] * v[1]),
        }
    }
}

/// Eigenvalue count for the Taylor-rule system in (ĩ_{t−1}, π_t, x̂_t): a unique
/// bounded solution needs exactly two roots outside the unit circle, one per
/// jump variable. Time iteration converges to some bounded rule even when the
/// system is indeterminate, so this has to be checked separately.
fn check_taylor_determinacy(rule: PolicyRule, params: &ModelParams) -> Result<()> {
    let rho = params.smoothing_for(rule);
    let (beta, kappa, varphi) = (params.beta, params.kappa, params.varphi);
    let c = (1.0 - rho) * params.phi_pi;
    let d = (1.0 - rho) * params.phi_x;
    let a = Matrix3::new(1.0, 0.0, 0.0, 0.0, beta, 0.0, 0.0, varphi, 1.0);
    let b = Matrix3::new(rho, c, d, 0.0, 1.0, -kappa, varphi * rho, varphi * c, 1.0 + varphi * d);
    let m = a.try_inverse().expect("beta > 0") * b;
    let unstable = m.complex_eigenvalues().iter().filter(|l| l.norm() > 1.0).count();
    if unstable != 2 {
        let kind = if unstable < 2 { "indeterminacy" } else { "explosiveness" };
        return Err(Error::NoStableSolution(format!(
            "{rule}: {kind} ({unstable} unstable roots for 2 jump variables; phi_pi {}, phi_x {}, rho_i {rho})",
            params.phi_pi, params.phi_x
        )));
    }
    Ok(())
}

pub fn solve_fire_policy(rule: PolicyRule, params: &ModelParams) -> Result<FirePolicy> {
    params.validate()?;
    if rule.is_taylor() {
        check_taylor_determinacy(rule, params)?;
    }
    let lag = LagVariable::for_rule(rule);
    let (rho_u, rho_r) = (params.rho_u, params.rho_r);
    let mut coeffs = [[0.0f64; 4]; 3];
    let mut converged = None;
    for iter in 1..=MAX_ITER {
        let mut next = [[0.0f64; 4]; 3];
        for j in 0..4 {
            let mut s = [0.0; 4];
            s[j] = 1.0;
            if j == 0 && lag == LagVariable::None {
                continue;
            }
            let e_pi = FirePolicy::expectation(&coeffs, 0, lag, rho_u, rho_r, &s);
            let e_x = FirePolicy::expectation(&coeffs, 1, lag, rho_u, rho_r, &s);
            let v = solve_contemporaneous(params, rule, &e_pi, &e_x, &FirePolicy::exogenous(lag, &s))?;
            for row in 0..3 {
                next[row][j] = v[row];
            }
        }
        let step = next
            .iter()
            .flatten()
            .zip(coeffs.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        coeffs = next;
        if !step.is_finite() {
            break;
        }
        if step < STEP_TOL {
            converged = Some(iter);
            break;
        }
    }
    let iterations = converged.ok_or_else(|| {
        Error::NoStableSolution(format!(
            "{rule}: time iteration did not converge in {MAX_ITER} iterations"
        ))
    })?;
    if let Some(k) = lag.source() {
        let root = coeffs[k][0];
        if root.abs() >= 1.0 {
            return Err(Error::NoStableSolution(format!(
                "{rule}: endogenous root {root} outside the unit circle"
            )));
        }
    }

    let mut policy = FirePolicy {
        rule,
        lag,
        coefficients: coeffs,
        residual_norm: 0.0,
        iterations,
        rho_u,
        rho_r,
    };
    let mut z = NormalStream::new(0x5eed, 0);
    let mut worst = 0.0f64;
    for _ in 0..RESIDUAL_STATES {
        let s = [
            z.standard_normal(),
            z.standard_normal(),
            z.standard_normal(),
            z.standard_normal(),
        ];
        for r in policy.residuals(params, &s) {
            worst = worst.max(r.abs());
        }
    }
    policy.residual_norm = worst;
    if !(worst < RESIDUAL_TOL) {
        return Err(Error::NoStableSolution(format!(
            "{rule}: residual norm {worst:e} above {RESIDUAL_TOL:e}"
        )));
    }
    Ok(policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rules_solve_at_baseline() {
        let p = ModelParams::baseline();
        for rule in PolicyRule::ALL {
            let f = solve_fire_policy(rule, &p).unwrap();
            assert!(f.residual_norm < 1e-10, "{rule}: {}", f.residual_norm);
        }
    }

    #[test]
    fn discretion_matches_closed_form() {
        let p = ModelParams::baseline();
        let f = solve_fire_policy(PolicyRule::OptimalDiscretion, &p).unwrap();
        let l = p.lambda_weight;
        let closed = l / (l * (1.0 - p.beta * p.rho_u) + p.kappa * p.kappa);
        assert!((f.coefficients[0][1] - closed).abs() < 1e-10);
    }

    #[test]
    fn taylor_without_smoothing_matches_undetermined_coefficients() {
        let mut p = ModelParams::baseline();
        p.phi_x = 0.0;
        let f = solve_fire_policy(PolicyRule::TaylorNoSmoothing, &p).unwrap();
        let rho = p.rho_u;
        // π = a·u, x̂ = b·u, ĩ = φ_π a u; substituting into the Phillips curve
        // and Euler equation gives two linear equations in (a, b).
        let a = 1.0 / ((1.0 - p.beta * rho) + p.kappa * p.varphi * (p.phi_pi - rho) / (1.0 - rho));
        let b = -p.varphi * a * (p.phi_pi - rho) / (1.0 - rho);
        assert!((f.coefficients[0][1] - a).abs() < 1e-10);
        assert!((f.coefficients[1][1] - b).abs() < 1e-10);
    }

    #[test]
    fn indeterminate_taylor_rule_fails() {
        let mut p = ModelParams::baseline();
        p.phi_pi = 0.5;
        p.phi_x = 0.0;
        for rule in [PolicyRule::TaylorSmoothing, PolicyRule::TaylorNoSmoothing] {
            assert!(matches!(solve_fire_policy(rule, &p), Err(Error::NoStableSolution(_))));
        }
    }

    #[test]
    fn zero_state_gives_zero_outcome() {
        let p = ModelParams::baseline();
        for rule in PolicyRule::ALL {
            let f = solve_fire_policy(rule, &p).unwrap();
            let o = f.outcome(&ModelState::default(), &p, 0.0);
            assert_eq!((o.pi, o.x, o.i), (0.0, 0.0, 0.0));
        }
    }
}

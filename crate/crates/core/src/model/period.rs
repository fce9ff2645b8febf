use crate::beliefs::{self, classify_regime, PerceivedLawParams, RegimeId, ThresholdVariable};
use crate::error::{Error, Result};

use super::{ExpectationMode, ModelParams, ModelState, PeriodOutcome, PolicyRule};

const DET_TOL: f64 = 1e-12;

/// An expectation that is affine in the period's unknowns (π, x̂, ĩ).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Affine {
    pub a: [f64; 3],
    pub c: f64,
}

impl Affine {
    pub fn eval(&self, v: &[f64; 3]) -> f64 {
        self.a[0] * v[0] + self.a[1] * v[1] + self.a[2] * v[2] + self.c
    }
}

/// Predetermined inputs to the contemporaneous system.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Exogenous {
    pub i_lag: f64,
    pub x_lag: f64,
    pub u: f64,
    pub rstar: f64,
    pub mp: f64,
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn indeterminate(det: f64, rule: PolicyRule, params: &ModelParams) -> Error {
    Error::IndeterminateEquilibrium {
        det,
        context: format!(
            "rule {rule}, beta {}, kappa {}, varphi {}, rho_i {}, phi_pi {}, phi_x {}, lambda {}",
            params.beta, params.kappa, params.varphi, params.rho_i, params.phi_pi, params.phi_x, params.lambda_weight
        ),
    }
}

/// Solves Phillips curve + Euler equation + `rule` for (π, x̂, ĩ), with
/// expectations given as affine forms in those unknowns.
///
/// Taylor rules are a 3×3 system. Targeting rules pin (π, x̂) from the Phillips
/// curve and the rule alone; the rate then follows from inverting the Euler
/// equation, which requires expectations that do not load on ĩ.
pub(crate) fn solve_contemporaneous(
    params: &ModelParams,
    rule: PolicyRule,
    e_pi: &Affine,
    e_x: &Affine,
    exo: &Exogenous,
) -> Result<[f64; 3]> {
    let (beta, kappa, varphi) = (params.beta, params.kappa, params.varphi);
    let nkpc = [1.0 - beta * e_pi.a[0], -kappa - beta * e_pi.a[1], -beta * e_pi.a[2]];
    let nkpc_rhs = exo.u + beta * e_pi.c;

    if rule.is_taylor() {
        let rho = params.smoothing_for(rule);
        let m = [
            nkpc,
            [
                -e_x.a[0] - varphi * e_pi.a[0],
                1.0 - e_x.a[1] - varphi * e_pi.a[1],
                varphi - e_x.a[2] - varphi * e_pi.a[2],
            ],
            [-(1.0 - rho) * params.phi_pi, -(1.0 - rho) * params.phi_x, 1.0],
        ];
        let rhs = [
            nkpc_rhs,
            varphi * exo.rstar + e_x.c + varphi * e_pi.c,
            rho * exo.i_lag + exo.mp,
        ];
        let det = det3(&m);
        if !(det.abs() >= DET_TOL) {
            return Err(indeterminate(det, rule, params));
        }
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut mk = m;
            for row in 0..3 {
                mk[row][k] = rhs[row];
            }
            *slot = det3(&mk) / det;
        }
        return Ok(out);
    }

    debug_assert!(
        e_pi.a[2] == 0.0 && e_x.a[2] == 0.0,
        "targeting rules need rate-free expectations"
    );
    let (pi, x) = if rule == PolicyRule::StrictTargeting {
        let coef = nkpc[1];
        if !(coef.abs() >= DET_TOL) {
            return Err(indeterminate(coef, rule, params));
        }
        (0.0, nkpc_rhs / coef)
    } else {
        let w = params.lambda_weight / kappa;
        let rule_rhs = if rule == PolicyRule::OptimalCommitment {
            w * exo.x_lag
        } else {
            0.0
        };
        let det = nkpc[0] * w - nkpc[1];
        if !(det.abs() >= DET_TOL) {
            return Err(indeterminate(det, rule, params));
        }
        (
            (nkpc_rhs * w - nkpc[1] * rule_rhs) / det,
            (nkpc[0] * rule_rhs - nkpc_rhs) / det,
        )
    };
    let v = [pi, x, 0.0];
    let i = e_pi.eval(&v) + exo.rstar + (e_x.eval(&v) - x) / varphi;
    Ok([pi, x, i])
}

fn solve_with_gains(
    state: &ModelState,
    rule: PolicyRule,
    params: &ModelParams,
    gamma_pi: f64,
    gamma_x: f64,
    mp: f64,
) -> Result<([f64; 3], f64, f64)> {
    let p_pi = state.beliefs.prior_pi;
    let p_x = state.beliefs.prior_x;
    let e_pi = Affine {
        a: [gamma_pi, 0.0, 0.0],
        c: (1.0 - gamma_pi) * p_pi,
    };
    let e_x = Affine {
        a: [0.0, gamma_x, 0.0],
        c: (1.0 - gamma_x) * p_x,
    };
    let exo = Exogenous {
        i_lag: state.i_lag,
        x_lag: state.x_lag,
        u: state.u,
        rstar: state.rstar,
        mp,
    };
    let v = solve_contemporaneous(params, rule, &e_pi, &e_x, &exo)?;
    let law = PerceivedLawParams::RANDOM_WALK;
    let e_pi_next = beliefs::update_with_gain(p_pi, v[0], gamma_pi, &law);
    let e_x_next = p_x + gamma_x * (v[1] - p_x);
    Ok((v, e_pi_next, e_x_next))
}

fn outcome(
    state: &ModelState,
    params: &ModelParams,
    v: [f64; 3],
    regime: RegimeId,
    e_pi_next: f64,
    e_x_next: f64,
    mp: f64,
) -> PeriodOutcome {
    PeriodOutcome {
        pi: v[0],
        x: v[1],
        i: v[2],
        regime,
        e_pi_next,
        e_x_next,
        u: state.u,
        rstar: state.rstar,
        mp_shock: mp,
        loss_contrib: 0.5 * (v[0] * v[0] + params.lambda_weight * v[1] * v[1]),
    }
}

/// Solves the period with the attention regime held fixed at `regime`.
pub fn solve_period_pinned(
    state: &ModelState,
    rule: PolicyRule,
    params: &ModelParams,
    regime: RegimeId,
    mp_shock: f64,
) -> Result<PeriodOutcome> {
    let att = &params.attention;
    let (v, e_pi, e_x) = solve_with_gains(state, rule, params, att.gamma_pi(regime), att.gamma_x(regime), mp_shock)?;
    Ok(outcome(state, params, v, regime, e_pi, e_x, mp_shock))
}

fn solve_threshold(state: &ModelState, rule: PolicyRule, params: &ModelParams, mp: f64) -> Result<PeriodOutcome> {
    let att = &params.attention;
    match att.threshold_variable {
        ThresholdVariable::Lagged => solve_period_pinned(state, rule, params, classify_regime(state.pi_lag, att), mp),
        ThresholdVariable::Current => {
            // Regime must agree with the period's own inflation. When neither
            // regime is self-consistent the high regime is taken.
            let low = solve_period_pinned(state, rule, params, RegimeId::Low, mp)?;
            if classify_regime(low.pi, att) == RegimeId::Low {
                return Ok(low);
            }
            solve_period_pinned(state, rule, params, RegimeId::High, mp)
        }
    }
}

/// Period equilibrium under subjective expectations for either expectation
/// mode other than FIRE. Regime in the outcome is the attention regime used
/// (for fixed attention, the regime implied by π_{t−1}, reported only).
pub fn solve_period(
    state: &ModelState,
    rule: PolicyRule,
    params: &ModelParams,
    mode: &ExpectationMode,
    mp_shock: f64,
) -> Result<PeriodOutcome> {
    match *mode {
        ExpectationMode::ThresholdAttention => solve_threshold(state, rule, params, mp_shock),
        ExpectationMode::FixedAttention { gamma_pi } => {
            let regime = classify_regime(state.pi_lag, &params.attention);
            let (v, e_pi, e_x) = solve_with_gains(state, rule, params, gamma_pi, params.attention.gamma_x, mp_shock)?;
            Ok(outcome(state, params, v, regime, e_pi, e_x, mp_shock))
        }
        ExpectationMode::Fire => Err(Error::InvalidParameter(
            "FIRE outcomes come from a FirePolicy, not the subjective period solver".into(),
        )),
    }
}

/// Threshold-attention period under one of the two Taylor rules, with an
/// additive monetary policy shock in the rate equation.
pub fn solve_period_subjective(
    state: &ModelState,
    rule: PolicyRule,
    params: &ModelParams,
    mp_shock: f64,
) -> Result<PeriodOutcome> {
    if !rule.is_taylor() {
        return Err(Error::InvalidParameter(format!("{rule} is not a Taylor rule")));
    }
    solve_threshold(state, rule, params, mp_shock)
}

/// Threshold-attention period under a targeting rule; the rate is backed out
/// of the Euler equation.
pub fn solve_period_targeting(state: &ModelState, rule: PolicyRule, params: &ModelParams) -> Result<PeriodOutcome> {
    if rule.is_taylor() {
        return Err(Error::InvalidParameter(format!("{rule} is not a targeting rule")));
    }
    solve_threshold(state, rule, params, 0.0)
}

/// Reduced-form Phillips-curve slope on x̂_t once subjective inflation
/// expectations are substituted: κ / (1 − βγ).
pub fn reduced_form_slope(params: &ModelParams, regime: RegimeId) -> f64 {
    params.kappa / (1.0 - params.beta * params.attention.gamma_pi(regime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beliefs::BeliefState;

    fn state(u: f64) -> ModelState {
        ModelState {
            u,
            ..Default::default()
        }
    }

    #[test]
    fn steady_state_is_zero() {
        let p = ModelParams::baseline();
        for rule in PolicyRule::ALL {
            let o = solve_period(
                &ModelState::default(),
                rule,
                &p,
                &ExpectationMode::ThresholdAttention,
                0.0,
            )
            .unwrap();
            assert_eq!((o.pi, o.x, o.i), (0.0, 0.0, 0.0), "{rule}");
            assert_eq!(o.loss_contrib, 0.0);
        }
    }

    #[test]
    fn strict_targeting_pins_inflation_exactly() {
        let p = ModelParams::baseline();
        let s = ModelState {
            beliefs: BeliefState {
                prior_pi: 0.7,
                prior_x: -0.3,
            },
            u: 1.3,
            rstar: 0.4,
            ..Default::default()
        };
        let o = solve_period_targeting(&s, PolicyRule::StrictTargeting, &p).unwrap();
        assert_eq!(o.pi, 0.0);
        let e_pi = (1.0 - 0.18) * 0.7;
        assert!((o.x + (p.beta * e_pi + 1.3) / p.kappa).abs() < 1e-12);
    }

    #[test]
    fn commitment_equals_discretion_without_lagged_gap() {
        let p = ModelParams::baseline();
        let s = ModelState {
            beliefs: BeliefState {
                prior_pi: 0.2,
                prior_x: 0.1,
            },
            u: 0.9,
            rstar: -0.3,
            ..Default::default()
        };
        let c = solve_period_targeting(&s, PolicyRule::OptimalCommitment, &p).unwrap();
        let d = solve_period_targeting(&s, PolicyRule::OptimalDiscretion, &p).unwrap();
        assert_eq!(c, d);
        let zero = solve_period_targeting(&ModelState::default(), PolicyRule::OptimalDiscretion, &p).unwrap();
        assert_eq!((zero.pi, zero.x), (0.0, 0.0));
    }

    #[test]
    fn wrong_rule_family_rejected() {
        let p = ModelParams::baseline();
        assert!(solve_period_subjective(&state(1.0), PolicyRule::StrictTargeting, &p, 0.0).is_err());
        assert!(solve_period_targeting(&state(1.0), PolicyRule::TaylorSmoothing, &p).is_err());
    }

    #[test]
    fn singular_system_reported() {
        let mut p = ModelParams::baseline();
        // NKPC row for strict targeting: coefficient on x is −κ.
        p.kappa = 1e-14;
        let err = solve_period_targeting(&state(1.0), PolicyRule::StrictTargeting, &p).unwrap_err();
        assert!(matches!(err, Error::IndeterminateEquilibrium { .. }), "{err}");
    }

    #[test]
    fn equal_gammas_make_lagged_inflation_irrelevant() {
        let mut p = ModelParams::baseline();
        p.attention.gamma_pi_high = p.attention.gamma_pi_low;
        let mut a = state(0.8);
        let mut b = a;
        a.pi_lag = 0.0;
        b.pi_lag = 3.0;
        let oa = solve_period_subjective(&a, PolicyRule::TaylorSmoothing, &p, 0.0).unwrap();
        let ob = solve_period_subjective(&b, PolicyRule::TaylorSmoothing, &p, 0.0).unwrap();
        assert_eq!((oa.pi, oa.x, oa.i, oa.e_pi_next), (ob.pi, ob.x, ob.i, ob.e_pi_next));
    }

    #[test]
    fn slope_steeper_in_high_regime() {
        let p = ModelParams::baseline();
        assert!(reduced_form_slope(&p, RegimeId::High) > reduced_form_slope(&p, RegimeId::Low));
    }

    #[test]
    fn cost_push_sensitivity_larger_in_high_regime() {
        let p = ModelParams::baseline();
        let h = 1e-4;
        let base = ModelState {
            beliefs: BeliefState {
                prior_pi: 0.3,
                prior_x: -0.2,
            },
            i_lag: 0.4,
            rstar: 0.1,
            u: 0.5,
            ..Default::default()
        };
        for rule in PolicyRule::ALL
            .into_iter()
            .filter(|r| *r != PolicyRule::StrictTargeting)
        {
            let d = |regime| {
                let up = ModelState { u: base.u + h, ..base };
                let dn = ModelState { u: base.u - h, ..base };
                let a = solve_period_pinned(&up, rule, &p, regime, 0.0).unwrap().pi;
                let b = solve_period_pinned(&dn, rule, &p, regime, 0.0).unwrap().pi;
                (a - b) / (2.0 * h)
            };
            assert!(d(RegimeId::High) > d(RegimeId::Low), "{rule}");
        }
    }

    #[test]
    fn current_inflation_threshold_is_self_consistent() {
        let mut p = ModelParams::baseline();
        p.attention.threshold_variable = ThresholdVariable::Current;
        for u in [0.1, 0.5, 1.0, 2.0, 4.0] {
            let o = solve_period_subjective(&state(u), PolicyRule::TaylorSmoothing, &p, 0.0).unwrap();
            if o.regime == RegimeId::Low {
                assert!(o.pi <= p.attention.threshold);
            }
        }
        let big = solve_period_subjective(&state(4.0), PolicyRule::TaylorSmoothing, &p, 0.0).unwrap();
        assert_eq!(big.regime, RegimeId::High);
    }
}

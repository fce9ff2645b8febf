//! Synthetic survey panels with known attention parameters.
//!
//! Inflation comes from a threshold-attention simulation. The survey series
//! follows the regime updating law on that inflation path with i.i.d. normal
//! reporting noise, S_t = S_{t−1} + γ_{r(π_{t−1})}(π_t − S_{t−1}) + η_t, so the
//! updating regression is correctly specified with β0 = 0, β1 = 1, β2 = γ_r.

use serde::{Deserialize, Serialize};

use super::simulate::{simulate, ShockSwitch, SimulationConfig};
use crate::beliefs::classify_regime;
use crate::econometrics::RegressionDataset;
use crate::error::{Error, Result};
use crate::model::{ExpectationMode, ModelParams, PolicyRule};
use crate::rng::{NormalStream, STREAM_SURVEY};

pub const DEFAULT_NOISE_SD: f64 = 0.05;
pub const DEFAULT_OBSERVATIONS: usize = 546;
const START_YEAR: i64 = 1900;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyConfig {
    /// Regression observations produced.
    pub observations: usize,
    pub burn_in: usize,
    /// Reporting noise s.d., quarterly pp.
    pub noise_sd: f64,
    pub rule: PolicyRule,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        Self {
            observations: DEFAULT_OBSERVATIONS,
            burn_in: 200,
            noise_sd: DEFAULT_NOISE_SD,
            rule: PolicyRule::TaylorSmoothing,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSurvey {
    /// `YYYY-Qq` labels.
    pub dates: Vec<String>,
    /// Quarter-on-quarter inflation, quarterly pp.
    pub pi: Vec<f64>,
    /// Survey quarter-ahead expectation, quarterly pp.
    pub expectation: Vec<f64>,
}

impl SyntheticSurvey {
    /// Rows 1.. of the panel as regression observations.
    pub fn to_dataset(&self) -> RegressionDataset {
        let mut d = RegressionDataset::default();
        for t in 1..self.pi.len() {
            d.labels.push(self.dates[t].clone());
            d.y.push(self.expectation[t]);
            d.x_prior.push(self.expectation[t - 1]);
            d.x_fe.push(self.pi[t] - self.expectation[t - 1]);
            d.z_threshold.push(self.pi[t - 1]);
            d.pi.push(self.pi[t]);
        }
        d
    }

    /// `date,expected_inflation_1y,qoq_inflation` rows with the expectation
    /// annualized by ×4.
    pub fn csv_rows(&self) -> impl Iterator<Item = (String, f64, f64)> + '_ {
        (0..self.pi.len()).map(|t| (self.dates[t].clone(), crate::annualize(self.expectation[t]), self.pi[t]))
    }
}

fn quarter_label(k: usize) -> String {
    let k = k as i64;
    format!("{}-Q{}", START_YEAR + k / 4, k % 4 + 1)
}

pub fn synthetic_survey(params: &ModelParams, cfg: &SurveyConfig, seed: u64) -> Result<SyntheticSurvey> {
    if !(cfg.noise_sd >= 0.0 && cfg.noise_sd.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise_sd = {} must be non-negative",
            cfg.noise_sd
        )));
    }
    if cfg.observations == 0 {
        return Err(Error::InvalidParameter("observations must be positive".into()));
    }
    let len = cfg.observations + 1;
    if START_YEAR as usize + len / 4 > 9999 {
        return Err(Error::InvalidParameter(format!(
            "{len} quarters do not fit four-digit years"
        )));
    }
    let sim = SimulationConfig {
        n_periods: len,
        burn_in: cfg.burn_in,
        switch: ShockSwitch::Both,
    };
    let run = simulate(&ExpectationMode::ThresholdAttention, cfg.rule, params, &sim, seed)?;
    let mut noise = NormalStream::new(seed, STREAM_SURVEY);
    let att = &params.attention;
    let (mut s, mut pi_lag) = match cfg.burn_in {
        0 => (0.0, 0.0),
        b => (run.path[b - 1].e_pi_next, run.path[b - 1].pi),
    };
    let mut out = SyntheticSurvey {
        dates: Vec::with_capacity(len),
        pi: Vec::with_capacity(len),
        expectation: Vec::with_capacity(len),
    };
    for (k, o) in run.path[cfg.burn_in..].iter().enumerate() {
        let gamma = att.gamma_pi(classify_regime(pi_lag, att));
        s += gamma * (o.pi - s) + cfg.noise_sd * noise.standard_normal();
        out.dates.push(quarter_label(k));
        out.pi.push(o.pi);
        out.expectation.push(s);
        pi_lag = o.pi;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econometrics::threshold_regression;

    #[test]
    fn labels_and_lengths() {
        let p = ModelParams::baseline();
        let s = synthetic_survey(&p, &SurveyConfig::default(), 1).unwrap();
        assert_eq!(s.pi.len(), DEFAULT_OBSERVATIONS + 1);
        assert_eq!(s.dates[0], "1900-Q1");
        assert_eq!(s.dates[5], "1901-Q2");
        let d = s.to_dataset();
        assert_eq!(d.n(), DEFAULT_OBSERVATIONS);
        d.validate().unwrap();
    }

    #[test]
    fn noiseless_survey_is_exact_updating() {
        let p = ModelParams::baseline();
        let cfg = SurveyConfig {
            noise_sd: 0.0,
            ..Default::default()
        };
        let d = synthetic_survey(&p, &cfg, 2).unwrap().to_dataset();
        for t in 0..d.n() {
            let g = p.attention.gamma_pi(classify_regime(d.z_threshold[t], &p.attention));
            assert!((d.y[t] - d.x_prior[t] - g * d.x_fe[t]).abs() < 1e-12);
        }
    }

    #[test]
    fn recovers_parameters_roughly() {
        let p = ModelParams::baseline();
        let d = synthetic_survey(&p, &SurveyConfig::default(), 3).unwrap().to_dataset();
        let fit = threshold_regression(&d, 0.15, None).unwrap();
        assert!((fit.gamma_low() - 0.18).abs() < 0.1, "{}", fit.gamma_low());
        assert!((fit.gamma_high() - 0.36).abs() < 0.1, "{}", fit.gamma_high());
    }
}

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use attn_core::econometrics::{ExpectationScaling, WithinRegimeVariant};
use attn_core::experiments::asad::AsAdParams;
use attn_core::experiments::irf::ShockKind;
use attn_core::experiments::{default_modes, SimulationConfig, SurveyConfig};
use attn_core::model::{ExpectationMode, ModelParams, PolicyRule};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Inflation-valued inputs (the attention threshold) are quarterly pp.
    #[default]
    Quarterly,
    /// Inflation-valued inputs are annualized pp and divided by 4.
    Annualized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IrfSection {
    pub shock: ShockKind,
    /// Impact on inflation, annualized pp.
    pub impact: f64,
    pub horizon: usize,
}

impl Default for IrfSection {
    fn default() -> Self {
        Self {
            shock: ShockKind::CostPush,
            impact: 5.0,
            horizon: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateDepSection {
    /// Impact of each isolated shock, annualized pp.
    pub impact_each: f64,
    pub horizon: usize,
}

impl Default for StateDepSection {
    fn default() -> Self {
        Self {
            impact_each: 3.0,
            horizon: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrateSection {
    pub target: f64,
}

impl Default for CalibrateSection {
    fn default() -> Self {
        Self { target: 0.31 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub trim: f64,
    pub window_len: usize,
    pub nw_lags: usize,
    pub scaling: ExpectationScaling,
    pub within_variant: WithinRegimeVariant,
}

impl Default for EstimateSection {
    fn default() -> Self {
        Self {
            input: None,
            trim: 0.15,
            window_len: 12,
            nw_lags: 12,
            scaling: ExpectationScaling::Divide,
            within_variant: WithinRegimeVariant::MeanInflation,
        }
    }
}

/// Slice of the simulated path written by `simulate`, in kept periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathWindow {
    pub offset: usize,
    pub length: usize,
}

impl Default for PathWindow {
    fn default() -> Self {
        Self { offset: 0, length: 180 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub units: Units,
    pub seed: u64,
    pub seed_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<ExpectationMode>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<PolicyRule>>,
    pub params: ModelParams,
    pub simulation: SimulationConfig,
    pub irf: IrfSection,
    pub statedep: StateDepSection,
    pub calibrate: CalibrateSection,
    pub estimate: EstimateSection,
    pub survey: SurveyConfig,
    pub path_window: PathWindow,
    pub asad: AsAdParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            units: Units::Quarterly,
            seed: 1,
            seed_count: 5,
            out_dir: None,
            modes: None,
            rules: None,
            params: ModelParams::baseline(),
            simulation: SimulationConfig::default(),
            irf: IrfSection::default(),
            statedep: StateDepSection::default(),
            calibrate: CalibrateSection::default(),
            estimate: EstimateSection::default(),
            survey: SurveyConfig::default(),
            path_window: PathWindow::default(),
            asad: AsAdParams::textbook(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Model parameters in internal (quarterly) units.
    pub fn model_params(&self) -> ModelParams {
        let mut p = self.params;
        if self.units == Units::Annualized {
            p.attention.threshold = attn_core::deannualize(p.attention.threshold);
        }
        p
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.seed_count as u64).map(|k| self.seed + k).collect()
    }

    pub fn modes_or(&self, default: Vec<ExpectationMode>) -> Vec<ExpectationMode> {
        self.modes.clone().unwrap_or(default)
    }

    pub fn rules_or(&self, default: &[PolicyRule]) -> Vec<PolicyRule> {
        self.rules.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let p = self.model_params();
        p.validate()?;
        for m in self.modes.iter().flatten() {
            m.validate()?;
        }
        if self.seed_count == 0 {
            bail!("seed_count must be positive");
        }
        if self.seed.checked_add(self.seed_count as u64).is_none() {
            bail!("seed range overflows");
        }
        if self.simulation.n_periods == 0 {
            bail!("simulation.n_periods must be positive");
        }
        if self.irf.horizon == 0 || self.statedep.horizon == 0 {
            bail!("horizons must be positive");
        }
        if !(self.irf.impact.is_finite() && self.statedep.impact_each.is_finite()) {
            bail!("impacts must be finite");
        }
        if !(0.0..=0.45).contains(&self.estimate.trim) {
            bail!("estimate.trim = {} outside [0, 0.45]", self.estimate.trim);
        }
        if self.estimate.window_len < 6 {
            bail!("estimate.window_len = {} must be at least 6", self.estimate.window_len);
        }
        if !(self.calibrate.target > 0.0 && self.calibrate.target < 1.0) {
            bail!("calibrate.target = {} outside (0, 1)", self.calibrate.target);
        }
        if self.path_window.length == 0 {
            bail!("path_window.length must be positive");
        }
        Ok(())
    }
}

/// Parses a comma-separated list, with `all` expanding to the given full list.
pub fn parse_list<T: std::str::FromStr<Err = attn_core::Error>>(text: &str, all: Vec<T>) -> anyhow::Result<Vec<T>> {
    if text.trim() == "all" {
        return Ok(all);
    }
    let items = text
        .split(',')
        .map(|s| s.trim().parse::<T>())
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        bail!("empty list");
    }
    Ok(items)
}

pub fn all_modes(params: &ModelParams) -> Vec<ExpectationMode> {
    default_modes(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trip() {
        let c = RunConfig::default();
        let text = c.to_toml().unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml().unwrap(), text);
    }

    #[test]
    fn populated_round_trip() {
        let mut c = RunConfig {
            modes: Some(vec![
                ExpectationMode::Fire,
                ExpectationMode::FixedAttention { gamma_pi: 0.36 },
            ]),
            rules: Some(vec![PolicyRule::StrictTargeting]),
            units: Units::Annualized,
            ..Default::default()
        };
        c.estimate.input = Some("data/panel.csv".into());
        c.params.attention.threshold = f64::INFINITY;
        let text = c.to_toml().unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml().unwrap(), text);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("seed = 3\nbogus = 1\n").is_err());
        assert!(RunConfig::from_toml("[irf]\nhorizon = 5\nextra = true\n").is_err());
        assert!(RunConfig::from_toml("[params.attention]\ntreshold = 1.0\n").is_err());
    }

    #[test]
    fn partial_config_fills_defaults() {
        let c = RunConfig::from_toml("seed = 9\n[irf]\nhorizon = 12\n").unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.irf.horizon, 12);
        assert_eq!(c.irf.impact, 5.0);
        assert_eq!(c.params, ModelParams::baseline());
        let c = RunConfig::from_toml("[params]\nkappa = 0.1\n[params.attention]\nthreshold = 2.0\n").unwrap();
        assert_eq!(c.params.kappa, 0.1);
        assert_eq!(c.params.attention.threshold, 2.0);
        assert_eq!(c.params.attention.gamma_pi_high, 0.36);
    }

    #[test]
    fn annualized_threshold_converted() {
        let mut c = RunConfig {
            units: Units::Annualized,
            ..Default::default()
        };
        c.params.attention.threshold = 4.0;
        assert_eq!(c.model_params().attention.threshold, 1.0);
    }

    #[test]
    fn lists() {
        let p = ModelParams::baseline();
        assert_eq!(parse_list::<ExpectationMode>("all", all_modes(&p)).unwrap().len(), 3);
        assert_eq!(
            parse_list::<PolicyRule>("strict-targeting, taylor-smoothing", PolicyRule::ALL.to_vec()).unwrap(),
            vec![PolicyRule::StrictTargeting, PolicyRule::TaylorSmoothing]
        );
        assert!(parse_list::<PolicyRule>("nope", vec![]).is_err());
    }
}

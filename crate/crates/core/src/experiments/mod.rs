//! Quantitative exercises built on the model: the stylized AS/AD example,
//! impulse responses, state dependency, stochastic simulations, shock
//! calibration and the welfare grid.

pub mod asad;
mod engine;
pub mod irf;
pub mod simulate;
pub mod statedep;
pub mod survey;
pub mod welfare;

pub use asad::{asad_example, AsAdCurves, AsAdParams};
pub use irf::{forecast_error_paths, half_life, impulse_response, ForecastErrors, IrfResult, ShockKind, ShockSize};
pub use simulate::{
    calibrate_shock_volatility, simulate, simulate_summary, simulate_with, CalibrationResult, Innovations, ShockSwitch,
    SimulationConfig, SimulationRun, SimulationSummary,
};
pub use statedep::{state_dependency, StateDependencyResult};
pub use survey::{synthetic_survey, SurveyConfig, SyntheticSurvey};
pub use welfare::{default_modes, welfare_table, WelfareCell, WelfareGrid};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStats {
    pub mean_a: f64,
    pub mean_b: f64,
    pub sd_a: f64,
    pub sd_b: f64,
    pub correlation: f64,
}

/// Sample means, standard deviations (n − 1) and Pearson correlation.
pub fn summary_stats(a: &[f64], b: &[f64]) -> Result<SummaryStats> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "series need equal lengths of at least 2 (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let (ma, mb) = (mean(a), mean(b));
    let (mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
        sab += (x - ma) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::InvalidParameter(
            "correlation undefined for a constant series".into(),
        ));
    }
    Ok(SummaryStats {
        mean_a: ma,
        mean_b: mb,
        sd_a: (saa / (n - 1.0)).sqrt(),
        sd_b: (sbb / (n - 1.0)).sqrt(),
        correlation: sab / (saa * sbb).sqrt(),
    })
}

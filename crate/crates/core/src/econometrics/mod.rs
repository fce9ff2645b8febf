//! Estimation of attention from survey expectations.

pub mod carlson_parkin;
pub mod ols;
pub mod panel;
pub mod rolling;
pub mod threshold;

pub use carlson_parkin::{carlson_parkin, implied_shares, CarlsonParkinEstimate, CategoricalShares};
pub use ols::{classical_se, hc_robust_se, newey_west_se, ols_fit, OlsFit};
pub use panel::{
    build_qoq_inflation, build_quarter_ahead_expectation, build_regression_dataset, read_panel_csv, read_panel_path,
    ExpectationPanel, ExpectationScaling, Frequency, PriceSeries,
};
pub use rolling::{
    rolling_window_attention, within_regime_regression, RollingAttentionSeries, WithinRegimeFit, WithinRegimeVariant,
};
pub use threshold::{threshold_regression, RegimeFit, ThresholdFit};

use serde::Serialize;

use crate::error::{Error, Result};

/// Regression-ready observations of the updating equation, quarterly pp.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RegressionDataset {
    pub labels: Vec<String>,
    /// Ẽ_tπ_{t+h}
    pub y: Vec<f64>,
    /// Ẽ_{t−h}π_t
    pub x_prior: Vec<f64>,
    /// π_t − Ẽ_{t−h}π_t
    pub x_fe: Vec<f64>,
    /// π_{t−1}
    pub z_threshold: Vec<f64>,
    /// π_t
    pub pi: Vec<f64>,
}

impl RegressionDataset {
    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let lens = [
            self.labels.len(),
            self.x_prior.len(),
            self.x_fe.len(),
            self.z_threshold.len(),
            self.pi.len(),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(Error::InvalidParameter(format!(
                "regression columns have unequal lengths ({n} vs {lens:?})"
            )));
        }
        let finite = [&self.y, &self.x_prior, &self.x_fe, &self.z_threshold, &self.pi]
            .iter()
            .all(|c| c.iter().all(|v| v.is_finite()));
        if !finite {
            return Err(Error::InvalidParameter(
                "regression data contain non-finite values".into(),
            ));
        }
        Ok(())
    }
}

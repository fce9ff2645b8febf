//! Rolling-window attention and the within-regime attention regressions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ols::{newey_west_se, ols_fit};
use super::RegressionDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct RollingAttentionSeries {
    pub window_end_dates: Vec<String>,
    /// γ̂ clamped to [0, 1]; None where the window design is singular.
    pub gamma_hat: Vec<Option<f64>>,
    /// Unclamped β̂2/β̂1.
    pub gamma_raw: Vec<Option<f64>>,
    /// Window-average inflation, quarterly pp.
    pub mean_inflation: Vec<f64>,
    /// π_{t−1} at the window end, quarterly pp.
    pub lagged_inflation: Vec<f64>,
}

impl RollingAttentionSeries {
    pub fn len(&self) -> usize {
        self.gamma_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma_hat.is_empty()
    }
}

pub fn clamp_attention(raw: f64) -> f64 {
    raw.clamp(0.0, 1.0)
}

pub fn rolling_window_attention(data: &RegressionDataset, window_len: usize) -> Result<RollingAttentionSeries> {
    data.validate()?;
    if window_len < 6 {
        return Err(Error::InvalidParameter(format!(
            "window_len = {window_len} must be at least 6"
        )));
    }
    let n = data.n();
    if n < window_len {
        return Err(Error::InsufficientData(format!(
            "{n} observations for a {window_len}-observation window"
        )));
    }
    let mut out = RollingAttentionSeries {
        window_end_dates: Vec::new(),
        gamma_hat: Vec::new(),
        gamma_raw: Vec::new(),
        mean_inflation: Vec::new(),
        lagged_inflation: Vec::new(),
    };
    for end in window_len - 1..n {
        let start = end + 1 - window_len;
        let x = DMatrix::from_fn(window_len, 3, |r, c| match c {
            0 => 1.0,
            1 => data.x_prior[start + r],
            _ => data.x_fe[start + r],
        });
        let raw = ols_fit(&x, &data.y[start..=end]).ok().map(|f| f.coef[2] / f.coef[1]);
        let raw = raw.filter(|g| g.is_finite());
        out.window_end_dates.push(data.labels[end].clone());
        out.gamma_raw.push(raw);
        out.gamma_hat.push(raw.map(clamp_attention));
        out.mean_inflation
            .push(data.pi[start..=end].iter().sum::<f64>() / window_len as f64);
        out.lagged_inflation.push(data.z_threshold[end]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WithinRegimeVariant {
    /// Regressors built from window-average inflation.
    MeanInflation,
    /// Regressors built from lagged inflation at the window end.
    LaggedInflation,
}

#[derive(Debug, Clone, Serialize)]
pub struct WithinRegimeFit {
    pub variant: WithinRegimeVariant,
    /// (δ0, δ1, δ2, δ3) on {1, 𝟙[π ≥ π̄], π, 𝟙[π ≥ π̄]·π}, π annualized.
    pub coef: [f64; 4],
    pub se: [f64; 4],
    pub nw_lags: usize,
    pub n: usize,
    pub n_high: usize,
}

pub const DEFAULT_NW_LAGS: usize = 12;

/// OLS of γ̂_t on a regime indicator, inflation, and their interaction with
/// Newey–West standard errors. `threshold_annual` is in annualized pp.
pub fn within_regime_regression(
    series: &RollingAttentionSeries,
    threshold_annual: f64,
    variant: WithinRegimeVariant,
    nw_lags: usize,
) -> Result<WithinRegimeFit> {
    let mut gamma = Vec::new();
    let mut infl = Vec::new();
    for t in 0..series.len() {
        if let Some(g) = series.gamma_hat[t] {
            gamma.push(g);
            infl.push(crate::annualize(match variant {
                WithinRegimeVariant::MeanInflation => series.mean_inflation[t],
                WithinRegimeVariant::LaggedInflation => series.lagged_inflation[t],
            }));
        }
    }
    let n = gamma.len();
    if n < 30 {
        return Err(Error::InsufficientData(format!(
            "within-regime regression needs >= 30 windows, got {n}"
        )));
    }
    let ind: Vec<f64> = infl
        .iter()
        .map(|p| if *p >= threshold_annual { 1.0 } else { 0.0 })
        .collect();
    let n_high = ind.iter().filter(|v| **v == 1.0).count();
    if n_high == 0 {
        return Err(Error::InsufficientRegimeVariation(
            "no windows at or above the threshold".into(),
        ));
    }
    let x = DMatrix::from_fn(n, 4, |r, c| match c {
        0 => 1.0,
        1 => ind[r],
        2 => infl[r],
        _ => ind[r] * infl[r],
    });
    let fit = ols_fit(&x, &gamma)?;
    let se = newey_west_se(&x, &fit.residuals, nw_lags)?;
    Ok(WithinRegimeFit {
        variant,
        coef: [fit.coef[0], fit.coef[1], fit.coef[2], fit.coef[3]],
        se: [se[0], se[1], se[2], se[3]],
        nw_lags,
        n,
        n_high,
    })
}

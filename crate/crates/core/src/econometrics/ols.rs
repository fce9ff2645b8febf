//! Least squares and sandwich covariance estimators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Designs with σ_max/σ_min above this are treated as rank deficient.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coef: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    /// (X'X)⁻¹
    pub xtx_inv: DMatrix<f64>,
}

impl OlsFit {
    pub fn nobs(&self) -> usize {
        self.residuals.len()
    }
}

/// Builds an n×k design from columns.
pub fn design_from_columns(columns: &[&[f64]]) -> DMatrix<f64> {
    let n = columns.first().map_or(0, |c| c.len());
    DMatrix::from_fn(n, columns.len(), |r, c| columns[c][r])
}

pub fn ols_fit(x: &DMatrix<f64>, y: &[f64]) -> Result<OlsFit> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::InvalidParameter(format!(
            "design has {n} rows but y has {} entries",
            y.len()
        )));
    }
    if n <= k {
        return Err(Error::InsufficientData(format!(
            "{n} observations for {k} coefficients"
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite value in regression data".into()));
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 0.0) || smax / smin > MAX_CONDITION {
        return Err(Error::SingularDesign(format!("condition number {:e}", smax / smin)));
    }
    let yv = DVector::from_column_slice(y);
    let coef = svd.solve(&yv, 0.0).map_err(|e| Error::SingularDesign(e.to_string()))?;
    let resid = &yv - x * &coef;
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let inv_sq = DMatrix::from_diagonal(&svd.singular_values.map(|s| 1.0 / (s * s)));
    let xtx_inv = v_t.transpose() * inv_sq * v_t;
    Ok(OlsFit {
        coef: coef.iter().copied().collect(),
        ssr: resid.iter().map(|e| e * e).sum(),
        residuals: resid.iter().copied().collect(),
        xtx_inv,
    })
}

fn xtx_inverse(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    (x.transpose() * x)
        .try_inverse()
        .ok_or_else(|| Error::SingularDesign("X'X is not invertible".into()))
}

fn check_shapes(x: &DMatrix<f64>, residuals: &[f64]) -> Result<()> {
    if x.nrows() != residuals.len() {
        return Err(Error::InvalidParameter(format!(
            "design has {} rows but {} residuals",
            x.nrows(),
            residuals.len()
        )));
    }
    if x.nrows() <= x.ncols() {
        return Err(Error::InsufficientData(format!(
            "{} observations for {} coefficients",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(())
}

/// Σ_t w(ℓ) e_t e_{t−ℓ} (x_t x_{t−ℓ}' + x_{t−ℓ} x_t') with Bartlett weights;
/// ℓ = 0 gives the White meat.
fn hac_meat(x: &DMatrix<f64>, residuals: &[f64], lags: usize) -> DMatrix<f64> {
    let (n, k) = x.shape();
    let mut meat = DMatrix::<f64>::zeros(k, k);
    for (t, e) in residuals.iter().enumerate().take(n) {
        let xt = x.row(t);
        meat += xt.transpose() * xt * (e * e);
    }
    for l in 1..=lags.min(n.saturating_sub(1)) {
        let w = 1.0 - l as f64 / (lags as f64 + 1.0);
        let mut gamma = DMatrix::<f64>::zeros(k, k);
        for t in l..n {
            gamma += x.row(t).transpose() * x.row(t - l) * (residuals[t] * residuals[t - l]);
        }
        meat += (&gamma + gamma.transpose()) * w;
    }
    meat
}

fn sandwich(bread: &DMatrix<f64>, meat: &DMatrix<f64>) -> DMatrix<f64> {
    bread * meat * bread
}

fn diag_sqrt(cov: &DMatrix<f64>) -> Vec<f64> {
    cov.diagonal().iter().map(|v| v.max(0.0).sqrt()).collect()
}

/// White (HC0) covariance, no small-sample scaling.
pub fn hc0_cov(x: &DMatrix<f64>, residuals: &[f64]) -> Result<DMatrix<f64>> {
    check_shapes(x, residuals)?;
    let bread = xtx_inverse(x)?;
    Ok(sandwich(&bread, &hac_meat(x, residuals, 0)))
}

/// HC1: HC0 scaled by n/(n−k).
pub fn hc1_cov(x: &DMatrix<f64>, residuals: &[f64]) -> Result<DMatrix<f64>> {
    let (n, k) = x.shape();
    Ok(hc0_cov(x, residuals)? * (n as f64 / (n - k) as f64))
}

pub fn hc_robust_se(x: &DMatrix<f64>, residuals: &[f64]) -> Result<Vec<f64>> {
    Ok(diag_sqrt(&hc1_cov(x, residuals)?))
}

/// Bartlett-kernel HAC covariance, no degrees-of-freedom adjustment.
pub fn newey_west_cov(x: &DMatrix<f64>, residuals: &[f64], lags: usize) -> Result<DMatrix<f64>> {
    check_shapes(x, residuals)?;
    let bread = xtx_inverse(x)?;
    Ok(sandwich(&bread, &hac_meat(x, residuals, lags)))
}

pub fn newey_west_se(x: &DMatrix<f64>, residuals: &[f64], lags: usize) -> Result<Vec<f64>> {
    Ok(diag_sqrt(&newey_west_cov(x, residuals, lags)?))
}

/// Homoskedastic s.e. with s² = SSR/(n−k).
pub fn classical_se(x: &DMatrix<f64>, residuals: &[f64]) -> Result<Vec<f64>> {
    check_shapes(x, residuals)?;
    let (n, k) = x.shape();
    let s2 = residuals.iter().map(|e| e * e).sum::<f64>() / (n - k) as f64;
    Ok(diag_sqrt(&(xtx_inverse(x)? * s2)))
}

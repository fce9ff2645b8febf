//! Two-regime threshold regression of the expectation-updating equation.
//!
//! Each regime r ∈ {L, H} gets its own intercept, prior coefficient and
//! forecast-error coefficient:
//!
//! ```text
//! Ẽ_tπ_{t+h} = β0_r + β1_r Ẽ_{t−h}π_t + β2_r (π_t − Ẽ_{t−h}π_t) + ε_t,
//! r = L when π_{t−1} ≤ π̄, H otherwise,
//! ```
//!
//! and π̄ minimizes total SSR over the candidate set. Attention in each regime
//! is γ_r = β2_r / β1_r.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::ols::{hc0_cov, ols_fit};
use super::RegressionDataset;
use crate::error::{Error, Result};

const K: usize = 3;
/// Smallest regime size considered for a candidate split.
pub const MIN_REGIME_OBS: usize = K + 2;
pub const DEFAULT_TRIM: f64 = 0.15;

#[derive(Debug, Clone, Serialize)]
pub struct RegimeFit {
    /// (β0, β1, β2)
    pub coeffs: [f64; 3],
    /// HC1 s.e. of the coefficients (stacked-design scaling).
    pub se_coeffs: [f64; 3],
    pub gamma: f64,
    pub se_gamma: f64,
    pub n: usize,
    pub ssr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdFit {
    /// Estimated threshold, annualized pp.
    pub threshold_hat: f64,
    /// Estimated threshold in the data's own (quarterly pp) units.
    pub threshold_quarterly: f64,
    pub low: RegimeFit,
    pub high: RegimeFit,
    pub ssr: f64,
    /// SSR of the one-regime regression on the same data.
    pub pooled_ssr: f64,
    pub wald_stat: f64,
    pub wald_p_equal_gamma: f64,
    pub trim: f64,
    /// (candidate threshold in quarterly pp, total SSR) for every evaluated split.
    pub ssr_profile: Vec<(f64, f64)>,
}

impl ThresholdFit {
    pub fn n(&self) -> usize {
        self.low.n + self.high.n
    }
    pub fn gamma_low(&self) -> f64 {
        self.low.gamma
    }
    pub fn gamma_high(&self) -> f64 {
        self.high.gamma
    }
}

/// Sorted unique values of `z` with `floor(trim·m)` removed from each end.
pub fn candidate_thresholds(z: &[f64], trim: f64) -> Vec<f64> {
    let mut u: Vec<f64> = z.to_vec();
    u.sort_by(f64::total_cmp);
    u.dedup();
    let cut = (trim * u.len() as f64).floor() as usize;
    if 2 * cut >= u.len() {
        return Vec::new();
    }
    u[cut..u.len() - cut].to_vec()
}

#[derive(Clone, Copy)]
struct Moments {
    xtx: Matrix3<f64>,
    xty: Vector3<f64>,
    yty: f64,
    n: usize,
}

impl Moments {
    fn zero() -> Self {
        Self {
            xtx: Matrix3::zeros(),
            xty: Vector3::zeros(),
            yty: 0.0,
            n: 0,
        }
    }

    fn add(&mut self, row: &Vector3<f64>, y: f64) {
        self.xtx += row * row.transpose();
        self.xty += row * y;
        self.yty += y * y;
        self.n += 1;
    }

    fn minus(&self, other: &Moments) -> Moments {
        Moments {
            xtx: self.xtx - other.xtx,
            xty: self.xty - other.xty,
            yty: self.yty - other.yty,
            n: self.n - other.n,
        }
    }

    /// SSR from the normal equations, or None when X'X is numerically singular.
    fn ssr(&self) -> Option<f64> {
        let d = self.xtx.diagonal().map(|v| if v > 0.0 { 1.0 / v.sqrt() } else { 0.0 });
        let scaled = Matrix3::from_diagonal(&d) * self.xtx * Matrix3::from_diagonal(&d);
        let eig = scaled.symmetric_eigenvalues();
        if d.iter().any(|v| *v == 0.0) || eig.min() < 1e-12 * eig.max() {
            return None;
        }
        let chol = self.xtx.cholesky()?;
        let b = chol.solve(&self.xty);
        Some((self.yty - b.dot(&self.xty)).max(0.0))
    }
}

fn design(data: &RegressionDataset, idx: &[usize]) -> (DMatrix<f64>, Vec<f64>) {
    let x = DMatrix::from_fn(idx.len(), K, |r, c| match c {
        0 => 1.0,
        1 => data.x_prior[idx[r]],
        _ => data.x_fe[idx[r]],
    });
    (x, idx.iter().map(|&i| data.y[i]).collect())
}

/// γ = β2/β1 and its delta-method variance from the coefficient covariance.
pub fn attention_ratio(coeffs: &[f64], cov: &DMatrix<f64>) -> (f64, f64) {
    let (b1, b2) = (coeffs[1], coeffs[2]);
    let gamma = b2 / b1;
    let g = [0.0, -b2 / (b1 * b1), 1.0 / b1];
    let mut var = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            var += g[i] * cov[(i, j)] * g[j];
        }
    }
    (gamma, var)
}

fn fit_regime(data: &RegressionDataset, idx: &[usize], scale: f64) -> Result<(RegimeFit, f64)> {
    let (x, y) = design(data, idx);
    let fit = ols_fit(&x, &y)?;
    let cov = hc0_cov(&x, &fit.residuals)? * scale;
    let (gamma, var) = attention_ratio(&fit.coef, &cov);
    let se = |j: usize| cov[(j, j)].max(0.0).sqrt();
    Ok((
        RegimeFit {
            coeffs: [fit.coef[0], fit.coef[1], fit.coef[2]],
            se_coeffs: [se(0), se(1), se(2)],
            gamma,
            se_gamma: var.max(0.0).sqrt(),
            n: idx.len(),
            ssr: fit.ssr,
        },
        var,
    ))
}

/// Grid search for the attention threshold. `candidates`, when given,
/// replaces the trimmed set of unique threshold-variable values.
pub fn threshold_regression(data: &RegressionDataset, trim: f64, candidates: Option<&[f64]>) -> Result<ThresholdFit> {
    data.validate()?;
    let n = data.n();
    if n < 30 {
        return Err(Error::InsufficientData(format!(
            "threshold regression needs n >= 30, got {n}"
        )));
    }
    if !(0.0..=0.45).contains(&trim) {
        return Err(Error::InvalidParameter(format!("trim = {trim} outside [0, 0.45]")));
    }
    let cands = match candidates {
        Some(c) => {
            let mut c = c.to_vec();
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        }
        None => candidate_thresholds(&data.z_threshold, trim),
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| data.z_threshold[a].total_cmp(&data.z_threshold[b]).then(a.cmp(&b)));
    let row = |i: usize| Vector3::new(1.0, data.x_prior[i], data.x_fe[i]);
    let mut total = Moments::zero();
    for &i in &order {
        total.add(&row(i), data.y[i]);
    }

    let mut low = Moments::zero();
    let mut pos = 0;
    let mut profile = Vec::with_capacity(cands.len());
    let mut best: Option<(f64, f64)> = None;
    for &c in &cands {
        while pos < n && data.z_threshold[order[pos]] <= c {
            low.add(&row(order[pos]), data.y[order[pos]]);
            pos += 1;
        }
        let high = total.minus(&low);
        if low.n < MIN_REGIME_OBS || high.n < MIN_REGIME_OBS {
            continue;
        }
        let (Some(a), Some(b)) = (low.ssr(), high.ssr()) else {
            continue;
        };
        let ssr = a + b;
        profile.push((c, ssr));
        // Strict comparison in ascending order keeps the smallest minimizer.
        if best.is_none_or(|(_, s)| ssr < s) {
            best = Some((c, ssr));
        }
    }
    let (thr, _) = best.ok_or_else(|| {
        Error::InsufficientRegimeVariation(format!(
            "no candidate threshold leaves at least {MIN_REGIME_OBS} usable observations in each regime"
        ))
    })?;

    let (idx_low, idx_high): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| data.z_threshold[i] <= thr);
    let scale = n as f64 / (n - 2 * K) as f64;
    let (low_fit, var_low) = fit_regime(data, &idx_low, scale)?;
    let (high_fit, var_high) = fit_regime(data, &idx_high, scale)?;
    let (xp, yp) = design(data, &(0..n).collect::<Vec<_>>());
    let pooled_ssr = ols_fit(&xp, &yp)?.ssr;

    let wald_stat = (high_fit.gamma - low_fit.gamma).powi(2) / (var_low + var_high);
    let wald_p = if wald_stat.is_finite() {
        1.0 - ChiSquared::new(1.0).expect("df > 0").cdf(wald_stat)
    } else {
        f64::NAN
    };
    Ok(ThresholdFit {
        threshold_hat: crate::annualize(thr),
        threshold_quarterly: thr,
        ssr: low_fit.ssr + high_fit.ssr,
        low: low_fit,
        high: high_fit,
        pooled_ssr,
        wald_stat,
        wald_p_equal_gamma: wald_p,
        trim,
        ssr_profile: profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::NormalStream;

    fn synthetic(n: usize, thr: f64, g_low: f64, g_high: f64, noise: f64, seed: u64) -> RegressionDataset {
        let mut z = NormalStream::new(seed, 0);
        let mut pi_prev = 0.0;
        let mut prior = 0.0;
        let mut d = RegressionDataset::default();
        for t in 0..n {
            let pi = 0.7 * pi_prev + 0.6 * z.standard_normal() + 0.3;
            let g = if pi_prev <= thr { g_low } else { g_high };
            let post = prior + g * (pi - prior) + noise * z.standard_normal();
            d.labels.push(t.to_string());
            d.y.push(post);
            d.x_prior.push(prior);
            d.x_fe.push(pi - prior);
            d.z_threshold.push(pi_prev);
            d.pi.push(pi);
            prior = post;
            pi_prev = pi;
        }
        d
    }

    #[test]
    fn candidates_trim_both_ends() {
        let z: Vec<f64> = (0..20).map(|v| v as f64).collect();
        let c = candidate_thresholds(&z, 0.15);
        assert_eq!(c.first(), Some(&3.0));
        assert_eq!(c.last(), Some(&16.0));
        assert_eq!(candidate_thresholds(&z, 0.0).len(), 20);
        assert!(candidate_thresholds(&[1.0, 1.0, 1.0], 0.45).len() == 1);
    }

    #[test]
    fn recovers_regimes_on_clean_data() {
        let d = synthetic(600, 1.0, 0.18, 0.36, 0.02, 1);
        let fit = threshold_regression(&d, DEFAULT_TRIM, None).unwrap();
        assert!(
            (fit.threshold_quarterly - 1.0).abs() < 0.1,
            "{}",
            fit.threshold_quarterly
        );
        assert!((fit.gamma_low() - 0.18).abs() < 3.0 * fit.low.se_gamma);
        assert!((fit.gamma_high() - 0.36).abs() < 3.0 * fit.high.se_gamma);
        assert!(fit.wald_p_equal_gamma < 0.01);
        assert_eq!(fit.n(), 600);
    }

    #[test]
    fn two_regime_ssr_never_exceeds_pooled() {
        let d = synthetic(300, 0.5, 0.3, 0.3, 0.1, 2);
        let fit = threshold_regression(&d, 0.0, None).unwrap();
        for &(_, ssr) in &fit.ssr_profile {
            assert!(ssr <= fit.pooled_ssr * (1.0 + 1e-10));
        }
    }

    #[test]
    fn single_candidate_reduces_to_fixed_split() {
        let d = synthetic(200, 0.8, 0.2, 0.4, 0.05, 3);
        let c = candidate_thresholds(&d.z_threshold, 0.0);
        let mid = c[c.len() / 2];
        let explicit = threshold_regression(&d, 0.15, Some(&[mid])).unwrap();
        assert_eq!(explicit.threshold_quarterly, mid);
        assert_eq!(explicit.ssr_profile.len(), 1);
        let (lo, hi): (Vec<usize>, Vec<usize>) = (0..d.n()).partition(|&i| d.z_threshold[i] <= mid);
        assert_eq!((explicit.low.n, explicit.high.n), (lo.len(), hi.len()));
    }

    #[test]
    fn ties_pick_smallest_threshold() {
        // Candidates between consecutive z values that are all equal produce
        // one split, so duplicates in the explicit list collapse.
        let d = synthetic(100, 0.5, 0.2, 0.4, 0.05, 4);
        let c = candidate_thresholds(&d.z_threshold, 0.2);
        let fit_a = threshold_regression(&d, 0.2, Some(&c)).unwrap();
        let mut doubled = c.clone();
        doubled.extend(c.iter());
        let fit_b = threshold_regression(&d, 0.2, Some(&doubled)).unwrap();
        assert_eq!(fit_a.threshold_quarterly, fit_b.threshold_quarterly);
    }

    #[test]
    fn no_candidates_is_an_error() {
        let mut d = synthetic(60, 0.5, 0.2, 0.4, 0.05, 5);
        d.z_threshold.iter_mut().for_each(|z| *z = 1.0);
        assert!(matches!(
            threshold_regression(&d, 0.15, None),
            Err(Error::InsufficientRegimeVariation(_))
        ));
    }

    #[test]
    fn small_samples_and_bad_trim_rejected() {
        let d = synthetic(20, 0.5, 0.2, 0.4, 0.05, 6);
        assert!(threshold_regression(&d, 0.15, None).is_err());
        let d = synthetic(60, 0.5, 0.2, 0.4, 0.05, 6);
        assert!(threshold_regression(&d, 0.5, None).is_err());
    }

    #[test]
    fn deterministic() {
        let d = synthetic(300, 0.5, 0.2, 0.4, 0.05, 7);
        let a = threshold_regression(&d, 0.15, None).unwrap();
        let b = threshold_regression(&d, 0.15, None).unwrap();
        assert_eq!(a.threshold_quarterly.to_bits(), b.threshold_quarterly.to_bits());
        assert_eq!(a.ssr.to_bits(), b.ssr.to_bits());
        assert_eq!(a.high.se_gamma.to_bits(), b.high.se_gamma.to_bits());
    }

    #[test]
    fn delta_method_close_to_bootstrap() {
        let d = synthetic(500, 0.5, 0.25, 0.25, 0.1, 8);
        let all: Vec<usize> = (0..d.n()).collect();
        let (x, y) = design(&d, &all);
        let fit = ols_fit(&x, &y).unwrap();
        let cov = super::super::ols::hc1_cov(&x, &fit.residuals).unwrap();
        let (gamma, var) = attention_ratio(&fit.coef, &cov);
        let se_delta = var.sqrt();

        let mut u = NormalStream::new(99, 0);
        let draws: Vec<f64> = (0..500)
            .map(|_| {
                let idx: Vec<usize> = (0..d.n())
                    .map(|_| (u.uniform() * d.n() as f64).ceil() as usize - 1)
                    .collect();
                let (xb, yb) = design(&d, &idx);
                let fb = ols_fit(&xb, &yb).unwrap();
                fb.coef[2] / fb.coef[1]
            })
            .collect();
        let m = draws.iter().sum::<f64>() / 500.0;
        let se_boot = (draws.iter().map(|g| (g - m).powi(2)).sum::<f64>() / 499.0).sqrt();
        assert!((gamma - 0.25).abs() < 4.0 * se_delta);
        assert!(
            (se_delta / se_boot - 1.0).abs() < 0.2,
            "delta {se_delta} boot {se_boot}"
        );
    }
}

//! Quantifying categorical "down / same / up" survey answers.
//!
//! Responses are read as draws from N(μ, σ²) with an indifference band
//! [−a, a]: q_down = Φ((−a − μ)/σ) and q_up = 1 − Φ((a − μ)/σ). Inverting gives
//! σ = 2a / (Φ⁻¹(1 − q_up) − Φ⁻¹(q_down)) and μ = a − σΦ⁻¹(1 − q_up).

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const DEFAULT_BAND: f64 = 0.5;
/// Shares are clamped into [ε, 1 − ε] before the normal quantile is taken.
pub const SHARE_CLAMP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoricalShares {
    pub q_down: f64,
    pub q_same: f64,
    pub q_up: f64,
}

impl CategoricalShares {
    pub fn new(q_down: f64, q_same: f64, q_up: f64) -> Result<Self> {
        let s = Self { q_down, q_same, q_up };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.q_down, self.q_same, self.q_up];
        if all.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return Err(Error::InvalidParameter(format!("shares {all:?} must lie in [0, 1]")));
        }
        if (all.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("shares {all:?} must sum to 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlsonParkinEstimate {
    pub mu: f64,
    pub sigma: f64,
    /// Whether either share was moved into [ε, 1 − ε].
    pub clamped: bool,
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

pub fn carlson_parkin(shares: &CategoricalShares, band: f64) -> Result<CarlsonParkinEstimate> {
    shares.validate()?;
    if !(band > 0.0) {
        return Err(Error::InvalidParameter(format!("band a = {band} must be positive")));
    }
    let clamp = |q: f64| q.clamp(SHARE_CLAMP, 1.0 - SHARE_CLAMP);
    let (qd, qu) = (clamp(shares.q_down), clamp(shares.q_up));
    let clamped = qd != shares.q_down || qu != shares.q_up;
    let n = std_normal();
    let upper = n.inverse_cdf(1.0 - qu);
    let lower = n.inverse_cdf(qd);
    if !(upper > lower) {
        return Err(Error::NonPositiveDispersion {
            q_down: shares.q_down,
            q_up: shares.q_up,
        });
    }
    let sigma = 2.0 * band / (upper - lower);
    Ok(CarlsonParkinEstimate {
        mu: band - sigma * upper,
        sigma,
        clamped,
    })
}

/// Shares implied by a latent N(μ, σ²) and band a.
pub fn implied_shares(mu: f64, sigma: f64, band: f64) -> Result<CategoricalShares> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must be positive")));
    }
    let n = std_normal();
    let q_down = n.cdf((-band - mu) / sigma);
    let q_up = 1.0 - n.cdf((band - mu) / sigma);
    Ok(CategoricalShares {
        q_down,
        q_same: 1.0 - q_down - q_up,
        q_up,
    })
}

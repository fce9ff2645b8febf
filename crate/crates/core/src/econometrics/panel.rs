//! Survey panel ingestion and construction of the regression variables.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RegressionDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Monthly,
    Quarterly,
}

impl Frequency {
    /// Periods per quarter: the horizon h of Ẽ_tπ_{t+h}, and the lag used for
    /// quarter-on-quarter price changes.
    pub fn quarter_lag(self) -> usize {
        match self {
            Frequency::Monthly => 3,
            Frequency::Quarterly => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PriceSeries {
    CpiIndex(Vec<Option<f64>>),
    /// Quarter-on-quarter inflation, quarterly pp.
    QoqInflation(Vec<Option<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationPanel {
    pub dates: Vec<String>,
    pub frequency: Frequency,
    /// One-year-ahead expectation, annualized percent.
    pub expected_inflation_1y: Vec<Option<f64>>,
    pub prices: PriceSeries,
}

impl ExpectationPanel {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectationScaling {
    /// e/4
    #[default]
    Divide,
    /// ((1 + e/100)^{1/4} − 1)·100
    Compound,
}

fn no_observations() -> Error {
    Error::InsufficientData("no usable observations".into())
}

/// Ordinal index of a `YYYY-MM` or `YYYY-Qq` label.
fn parse_date(s: &str) -> Option<(Frequency, i64)> {
    let (y, rest) = s.split_once('-')?;
    if y.len() != 4 {
        return None;
    }
    let year: i64 = y.parse().ok()?;
    if let Some(q) = rest.strip_prefix('Q') {
        let q: i64 = if q.len() == 1 { q.parse().ok()? } else { return None };
        return (1..=4).contains(&q).then_some((Frequency::Quarterly, year * 4 + q - 1));
    }
    if rest.len() != 2 {
        return None;
    }
    let m: i64 = rest.parse().ok()?;
    (1..=12).contains(&m).then_some((Frequency::Monthly, year * 12 + m - 1))
}

fn parse_cell(s: &str, line: usize, column: &str) -> Result<Option<f64>> {
    if s.is_empty() || s.eq_ignore_ascii_case("na") || s.eq_ignore_ascii_case("nan") {
        return Ok(None);
    }
    let v: f64 = s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{column}: '{s}' is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("{column}: '{s}' is not finite"),
        });
    }
    Ok(Some(v))
}

/// Reads `date,expected_inflation_1y,cpi_index` or
/// `date,expected_inflation_1y,qoq_inflation`. Empty cells are missing values.
pub fn read_panel_csv<R: Read>(reader: R) -> Result<ExpectationPanel> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(no_observations());
    }
    let price_col = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["date", "expected_inflation_1y", c @ ("cpi_index" | "qoq_inflation")] => c.to_owned(),
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "header must be 'date,expected_inflation_1y,cpi_index' or 'date,expected_inflation_1y,qoq_inflation', got '{}'",
                    header.join(",")
                ),
            })
        }
    };

    let mut dates = Vec::new();
    let mut expect = Vec::new();
    let mut price = Vec::new();
    let mut frequency = None;
    let mut prev: Option<i64> = None;
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let date = rec.get(0).unwrap_or_default();
        let (freq, ord) = parse_date(date).ok_or_else(|| Error::Parse {
            line,
            message: format!("date '{date}' is not YYYY-MM or YYYY-Qq"),
        })?;
        if frequency.is_some_and(|f| f != freq) {
            return Err(Error::Parse {
                line,
                message: "dates mix monthly and quarterly labels".into(),
            });
        }
        frequency = Some(freq);
        if let Some(p) = prev {
            if ord <= p {
                return Err(Error::Parse {
                    line,
                    message: format!("date '{date}' is not after the previous row"),
                });
            }
            if ord != p + 1 {
                return Err(Error::Parse {
                    line,
                    message: format!("gap before '{date}'"),
                });
            }
        }
        prev = Some(ord);
        dates.push(date.to_owned());
        expect.push(parse_cell(
            rec.get(1).unwrap_or_default(),
            line,
            "expected_inflation_1y",
        )?);
        price.push(parse_cell(rec.get(2).unwrap_or_default(), line, &price_col)?);
    }
    let frequency = frequency.ok_or_else(no_observations)?;
    let prices = if price_col == "cpi_index" {
        PriceSeries::CpiIndex(price)
    } else {
        PriceSeries::QoqInflation(price)
    };
    Ok(ExpectationPanel {
        dates,
        frequency,
        expected_inflation_1y: expect,
        prices,
    })
}

pub fn read_panel_path(path: impl AsRef<Path>) -> Result<ExpectationPanel> {
    read_panel_csv(std::fs::File::open(path)?)
}

/// π_t = 100·(P_t − P_{t−h})/P_{t−h}, h = 3 for monthly data and 1 for
/// quarterly; the first h entries are missing.
pub fn build_qoq_inflation(cpi: &[Option<f64>], frequency: Frequency) -> Result<Vec<Option<f64>>> {
    let h = frequency.quarter_lag();
    if cpi.len() < h + 1 {
        return Err(Error::InsufficientData(format!(
            "{} price observations, need at least {}",
            cpi.len(),
            h + 1
        )));
    }
    if let Some(p) = cpi.iter().flatten().find(|p| **p <= 0.0) {
        return Err(Error::InvalidParameter(format!("non-positive price level {p}")));
    }
    Ok((0..cpi.len())
        .map(|t| {
            if t < h {
                return None;
            }
            let (now, then) = (cpi[t]?, cpi[t - h]?);
            Some(100.0 * (now - then) / then)
        })
        .collect())
}

/// Quarter-ahead expectation in quarterly pp from an annualized one-year-ahead
/// expectation.
pub fn build_quarter_ahead_expectation(e_1y: &[Option<f64>], scaling: ExpectationScaling) -> Result<Vec<Option<f64>>> {
    e_1y.iter()
        .map(|e| match (e, scaling) {
            (None, _) => Ok(None),
            (Some(e), ExpectationScaling::Divide) => Ok(Some(e / 4.0)),
            (Some(e), ExpectationScaling::Compound) => {
                if *e <= -100.0 {
                    return Err(Error::InvalidParameter(format!(
                        "expected inflation {e}% cannot be compounded"
                    )));
                }
                Ok(Some(((1.0 + e / 100.0).powf(0.25) - 1.0) * 100.0))
            }
        })
        .collect()
}

/// Rows t with Ẽ_tπ_{t+h}, Ẽ_{t−h}π_t, π_t and π_{t−1} all present.
pub fn build_regression_dataset(panel: &ExpectationPanel, scaling: ExpectationScaling) -> Result<RegressionDataset> {
    if panel.is_empty() {
        return Err(no_observations());
    }
    let h = panel.frequency.quarter_lag();
    let pi = match &panel.prices {
        PriceSeries::CpiIndex(p) => {
            if p.len() < h + 1 {
                return Err(no_observations());
            }
            build_qoq_inflation(p, panel.frequency)?
        }
        PriceSeries::QoqInflation(p) => p.clone(),
    };
    let e = build_quarter_ahead_expectation(&panel.expected_inflation_1y, scaling)?;
    let mut d = RegressionDataset::default();
    for t in h.max(1)..panel.len() {
        let (Some(y), Some(prior), Some(p), Some(z)) = (e[t], e[t - h], pi[t], pi[t - 1]) else {
            continue;
        };
        d.labels.push(panel.dates[t].clone());
        d.y.push(y);
        d.x_prior.push(prior);
        d.x_fe.push(p - prior);
        d.z_threshold.push(z);
        d.pi.push(p);
    }
    if d.n() == 0 {
        return Err(no_observations());
    }
    Ok(d)
}

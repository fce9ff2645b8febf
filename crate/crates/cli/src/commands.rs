use anyhow::{anyhow, Context};
use attn_core::annualize;
use attn_core::econometrics::{
    build_regression_dataset, read_panel_path, rolling_window_attention, threshold_regression,
    within_regime_regression, RegimeFit,
};
use attn_core::experiments::asad::{inflation_growth_1_to_2, AsAdCurves};
use attn_core::experiments::{
    asad_example, calibrate_shock_volatility, forecast_error_paths, impulse_response, simulate_with, state_dependency,
    synthetic_survey, welfare_table, Innovations, ShockSize,
};
use attn_core::model::{ExpectationMode, PolicyRule};
use serde::Serialize;
use serde_json::json;

use crate::config::{all_modes, RunConfig};
use crate::output::{json_lines, num, opt, sha256_hex, Artifacts, Table};

pub struct Outcome {
    pub artifacts: Artifacts,
    /// One-line summary for standard output.
    pub summary: String,
}

fn regime_row(name: &str, r: &RegimeFit) -> Vec<String> {
    vec![
        name.to_string(),
        num(r.coeffs[0]),
        num(r.coeffs[1]),
        num(r.coeffs[2]),
        num(r.gamma),
        num(r.se_gamma),
        r.n.to_string(),
    ]
}

pub fn estimate(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let e = &cfg.estimate;
    let input = e
        .input
        .as_ref()
        .ok_or_else(|| anyhow!("estimate needs --input or estimate.input"))?;
    let panel = read_panel_path(input)?;
    let data = build_regression_dataset(&panel, e.scaling)?;
    let fit = threshold_regression(&data, e.trim, None)?;

    let mut table = Table::new(&["regime", "beta0", "beta1", "beta2", "gamma", "se_gamma", "n"]);
    table.row(regime_row("low", &fit.low));
    table.row(regime_row("high", &fit.high));

    let rolling = rolling_window_attention(&data, e.window_len)?;
    let mut roll = Table::new(&[
        "window_end",
        "gamma_hat",
        "gamma_raw",
        "mean_inflation",
        "lagged_inflation",
    ]);
    for t in 0..rolling.len() {
        roll.row([
            rolling.window_end_dates[t].clone(),
            opt(rolling.gamma_hat[t]),
            opt(rolling.gamma_raw[t]),
            num(annualize(rolling.mean_inflation[t])),
            num(annualize(rolling.lagged_inflation[t])),
        ]);
    }

    let mut meta = vec![json!({
        "record": "threshold_fit",
        "input": input.display().to_string(),
        "frequency": panel.frequency,
        "n": fit.n(),
        "n_low": fit.low.n,
        "n_high": fit.high.n,
        "threshold_hat": fit.threshold_hat,
        "ssr": fit.ssr,
        "pooled_ssr": fit.pooled_ssr,
        "wald_stat": fit.wald_stat,
        "wald_p_equal_gamma": fit.wald_p_equal_gamma,
        "trim": fit.trim,
    })];
    let mut within = Table::new(&["variant", "term", "coef", "se", "n", "n_high", "nw_lags"]);
    match within_regime_regression(&rolling, fit.threshold_hat, e.within_variant, e.nw_lags) {
        Ok(w) => {
            let variant = serde_json::to_value(w.variant)?;
            let variant = variant.as_str().unwrap_or_default().to_string();
            for (k, term) in ["intercept", "high", "inflation", "high_x_inflation"]
                .iter()
                .enumerate()
            {
                within.row([
                    variant.clone(),
                    term.to_string(),
                    num(w.coef[k]),
                    num(w.se[k]),
                    w.n.to_string(),
                    w.n_high.to_string(),
                    w.nw_lags.to_string(),
                ]);
            }
        }
        Err(err) => meta.push(json!({"record": "within_regime_skipped", "reason": err.to_string()})),
    }

    let mut artifacts = Artifacts::new();
    artifacts.add("fit.csv", table.into_bytes());
    artifacts.add("fit_meta.jsonl", json_lines(&meta)?);
    artifacts.add("rolling.csv", roll.into_bytes());
    artifacts.add("within_regime.csv", within.into_bytes());
    Ok(Outcome {
        artifacts,
        summary: format!(
            "threshold {}% annualized, gamma_low {} ({}), gamma_high {} ({}), wald p {}, n {}",
            num(fit.threshold_hat),
            num(fit.low.gamma),
            num(fit.low.se_gamma),
            num(fit.high.gamma),
            num(fit.high.se_gamma),
            num(fit.wald_p_equal_gamma),
            fit.n()
        ),
    })
}

pub fn irf(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = cfg.model_params();
    let modes = cfg.modes_or(vec![ExpectationMode::ThresholdAttention, ExpectationMode::Fire]);
    let rules = cfg.rules_or(&[PolicyRule::TaylorSmoothing]);
    let mut table = Table::new(&["t", "variable", "value", "scenario"]);
    let mut meta = Vec::new();
    for mode in &modes {
        for &rule in &rules {
            let r = impulse_response(
                mode,
                rule,
                cfg.irf.shock,
                ShockSize::ImpactAnnualized(cfg.irf.impact),
                cfg.irf.horizon,
                &p,
            )
            .with_context(|| format!("irf for {mode} / {rule}"))?;
            let fe = forecast_error_paths(&r);
            let scenario = format!("{mode}|{rule}|{}", cfg.irf.shock);
            for t in 0..r.horizon {
                let vars = [
                    ("pi", annualize(r.pi[t])),
                    ("x", r.x[t]),
                    ("i", annualize(r.i[t])),
                    ("expected_pi", annualize(r.e_pi_next[t])),
                    ("prior_pi", annualize(r.prior_pi[t])),
                    ("forecast_error", annualize(fe.errors[t])),
                    ("regime_high", if r.regime[t].is_high() { 1.0 } else { 0.0 }),
                ];
                for (name, v) in vars {
                    table.row([t.to_string(), name.to_string(), num(v), scenario.clone()]);
                }
            }
            meta.push(json!({
                "scenario": scenario,
                "shock": r.shocks[0],
                "forecast_error_sign_changes": fe.sign_changes,
            }));
        }
    }
    let mut artifacts = Artifacts::new();
    artifacts.add("irf.csv", table.into_bytes());
    artifacts.add("irf_meta.jsonl", json_lines(&meta)?);
    Ok(Outcome {
        artifacts,
        summary: format!("{} impulse responses over {} quarters", meta.len(), cfg.irf.horizon),
    })
}

fn innovation_bytes(v: &[f64]) -> Vec<u8> {
    v.iter().flat_map(|x| x.to_le_bytes()).collect()
}

pub fn simulate(cfg: &RunConfig, emit_survey: bool) -> anyhow::Result<Outcome> {
    let p = cfg.model_params();
    let sim = cfg.simulation;
    let modes = cfg.modes_or(vec![ExpectationMode::ThresholdAttention]);
    let rules = cfg.rules_or(&[PolicyRule::TaylorSmoothing]);
    let seeds = cfg.seeds();
    let (mu, md) = sim.switch.multipliers();

    let mut summary = Table::new(&[
        "mode",
        "rule",
        "seed",
        "welfare",
        "welfare_discounted",
        "sd_pi",
        "mean_pi",
        "freq_high",
    ]);
    let mut path = Table::new(&[
        "t",
        "mode",
        "rule",
        "seed",
        "pi",
        "x",
        "i",
        "expected_pi",
        "regime_high",
        "u",
        "rstar",
    ]);
    let mut meta = Vec::new();
    let window = &cfg.path_window;
    for &seed in &seeds {
        let innov = Innovations::generate(seed, sim.total());
        meta.push(json!({
            "seed": seed,
            "switch": sim.switch.as_str(),
            "cost_push_multiplier": mu,
            "demand_multiplier": md,
            "cost_push_sha256": sha256_hex(&innovation_bytes(&innov.cost_push)),
            "demand_sha256": sha256_hex(&innovation_bytes(&innov.demand)),
        }));
        for mode in &modes {
            for &rule in &rules {
                let run = simulate_with(mode, rule, &p, &innov, &sim)?;
                let s = &run.summary;
                summary.row([
                    mode.to_string(),
                    rule.to_string(),
                    seed.to_string(),
                    num(s.welfare),
                    num(s.welfare_discounted),
                    num(s.sd_pi),
                    num(s.mean_pi),
                    num(s.freq_high),
                ]);
                if seed != seeds[0] {
                    continue;
                }
                let kept = &run.path[sim.burn_in..];
                let start = window.offset.min(kept.len());
                let end = (window.offset + window.length).min(kept.len());
                for (k, o) in kept[start..end].iter().enumerate() {
                    path.row([
                        (start + k).to_string(),
                        mode.to_string(),
                        rule.to_string(),
                        seed.to_string(),
                        num(annualize(o.pi)),
                        num(o.x),
                        num(annualize(o.i)),
                        num(annualize(o.e_pi_next)),
                        u8::from(o.regime.is_high()).to_string(),
                        num(annualize(o.u)),
                        num(annualize(o.rstar)),
                    ]);
                }
            }
        }
    }
    let mut artifacts = Artifacts::new();
    artifacts.add("simulate_summary.csv", summary.into_bytes());
    artifacts.add("simulate_path.csv", path.into_bytes());
    artifacts.add("simulate_meta.jsonl", json_lines(&meta)?);
    if emit_survey {
        let s = synthetic_survey(&p, &cfg.survey, seeds[0])?;
        let mut t = Table::new(&["date", "expected_inflation_1y", "qoq_inflation"]);
        for (date, e, pi) in s.csv_rows() {
            t.row([date, num(e), num(pi)]);
        }
        artifacts.add("survey.csv", t.into_bytes());
    }
    Ok(Outcome {
        artifacts,
        summary: format!(
            "{} paths of {} periods ({} burn-in), switch {}",
            seeds.len() * modes.len() * rules.len(),
            sim.n_periods,
            sim.burn_in,
            sim.switch.as_str()
        ),
    })
}

pub fn statedep(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = cfg.model_params();
    let modes = cfg.modes_or(vec![
        ExpectationMode::ThresholdAttention,
        ExpectationMode::FixedAttention {
            gamma_pi: p.attention.gamma_pi_low,
        },
        ExpectationMode::FixedAttention {
            gamma_pi: p.attention.gamma_pi_high,
        },
        ExpectationMode::Fire,
    ]);
    let rules = cfg.rules_or(&[PolicyRule::TaylorSmoothing]);
    let mut table = Table::new(&["t", "scenario", "mp_only", "cp_only", "both", "interaction"]);
    let mut meta = Vec::new();
    for mode in &modes {
        for &rule in &rules {
            let r = state_dependency(mode, rule, &p, cfg.statedep.impact_each, cfg.statedep.horizon)
                .with_context(|| format!("state dependency for {mode} / {rule}"))?;
            let scenario = format!("{mode}|{rule}");
            for t in 0..r.interaction.len() {
                table.row([
                    t.to_string(),
                    scenario.clone(),
                    num(r.path_mp_only[t]),
                    num(r.path_cp_only[t]),
                    num(r.path_both[t]),
                    num(r.interaction[t]),
                ]);
            }
            meta.push(json!({
                "scenario": scenario,
                "cost_push_innovation": r.cost_push_innovation,
                "monetary_innovation": r.monetary_innovation,
                "peak_interaction": r.peak_interaction,
                "peak_period": r.peak_period,
            }));
        }
    }
    let peaks: Vec<String> = meta
        .iter()
        .map(|m| {
            format!(
                "{} {}",
                m["scenario"].as_str().unwrap_or_default(),
                num(m["peak_interaction"].as_f64().unwrap_or(f64::NAN))
            )
        })
        .collect();
    let mut artifacts = Artifacts::new();
    artifacts.add("statedep.csv", table.into_bytes());
    artifacts.add("statedep_meta.jsonl", json_lines(&meta)?);
    Ok(Outcome {
        artifacts,
        summary: format!("interaction peaks (pp): {}", peaks.join("; ")),
    })
}

pub fn welfare(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = cfg.model_params();
    let modes = cfg.modes_or(all_modes(&p));
    let rules = cfg.rules_or(&PolicyRule::ALL);
    let seeds = cfg.seeds();
    let grid = welfare_table(&modes, &rules, &p, &seeds, &cfg.simulation)?;
    let mut table = Table::new(&[
        "mode",
        "rule",
        "welfare",
        "sd_pi",
        "mean_pi",
        "freq_high",
        "seed_count",
        "welfare_discounted",
    ]);
    for c in &grid.cells {
        let s = &c.summary;
        table.row([
            c.mode.to_string(),
            c.rule.to_string(),
            num(s.welfare),
            num(s.sd_pi),
            num(s.mean_pi),
            num(s.freq_high),
            seeds.len().to_string(),
            num(s.welfare_discounted),
        ]);
    }
    let mut artifacts = Artifacts::new();
    artifacts.add("welfare_grid.csv", table.into_bytes());
    Ok(Outcome {
        artifacts,
        summary: format!("{} cells over {} seeds", grid.cells.len(), seeds.len()),
    })
}

fn asad_rows(table: &mut Table, case: &str, curves: &[AsAdCurves]) {
    for c in curves {
        let (pi, x) = c.equilibrium;
        let lines = [
            ("as", Some(c.as_curve)),
            ("ad", Some(c.ad_curve)),
            ("as_shifted", c.as_shifted),
            ("ad_shifted", c.ad_shifted),
        ];
        for (name, line) in lines {
            let Some(line) = line else { continue };
            table.row([
                case.to_string(),
                c.period.to_string(),
                name.to_string(),
                num(line.slope),
                num(line.intercept),
                num(pi),
                num(x),
            ]);
        }
    }
}

#[derive(Serialize)]
struct AsAdSummary {
    case: &'static str,
    inflation_growth_1_to_2: f64,
    regimes: Vec<String>,
}

pub fn asad(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let with = asad_example(&cfg.asad)?;
    let without = asad_example(&cfg.asad.without_switch())?;
    let mut table = Table::new(&["case", "period", "curve", "slope", "intercept", "eq_pi", "eq_x"]);
    asad_rows(&mut table, "switch", &with);
    asad_rows(&mut table, "no-switch", &without);
    let meta = [("switch", &with), ("no-switch", &without)].map(|(case, c)| AsAdSummary {
        case,
        inflation_growth_1_to_2: inflation_growth_1_to_2(c),
        regimes: c.iter().map(|k| k.regime.to_string()).collect(),
    });
    let mut artifacts = Artifacts::new();
    artifacts.add("asad.csv", table.into_bytes());
    artifacts.add("asad_meta.jsonl", json_lines(&meta)?);
    Ok(Outcome {
        artifacts,
        summary: format!(
            "inflation growth period 1 to 2: {}% with switch, {}% without",
            num(100.0 * meta[0].inflation_growth_1_to_2),
            num(100.0 * meta[1].inflation_growth_1_to_2)
        ),
    })
}

pub fn calibrate(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = cfg.model_params();
    let rule = cfg.rules_or(&[PolicyRule::TaylorSmoothing])[0];
    let seeds = cfg.seeds();
    let r = calibrate_shock_volatility(cfg.calibrate.target, &p, rule, &seeds, &cfg.simulation)?;
    let mut table = Table::new(&[
        "rule",
        "target",
        "sigma",
        "freq_high",
        "iterations",
        "seed_count",
        "n_periods",
    ]);
    table.row([
        rule.to_string(),
        num(r.target),
        num(r.sigma),
        num(r.freq_high),
        r.iterations.to_string(),
        seeds.len().to_string(),
        cfg.simulation.n_periods.to_string(),
    ]);
    let mut artifacts = Artifacts::new();
    artifacts.add("calibrate.csv", table.into_bytes());
    Ok(Outcome {
        artifacts,
        summary: format!(
            "sigma {} gives freq_high {} (target {})",
            num(r.sigma),
            num(r.freq_high),
            num(r.target)
        ),
    })
}

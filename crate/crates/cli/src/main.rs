//! `attn`: survey estimation and model experiments for inflation attention
//! thresholds.

mod commands;
mod config;
mod output;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use attn_core::experiments::irf::ShockKind;
use attn_core::experiments::ShockSwitch;
use attn_core::model::{ExpectationMode, PolicyRule};
use clap::{Parser, Subcommand, ValueEnum};

use config::{all_modes, parse_list, RunConfig};

const OUT_ENV: &str = "ATTN_OUT_DIR";
const DEFAULT_OUT: &str = "out";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SwitchArg {
    Both,
    SupplyOnly,
    DemandOnly,
}

impl From<SwitchArg> for ShockSwitch {
    fn from(s: SwitchArg) -> Self {
        match s {
            SwitchArg::Both => ShockSwitch::Both,
            SwitchArg::SupplyOnly => ShockSwitch::SupplyOnly,
            SwitchArg::DemandOnly => ShockSwitch::DemandOnly,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "attn",
    version,
    about = "Inflation attention thresholds: estimation and model experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// First seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of consecutive seeds starting at --seed.
    #[arg(long, global = true)]
    seed_count: Option<usize>,

    /// Output directory [default: $ATTN_OUT_DIR, then ./out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Comma-separated modes (threshold, fire, fixed:<gamma>) or `all`.
    #[arg(long, global = true)]
    modes: Option<String>,

    /// Comma-separated policy rules or `all`.
    #[arg(long, global = true)]
    rules: Option<String>,

    /// Which shock processes are active in simulations.
    #[arg(long, global = true, value_enum)]
    switch: Option<SwitchArg>,

    /// Simulated periods kept after burn-in.
    #[arg(long, global = true)]
    periods: Option<usize>,

    #[arg(long, global = true)]
    burn_in: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Threshold, rolling-window and within-regime regressions on a survey panel.
    Estimate {
        /// Panel CSV (`date,expected_inflation_1y,qoq_inflation` or `...,cpi_index`).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        trim: Option<f64>,
        #[arg(long)]
        window_len: Option<usize>,
    },
    /// Impulse responses to a single shock.
    Irf {
        /// cost-push, demand or monetary.
        #[arg(long)]
        shock: Option<ShockKind>,
        /// Impact on inflation, annualized pp.
        #[arg(long, allow_hyphen_values = true)]
        impact: Option<f64>,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Stochastic simulations with per-period paths.
    Simulate {
        /// Also write a synthetic survey panel (`survey.csv`) for the first seed.
        #[arg(long)]
        emit_survey: bool,
        /// First kept period of the written path window.
        #[arg(long)]
        window_offset: Option<usize>,
        #[arg(long)]
        window_length: Option<usize>,
    },
    /// Interaction of a cost-push and an expansionary monetary shock.
    Statedep {
        /// Impact of each isolated shock, annualized pp.
        #[arg(long)]
        impact_each: Option<f64>,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Welfare, volatility and regime frequency across modes and rules.
    Welfare,
    /// Stylized AS/AD example.
    Asad,
    /// Shock volatility matching a target high-regime frequency.
    Calibrate {
        #[arg(long)]
        target: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Estimate { .. } => "estimate",
            Command::Irf { .. } => "irf",
            Command::Simulate { .. } => "simulate",
            Command::Statedep { .. } => "statedep",
            Command::Welfare => "welfare",
            Command::Asad => "asad",
            Command::Calibrate { .. } => "calibrate",
        }
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.seed_count {
        cfg.seed_count = n;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = Some(out.clone());
    }
    let params = cfg.model_params();
    if let Some(m) = &cli.modes {
        cfg.modes = Some(parse_list::<ExpectationMode>(m, all_modes(&params))?);
    }
    if let Some(r) = &cli.rules {
        cfg.rules = Some(parse_list::<PolicyRule>(r, PolicyRule::ALL.to_vec())?);
    }
    if let Some(s) = cli.switch {
        cfg.simulation.switch = s.into();
    }
    if let Some(n) = cli.periods {
        cfg.simulation.n_periods = n;
    }
    if let Some(b) = cli.burn_in {
        cfg.simulation.burn_in = b;
    }
    match &cli.command {
        Command::Estimate {
            input,
            trim,
            window_len,
        } => {
            if let Some(i) = input {
                cfg.estimate.input = Some(i.clone());
            }
            if let Some(t) = trim {
                cfg.estimate.trim = *t;
            }
            if let Some(w) = window_len {
                cfg.estimate.window_len = *w;
            }
        }
        Command::Irf { shock, impact, horizon } => {
            if let Some(s) = shock {
                cfg.irf.shock = *s;
            }
            if let Some(i) = impact {
                cfg.irf.impact = *i;
            }
            if let Some(h) = horizon {
                cfg.irf.horizon = *h;
            }
        }
        Command::Simulate {
            window_offset,
            window_length,
            ..
        } => {
            if let Some(o) = window_offset {
                cfg.path_window.offset = *o;
            }
            if let Some(l) = window_length {
                cfg.path_window.length = *l;
            }
        }
        Command::Statedep { impact_each, horizon } => {
            if let Some(i) = impact_each {
                cfg.statedep.impact_each = *i;
            }
            if let Some(h) = horizon {
                cfg.statedep.horizon = *h;
            }
        }
        Command::Calibrate { target } => {
            if let Some(t) = target {
                cfg.calibrate.target = *t;
            }
        }
        Command::Welfare | Command::Asad => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let Format::Csv = cli.format;
    let cfg = resolve(cli)?;
    let outcome = match &cli.command {
        Command::Estimate { .. } => commands::estimate(&cfg)?,
        Command::Irf { .. } => commands::irf(&cfg)?,
        Command::Simulate { emit_survey, .. } => commands::simulate(&cfg, *emit_survey)?,
        Command::Statedep { .. } => commands::statedep(&cfg)?,
        Command::Welfare => commands::welfare(&cfg)?,
        Command::Asad => commands::asad(&cfg)?,
        Command::Calibrate { .. } => commands::calibrate(&cfg)?,
    };
    let dir = cfg
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    // The output location is not part of the experiment.
    let toml = RunConfig {
        out_dir: None,
        ..cfg.clone()
    }
    .to_toml()?;
    let written = outcome.artifacts.write(&dir, cli.command.name(), &cfg.seeds(), &toml)?;
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{}", outcome.summary);
    for path in written {
        let _ = writeln!(stdout, "wrote {}", path.display());
    }
    Ok(())
}

fn error_kind(err: &anyhow::Error) -> (&'static str, u8) {
    use attn_core::Error as E;
    let Some(e) = err.chain().find_map(|c| c.downcast_ref::<E>()) else {
        if err
            .chain()
            .any(|c| c.is::<toml::de::Error>() || c.is::<std::io::Error>())
        {
            return ("input", 2);
        }
        return ("usage", 2);
    };
    match e {
        E::Parse { .. } => ("parse", 2),
        E::Io(_) => ("io", 2),
        E::Csv(_) => ("csv", 2),
        E::InsufficientData(_) => ("insufficient-data", 2),
        E::InvalidParameter(_) => ("invalid-parameter", 2),
        E::InsufficientRegimeVariation(_) => ("insufficient-regime-variation", 1),
        E::SingularDesign(_) => ("singular-design", 1),
        E::IndeterminateEquilibrium { .. } => ("indeterminate-equilibrium", 1),
        E::NoStableSolution(_) => ("no-stable-solution", 1),
        E::ExplosivePath { .. } => ("explosive-path", 1),
        E::Bisection(_) => ("bisection", 1),
        _ => ("model", 1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = error_kind(&err);
            eprintln!("error[{kind}]: {err:#}");
            ExitCode::from(code)
        }
    }
}

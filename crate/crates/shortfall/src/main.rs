//! Command-line interface: solve, expand, estimate, simulate.
//!
//! Every subcommand is a pure function of its inputs: repeated invocations
//! produce identical bytes, and `--threads` changes wall time only.
//! Exit codes: 0 success, 2 domain/input error, 3 numerical failure.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shortfall::asymptotics::{first_order, second_order};
use shortfall::config::{self, Experiment, ModelConfig, RiskConfig};
use shortfall::error::{Error, Result};
use shortfall::estimation::{shortfall_estimate, SortedSample};
use shortfall::risk::RiskSpec;
use shortfall::simulation::{
    run_expansion_compare, run_mse_sweep, write_expansion_csv, write_mse_csv,
    ExpansionCompareConfig,
};
use shortfall::solver::solve_x_tau;
use shortfall::Distortion;

#[derive(Parser)]
#[command(name = "shortfall", version, about = "Generalized shortfall risk measures for heavy-tailed models")]
struct Cli {
    /// Worker threads for the simulation pool (output bytes are unaffected).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Master seed override for simulation experiments.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the defining equation exactly for x_tau.
    Solve(SolveArgs),
    /// Evaluate the asymptotic expansions (single tau or comparison table).
    Expand(ExpandArgs),
    /// Estimate x_tau from a one-column CSV of observations.
    Estimate(EstimateArgs),
    /// Run a Monte-Carlo experiment described by a TOML config file.
    Simulate(SimulateArgs),
}

/// Model and risk selection shared by solve and expand; a config file can
/// provide the values, inline flags override it.
#[derive(Args, Clone)]
struct SpecArgs {
    /// TOML file with [model] and [risk] sections.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Model name: pareto, gpd, frechet or burr.
    #[arg(long)]
    model: Option<String>,
    /// Tail index gamma (> 0).
    #[arg(long)]
    gamma: Option<f64>,
    /// GPD scale theta (> 0).
    #[arg(long)]
    theta: Option<f64>,
    /// Burr second-order parameter rho (< 0).
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,

    /// Risk kind: expectile, gen-expectile or lp-quantile.
    #[arg(long)]
    risk: Option<String>,
    /// TVaR level p of h1 (gen-expectile).
    #[arg(long)]
    p: Option<f64>,
    /// TVaR level q of h2 (gen-expectile; defaults to p).
    #[arg(long)]
    q: Option<f64>,
    /// Exponent of the Lp-quantile.
    #[arg(long)]
    power: Option<f64>,
}

impl SpecArgs {
    fn build(&self) -> Result<RiskSpec> {
        let (mut model_cfg, mut risk_cfg) = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                let file = config::parse_spec(&text)?;
                (Some(file.model), Some(file.risk))
            }
            None => (None, None),
        };

        // Inline flags override file values key by key.
        if let Some(name) = &self.model {
            match &mut model_cfg {
                Some(m) if &m.name == name => {}
                Some(m) => {
                    m.name = name.clone();
                    m.theta = None;
                    m.rho = None;
                }
                None => {
                    model_cfg = Some(ModelConfig {
                        name: name.clone(),
                        gamma: f64::NAN,
                        theta: None,
                        rho: None,
                    })
                }
            }
        }
        let mut model_cfg = model_cfg
            .ok_or_else(|| Error::Config("missing required flag --model (or --config)".into()))?;
        if let Some(g) = self.gamma {
            model_cfg.gamma = g;
        }
        if !model_cfg.gamma.is_finite() {
            return Err(Error::Config("missing required flag --gamma".into()));
        }
        if let Some(t) = self.theta {
            model_cfg.theta = Some(t);
        }
        if let Some(r) = self.rho {
            model_cfg.rho = Some(r);
        }

        if let Some(kind) = &self.risk {
            match &mut risk_cfg {
                Some(r) if &r.kind == kind => {}
                Some(r) => {
                    r.kind = kind.clone();
                    r.p = None;
                    r.q = None;
                    r.power = None;
                }
                None => {
                    risk_cfg =
                        Some(RiskConfig { kind: kind.clone(), p: None, q: None, power: None })
                }
            }
        }
        let mut risk_cfg = risk_cfg
            .ok_or_else(|| Error::Config("missing required flag --risk (or --config)".into()))?;
        if let Some(p) = self.p {
            risk_cfg.p = Some(p);
        }
        if let Some(q) = self.q {
            risk_cfg.q = Some(q);
        }
        if let Some(power) = self.power {
            risk_cfg.power = Some(power);
        }

        risk_cfg.build(model_cfg.build()?)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Confidence level in (0, 1).
    #[arg(long)]
    tau: f64,
    /// Root tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Single confidence level; omitted means the full comparison table.
    #[arg(long)]
    tau: Option<f64>,
    /// Expansion order for single-tau output (1 or 2).
    #[arg(long, default_value_t = 2)]
    order: u8,
}

#[derive(Args)]
struct EstimateArgs {
    /// One-column CSV of observations.
    data: PathBuf,
    /// Number of top order statistics.
    #[arg(long)]
    k: usize,
    /// Confidence level in (0, 1).
    #[arg(long)]
    tau: f64,
    /// Utility index alpha of the u1 = u2 regime.
    #[arg(long)]
    alpha: f64,
    /// Distortion of the confidence level: identity or tvar.
    #[arg(long, default_value = "identity")]
    h1: String,
    /// TVaR level p when --h1 tvar.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment description ([model], [risk], [experiment] sections).
    config: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: could not size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Expand(args) => cmd_expand(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Simulate(args) => cmd_simulate(args, cli.seed),
    };

    match result {
        Ok(output) => {
            if let Err(e) = write_output(&cli.out, &output) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2))
        }
    }
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes),
        None => io::stdout().write_all(bytes),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<Vec<u8>> {
    let spec = args.spec.build()?;
    let report = solve_x_tau(&spec, args.tau, args.tol)?;
    let mut line = serde_json::to_vec(&report).expect("report serializes");
    line.push(b'\n');
    Ok(line)
}

fn cmd_expand(args: &ExpandArgs) -> Result<Vec<u8>> {
    let spec = args.spec.build()?;
    match args.tau {
        Some(tau) => {
            let x = match args.order {
                1 => first_order(&spec, tau)?,
                2 => second_order(&spec, tau)?,
                other => {
                    return Err(Error::Config(format!(
                        "expansion order must be 1 or 2, got {other}"
                    )))
                }
            };
            let mut line = serde_json::to_vec(&serde_json::json!({
                "tau": tau,
                "order": args.order,
                "x": x,
            }))
            .expect("json serializes");
            line.push(b'\n');
            Ok(line)
        }
        None => {
            let rows = run_expansion_compare(&ExpansionCompareConfig { spec, taus: Vec::new() })?;
            let mut buf = Vec::new();
            write_expansion_csv(&rows, &mut buf)?;
            Ok(buf)
        }
    }
}

fn cmd_estimate(args: &EstimateArgs) -> Result<Vec<u8>> {
    let h1 = match args.h1.as_str() {
        "identity" => Distortion::Identity,
        "tvar" => Distortion::tvar(
            args.p.ok_or_else(|| Error::Config("--h1 tvar requires --p".into()))?,
        )?,
        other => {
            return Err(Error::Config(format!(
                "unknown distortion `{other}` (expected identity or tvar)"
            )))
        }
    };
    let file = fs::File::open(&args.data)?;
    let mut values = Vec::new();
    for (idx, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.parse::<f64>() {
            Ok(v) => values.push(v),
            // A single non-numeric first line is treated as a header.
            Err(_) if idx == 0 => continue,
            Err(_) => {
                return Err(Error::Config(format!(
                    "line {} of {} is not a number: {trimmed:?}",
                    idx + 1,
                    args.data.display()
                )))
            }
        }
    }
    let sample = SortedSample::from_unsorted(values)?;
    let result = shortfall_estimate(&sample, args.k, args.tau, args.alpha, &h1)?;
    let mut line = serde_json::to_vec(&result).expect("result serializes");
    line.push(b'\n');
    Ok(line)
}

fn cmd_simulate(args: &SimulateArgs, seed: Option<u64>) -> Result<Vec<u8>> {
    let text = fs::read_to_string(&args.config)?;
    let experiment = config::parse_experiment(&text)?;
    let mut buf = Vec::new();
    match experiment {
        Experiment::ExpansionCompare(cfg) => {
            let rows = run_expansion_compare(&cfg)?;
            write_expansion_csv(&rows, &mut buf)?;
        }
        Experiment::MseSweep(mut cfg) => {
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            let rows = run_mse_sweep(&cfg)?;
            write_mse_csv(&rows, &mut buf)?;
        }
    }
    Ok(buf)
}

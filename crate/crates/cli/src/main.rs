mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use signed_beliefs::dynamics::Rule;
use signed_beliefs::experiments::InitialBeliefs;

use crate::config::{merge, parse_asym, parse_grid, parse_list, read_config_file, RunConfig};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "signed-beliefs", version, about = "Opinion dynamics over signed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Strong and weak structural balance of a graph.
    Balance,
    /// Spectral thresholds and convergence verdicts.
    Analyze,
    /// One trajectory, written as CSV.
    Simulate,
    /// Monte Carlo sweep over a beta grid (or an ER negative-edge grid).
    Sweep,
    /// Repeated trials at one parameter point, with outcome summary.
    Montecarlo,
    /// Finite-time schedules on hypercubes.
    #[command(subcommand)]
    Hypercube(HypercubeCommand),
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum HypercubeCommand {
    /// Emit the recursive pair schedule for an m-cube.
    Gen,
    /// Replay a schedule on the averaging matrices and compare with U.
    Verify,
    /// Necessary conditions and a cube embedding for a graph.
    Check,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Balance => "balance",
            Command::Analyze => "analyze",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Montecarlo => "montecarlo",
            Command::Hypercube(HypercubeCommand::Gen) => "hypercube gen",
            Command::Hypercube(HypercubeCommand::Verify) => "hypercube verify",
            Command::Hypercube(HypercubeCommand::Check) => "hypercube check",
        }
    }
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// JSON config (or a run manifest); its keys override flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Graph file: header `n m`, then one `u v +|-` line per edge.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// uniform-neighbor, complete, ring-half, or a CSV probability matrix.
    #[arg(long, global = true)]
    selection: Option<String>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// symmetric, asymmetric-constrained or altafini.
    #[arg(long, global = true, value_parser = parse_rule)]
    rule: Option<Rule>,
    /// Belief bound A for the constrained rule.
    #[arg(long, global = true)]
    bound: Option<f64>,
    /// Branch probabilities a,b,c of the constrained rule.
    #[arg(long, global = true, value_parser = parse_asym)]
    asym: Option<signed_beliefs::Asymmetry>,
    /// Explicit initial beliefs, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "x0_range")]
    x0: Option<String>,
    /// Uniform initial beliefs on low,high.
    #[arg(long, global = true, allow_hyphen_values = true)]
    x0_range: Option<String>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    horizon: Option<u64>,
    #[arg(long, global = true)]
    record_every: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Spread below which a run counts as converged.
    #[arg(long, global = true)]
    converge_below: Option<f64>,
    /// Spread above which a run counts as diverged.
    #[arg(long, global = true)]
    diverge_above: Option<f64>,
    /// Beta grid: `b1,b2,...` or `start:stop:count`.
    #[arg(long, global = true)]
    betas: Option<String>,
    /// Negative-edge probability grid for an ER sweep on K_n.
    #[arg(long, global = true)]
    p_grid: Option<String>,
    /// Vertex count of the ER sweep.
    #[arg(long, global = true)]
    er_n: Option<usize>,
    /// Hypercube dimension.
    #[arg(short = 'm', long, global = true)]
    dimension: Option<u32>,
    /// Hypercube labeling, vertex for each code, comma separated.
    #[arg(long, global = true)]
    labeling: Option<String>,
    /// Schedule file for `hypercube verify`.
    #[arg(long, global = true)]
    schedule: Option<PathBuf>,
    /// Vertex count for `hypercube verify` when no graph is given.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Fail with exit code 3 if the positive subgraph is disconnected.
    #[arg(long, global = true)]
    require_connected: bool,
    /// Output path; a manifest is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    serde_json::from_value(Value::String(s.into())).map_err(|_| format!("unknown rule '{s}'"))
}

impl Flags {
    /// Only the flags that were given, as config keys.
    fn overrides(&self) -> Result<Value, CliError> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.into(), v);
        };
        let input = |e: String| CliError::Input(e);
        if let Some(v) = &self.graph {
            put("graph", json!(v));
        }
        if let Some(v) = &self.selection {
            put("selection", json!(v));
        }
        if let Some(v) = self.alpha {
            put("alpha", json!(v));
        }
        if let Some(v) = self.beta {
            put("beta", json!(v));
        }
        if let Some(v) = self.rule {
            put("rule", json!(v));
        }
        if let Some(v) = self.bound {
            put("bound", json!(v));
        }
        if let Some(v) = self.asym {
            put("asym", json!(v));
        }
        if let Some(v) = &self.x0 {
            put("x0", json!(InitialBeliefs::Explicit(parse_list(v).map_err(input)?)));
        }
        if let Some(v) = &self.x0_range {
            match parse_list::<f64>(v).map_err(input)?[..] {
                [low, high] => put("x0", json!(InitialBeliefs::Uniform { low, high })),
                _ => return Err(CliError::Input("--x0-range expects low,high".into())),
            }
        }
        if let Some(v) = self.trials {
            put("trials", json!(v));
        }
        if let Some(v) = self.horizon {
            put("horizon", json!(v));
        }
        if let Some(v) = self.record_every {
            put("record_every", json!(v));
        }
        if let Some(v) = self.seed {
            put("seed", json!(v));
        }
        match (self.converge_below, self.diverge_above) {
            (None, None) => {}
            (Some(c), Some(d)) => put("stop", json!({"converge_below": c, "diverge_above": d})),
            _ => return Err(CliError::Input("--converge-below and --diverge-above go together".into())),
        }
        if let Some(v) = &self.betas {
            put("betas", json!(parse_grid(v).map_err(input)?));
        }
        if let Some(v) = &self.p_grid {
            put("p_grid", json!(parse_grid(v).map_err(input)?));
        }
        if let Some(v) = self.er_n {
            put("er_n", json!(v));
        }
        if let Some(v) = self.dimension {
            put("dimension", json!(v));
        }
        if let Some(v) = &self.labeling {
            put("labeling", json!(parse_list::<usize>(v).map_err(input)?));
        }
        if let Some(v) = &self.schedule {
            put("schedule", json!(v));
        }
        if let Some(v) = self.n {
            put("n", json!(v));
        }
        if self.require_connected {
            put("require_connected", json!(true));
        }
        if let Some(v) = &self.out {
            put("out", json!(v));
        }
        Ok(Value::Object(m))
    }

    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut value = serde_json::to_value(RunConfig::default()).expect("default config serializes");
        merge(&mut value, self.overrides()?);
        if let Some(path) = &self.config {
            merge(&mut value, read_config_file(path)?);
        }
        RunConfig::from_value(value)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = cli.flags.resolve().and_then(|cfg| commands::run(&cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use signed_beliefs::dynamics::{simulate, SimulationOptions, StopRule};
use signed_beliefs::experiments::{
    clustering_check, no_survivor_check, oscillation_check, run_trials, sweep_beta, sweep_er, Fractions, TrialConfig,
    TrialOutcome,
};
use signed_beliefs::graph::balance_verdict;
use signed_beliefs::hypercube::{
    finite_time_necessary_checks, find_hypercube_labeling, hypercube_schedule, verify_schedule, PairSchedule,
    LABELING_SEARCH_MAX_DIM,
};
use signed_beliefs::{RngStream, SignedGraph, SpectralModel};

use crate::config::{RunConfig, CONFIG_VERSION};
use crate::error::CliError;
use crate::{Command, HypercubeCommand};

pub fn run(command: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    let name = command.name();
    match command {
        Command::Balance => balance(name, cfg),
        Command::Analyze => analyze(name, cfg),
        Command::Simulate => simulate_one(name, cfg),
        Command::Sweep => sweep(name, cfg),
        Command::Montecarlo => montecarlo(name, cfg),
        Command::Hypercube(HypercubeCommand::Gen) => hypercube_gen(name, cfg),
        Command::Hypercube(HypercubeCommand::Verify) => hypercube_verify(name, cfg),
        Command::Hypercube(HypercubeCommand::Check) => hypercube_check(name, cfg),
    }
}

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

/// Writes `primary` to `--out` (plus any extra files beside it) and the
/// run manifest, or prints `primary` when no output path is set.
fn emit(command: &str, cfg: &RunConfig, primary: &str, extras: &[(&str, String)]) -> Result<(), CliError> {
    let Some(out) = &cfg.out else {
        print!("{primary}");
        return Ok(());
    };
    write_file(out, primary)?;
    let mut outputs = vec![out.clone()];
    for (suffix, contents) in extras {
        let path = sibling(out, suffix);
        write_file(&path, contents)?;
        outputs.push(path);
    }
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": CONFIG_VERSION,
        "command": command,
        "seed": cfg.seed,
        "rng": "chacha8, stream = trial index",
        "config": cfg,
        "outputs": outputs,
    });
    write_file(&sibling(out, ".manifest.json"), &pretty(&manifest))
}

fn model_inputs(cfg: &RunConfig) -> Result<(SignedGraph, signed_beliefs::SelectionModel), CliError> {
    let g = cfg.load_graph()?;
    if cfg.require_connected && !g.is_positive_connected() {
        return Err(CliError::Precondition("positive subgraph is not connected".into()));
    }
    let sel = cfg.selection_for(&g)?;
    Ok((g, sel))
}

fn trial_config(cfg: &RunConfig) -> Result<TrialConfig, CliError> {
    let (g, sel) = model_inputs(cfg)?;
    let mut tc = TrialConfig::new(g, sel, cfg.params()?, cfg.initial(), cfg.horizon);
    tc.record_every = cfg.record_every;
    tc.stop = cfg.stop;
    Ok(tc)
}

fn balance(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let v = balance_verdict(&cfg.load_graph()?)?;
    let mut report = json!({
        "strong": v.strong.as_ref().map(|(a, b)| vec![a.clone(), b.clone()]),
        "weak": v.weak,
    });
    if let Some(w) = &v.strong_witness {
        report["witness"] = json!(w);
    }
    emit(command, cfg, &pretty(&report), &[])
}

fn analyze(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let (g, sel) = model_inputs(cfg)?;
    let report = SpectralModel::new(&g, &sel)?.analyze(cfg.alpha, cfg.beta)?;
    emit(command, cfg, &pretty(&report), &[])?;
    if !report.lambda_star_converged {
        return Err(CliError::NonConvergence(format!(
            "lambda_star power iteration stopped after {} iterations",
            report.lambda_star_iterations
        )));
    }
    Ok(())
}

fn simulate_one(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let (g, sel) = model_inputs(cfg)?;
    let params = cfg.params()?;
    let mut rng = RngStream::substream(cfg.seed, 0);
    let x0 = cfg.initial().draw(g.n(), &mut rng)?;
    let options = SimulationOptions {
        horizon: cfg.horizon,
        record_every: cfg.record_every,
        stop: cfg.stop.unwrap_or_else(|| StopRule::defaults_for(&x0)),
        record_states: true,
    };
    let stats = simulate(&g, &sel, &params, &x0, &options, &mut rng)?;
    log::info!("stopped at event {} ({:?}), max spread {}", stats.events, stats.stop, stats.max_spread);
    emit(command, cfg, &stats.to_csv(), &[])
}

fn sweep(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let result = if let Some(p_grid) = &cfg.p_grid {
        let n = cfg.er_n.ok_or_else(|| CliError::Input("an ER sweep needs --er-n".into()))?;
        sweep_er(n, p_grid, &cfg.params()?, &cfg.initial(), cfg.horizon, cfg.trials, cfg.seed)?
    } else {
        let grid = cfg.betas.as_ref().ok_or_else(|| CliError::Input("sweep needs --betas or --p-grid".into()))?;
        sweep_beta(&trial_config(cfg)?, grid, cfg.trials, cfg.seed)?
    };
    emit(command, cfg, &result.to_csv(), &[])
}

fn trials_csv(outcomes: &[TrialOutcome]) -> String {
    let mut out = String::from("index,classification,stop_event,max_spread,min_pair_max\n");
    for o in outcomes {
        let class = serde_json::to_value(o.classification).expect("classification serializes");
        writeln!(out, "{},{},{},{},{}", o.index, class.as_str().unwrap_or(""), o.stop_event, o.max_spread, o.min_pair_max())
            .unwrap();
    }
    out
}

fn montecarlo(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let tc = trial_config(cfg)?;
    let outcomes = run_trials(&tc, cfg.trials, cfg.seed)?;
    let mut summary = json!({
        "trials": outcomes.len(),
        "fractions": Fractions::of(&outcomes),
        "no_survivor": no_survivor_check(&outcomes).ok(),
    });
    if tc.params.is_bounded() {
        let verdict = balance_verdict(&tc.graph).ok();
        summary["clustering"] = json!(clustering_check(&outcomes, verdict.as_ref()).ok());
        summary["oscillation"] = json!(oscillation_check(&outcomes));
    }
    emit(command, cfg, &pretty(&summary), &[(".trials.csv", trials_csv(&outcomes))])
}

fn dimension(cfg: &RunConfig) -> Result<u32, CliError> {
    cfg.dimension.ok_or_else(|| CliError::Input("hypercube commands need -m/--dimension".into()))
}

fn hypercube_gen(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let m = dimension(cfg)?;
    if m >= usize::BITS {
        return Err(CliError::Input(format!("dimension {m} is too large")));
    }
    let (g, labeling) = match &cfg.graph {
        Some(_) => {
            let g = cfg.load_graph()?;
            let labeling = match &cfg.labeling {
                Some(l) => l.clone(),
                None => find_hypercube_labeling(&g, m)?
                    .ok_or_else(|| CliError::Precondition(format!("no {m}-cube in the positive subgraph")))?,
            };
            (g, labeling)
        }
        None => (SignedGraph::hypercube(m), cfg.labeling.clone().unwrap_or_else(|| (0..1usize << m).collect())),
    };
    let schedule = hypercube_schedule(&g, m, &labeling)?;
    emit(command, cfg, &schedule.to_text(), &[])
}

fn hypercube_verify(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg.schedule.as_ref().ok_or_else(|| CliError::Input("hypercube verify needs --schedule".into()))?;
    let schedule = PairSchedule::load(path)?;
    let n = match &cfg.graph {
        Some(_) => {
            let g = cfg.load_graph()?;
            schedule.check_against(&g)?;
            g.n()
        }
        None => cfg
            .n
            .or_else(|| schedule.pairs.iter().map(|&(i, j)| i.max(j) + 1).max())
            .ok_or_else(|| CliError::Input("empty schedule; pass --n".into()))?,
    };
    let v = verify_schedule(&schedule, n, cfg.alpha)?;
    let report = json!({"pass": v.pass, "residual": v.residual, "length": schedule.len(), "n": n, "alpha": cfg.alpha});
    emit(command, cfg, &pretty(&report), &[])?;
    if !v.pass {
        return Err(CliError::CheckFailed(format!("residual {:e} exceeds tolerance", v.residual)));
    }
    Ok(())
}

fn hypercube_check(command: &str, cfg: &RunConfig) -> Result<(), CliError> {
    let g = cfg.load_graph()?;
    let report = finite_time_necessary_checks(&g, cfg.alpha)?;
    let m = g.n().trailing_zeros();
    let labeling = if report.n_is_power_of_two && m <= LABELING_SEARCH_MAX_DIM {
        json!(find_hypercube_labeling(&g, m)?)
    } else {
        Value::Null
    };
    let mut out = serde_json::to_value(report).expect("report serializes");
    out["dimension"] = if report.n_is_power_of_two { json!(m) } else { Value::Null };
    out["labeling"] = labeling;
    emit(command, cfg, &pretty(&out), &[])
}

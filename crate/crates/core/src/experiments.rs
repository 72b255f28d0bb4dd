//! Monte Carlo harness: seeded trials, outcome classification, sweeps, and
//! the empirical checks for divergence, clustering and oscillation.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{inf_norm, simulate, Rule, SimulationOptions, StopReason, StopRule, TrajectoryStats, UpdateParams};
use crate::error::{Error, Result};
use crate::graph::{BalanceVerdict, Sign, SignedGraph};
use crate::numerics::BISECTION_TOL;
use crate::selection::{make_selection, RngStream, SelectionKind, SelectionModel};
use crate::spectral::SpectralModel;

/// Fraction of the horizon an unchanged cluster assignment must cover.
pub const CLUSTER_WINDOW_FRACTION: f64 = 0.1;
/// Band entries per side needed to call a trial oscillating.
pub const OSCILLATION_MIN_ENTRIES: u64 = 2;
/// Survivor threshold factor: `S = 100 * ||x0||_inf`.
pub const SURVIVOR_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialBeliefs {
    Explicit(Vec<f64>),
    /// Independent uniform draws per trial.
    Uniform { low: f64, high: f64 },
}

impl InitialBeliefs {
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            InitialBeliefs::Explicit(x) if x.len() == n => Ok(x.clone()),
            InitialBeliefs::Explicit(x) => {
                Err(Error::InvalidParams(format!("x0 has {} entries, graph has {n} vertices", x.len())))
            }
            &InitialBeliefs::Uniform { low, high } => {
                if !(low <= high) || !low.is_finite() || !high.is_finite() {
                    return Err(Error::InvalidParams(format!("invalid uniform range [{low}, {high}]")));
                }
                Ok((0..n).map(|_| if low == high { low } else { rng.random_range(low..high) }).collect())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub graph: SignedGraph,
    pub selection: SelectionModel,
    pub params: UpdateParams,
    pub initial: InitialBeliefs,
    pub horizon: u64,
    pub record_every: u64,
    /// `None` uses [`StopRule::defaults_for`] on each trial's `x0`.
    pub stop: Option<StopRule>,
}

impl TrialConfig {
    pub fn new(graph: SignedGraph, selection: SelectionModel, params: UpdateParams, initial: InitialBeliefs, horizon: u64) -> Self {
        TrialConfig { graph, selection, params, initial, horizon, record_every: horizon.max(1), stop: None }
    }

    /// Builds the selection from `kind`.
    pub fn with_kind(
        graph: SignedGraph,
        kind: &SelectionKind,
        params: UpdateParams,
        initial: InitialBeliefs,
        horizon: u64,
    ) -> Result<Self> {
        let selection = make_selection(kind, &graph)?;
        Ok(TrialConfig::new(graph, selection, params, initial, horizon))
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        let mut c = self.clone();
        c.params.beta = beta;
        c
    }

    pub fn with_horizon(&self, horizon: u64) -> Self {
        let mut c = self.clone();
        c.horizon = horizon;
        c.record_every = c.record_every.min(horizon.max(1));
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Converged,
    Diverged,
    Clustered,
    Oscillating,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub index: u64,
    pub classification: Classification,
    pub stop_event: u64,
    pub x0: Vec<f64>,
    pub final_state: Vec<f64>,
    pub max_spread: f64,
    /// Packed per-pair maximum separation, see [`TrajectoryStats::pair_max`].
    pub pair_max: Vec<f64>,
    /// Boundary value per vertex when clustered.
    pub cluster: Option<Vec<f64>>,
    pub touches_upper: Vec<u64>,
    pub touches_lower: Vec<u64>,
}

impl TrialOutcome {
    pub fn min_pair_max(&self) -> f64 {
        self.pair_max.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Whether every vertex entered both boundary bands.
    pub fn every_vertex_touched_both(&self) -> bool {
        !self.touches_upper.is_empty() && self.touches_upper.iter().zip(&self.touches_lower).all(|(&u, &l)| u > 0 && l > 0)
    }
}

pub fn classify(stats: &TrajectoryStats, params: &UpdateParams, horizon: u64) -> (Classification, Option<Vec<f64>>) {
    match stats.stop {
        StopReason::Converged => return (Classification::Converged, None),
        StopReason::Diverged => return (Classification::Diverged, None),
        StopReason::Horizon => {}
    }
    if let Some(streak) = &stats.cluster_streak {
        let window = (CLUSTER_WINDOW_FRACTION * horizon as f64).ceil() as u64;
        if stats.events == horizon && horizon - streak.since >= window {
            let a = params.bound;
            let cluster = streak.upper.iter().map(|&up| if up { a } else { -a }).collect();
            return (Classification::Clustered, Some(cluster));
        }
    }
    let oscillating = stats
        .touches_upper
        .iter()
        .zip(&stats.touches_lower)
        .any(|(&u, &l)| u >= OSCILLATION_MIN_ENTRIES && l >= OSCILLATION_MIN_ENTRIES);
    if oscillating {
        (Classification::Oscillating, None)
    } else {
        (Classification::Undetermined, None)
    }
}

/// One trial driven by `RngStream::substream(base_seed, index)`.
pub fn run_trial(config: &TrialConfig, base_seed: u64, index: u64) -> Result<TrialOutcome> {
    let mut rng = RngStream::substream(base_seed, index);
    let x0 = config.initial.draw(config.graph.n(), &mut rng)?;
    let options = SimulationOptions {
        horizon: config.horizon,
        record_every: config.record_every,
        stop: config.stop.unwrap_or_else(|| StopRule::defaults_for(&x0)),
        record_states: false,
    };
    let stats = simulate(&config.graph, &config.selection, &config.params, &x0, &options, &mut rng)?;
    let (classification, cluster) = classify(&stats, &config.params, config.horizon);
    Ok(TrialOutcome {
        index,
        classification,
        stop_event: stats.events,
        x0,
        final_state: stats.final_state,
        max_spread: stats.max_spread,
        pair_max: stats.pair_max,
        cluster,
        touches_upper: stats.touches_upper,
        touches_lower: stats.touches_lower,
    })
}

/// Trials `0..trials`, in index order. Results do not depend on thread
/// scheduling.
pub fn run_trials(config: &TrialConfig, trials: u64, base_seed: u64) -> Result<Vec<TrialOutcome>> {
    run_trial_range(config, 0, trials, base_seed)
}

pub fn run_trial_range(config: &TrialConfig, first: u64, count: u64, base_seed: u64) -> Result<Vec<TrialOutcome>> {
    config.params.validate()?;
    (first..first + count).into_par_iter().map(|i| run_trial(config, base_seed, i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Fractions {
    pub converged: f64,
    pub diverged: f64,
    pub clustered: f64,
    pub oscillating: f64,
    pub undetermined: f64,
}

impl Fractions {
    pub fn of(outcomes: &[TrialOutcome]) -> Self {
        let total = outcomes.len() as f64;
        if outcomes.is_empty() {
            return Fractions::default();
        }
        let frac = |c: Classification| outcomes.iter().filter(|o| o.classification == c).count() as f64 / total;
        Fractions {
            converged: frac(Classification::Converged),
            diverged: frac(Classification::Diverged),
            clustered: frac(Classification::Clustered),
            oscillating: frac(Classification::Oscillating),
            undetermined: frac(Classification::Undetermined),
        }
    }

    pub fn sum(&self) -> f64 {
        self.converged + self.diverged + self.clustered + self.oscillating + self.undetermined
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoSurvivorReport {
    pub diverged: usize,
    pub passing: usize,
    pub fraction: f64,
}

/// For each diverged trial, whether every pair separated by more than
/// `100 * ||x0||_inf` at some event.
pub fn no_survivor_check(outcomes: &[TrialOutcome]) -> Result<NoSurvivorReport> {
    let diverged: Vec<&TrialOutcome> =
        outcomes.iter().filter(|o| o.classification == Classification::Diverged).collect();
    if diverged.is_empty() {
        return Err(Error::Precondition("no diverged trials to check".into()));
    }
    let passing = diverged.iter().filter(|o| o.min_pair_max() > SURVIVOR_FACTOR * inf_norm(&o.x0)).count();
    Ok(NoSurvivorReport { diverged: diverged.len(), passing, fraction: passing as f64 / diverged.len() as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiveOrDieReport {
    pub horizon: u64,
    pub undetermined_short: f64,
    pub undetermined_long: f64,
    pub shrinks: bool,
}

/// Undetermined fraction at `horizon` and at `10 * horizon` on the same
/// seeds.
pub fn live_or_die_check(config: &TrialConfig, trials: u64, base_seed: u64) -> Result<LiveOrDieReport> {
    let p = &config.params;
    if p.rule != Rule::Symmetric {
        return Err(Error::Precondition("live-or-die check needs the symmetric rule".into()));
    }
    if !(p.alpha > 0.0 && p.alpha < 1.0) || p.beta < 0.0 {
        return Err(Error::Precondition(format!("need alpha in (0, 1) and beta >= 0, got ({}, {})", p.alpha, p.beta)));
    }
    if !config.graph.is_positive_connected() {
        return Err(Error::PositiveDisconnected);
    }
    let short = Fractions::of(&run_trials(config, trials, base_seed)?).undetermined;
    let long = Fractions::of(&run_trials(&config.with_horizon(config.horizon * 10), trials, base_seed)?).undetermined;
    Ok(LiveOrDieReport { horizon: config.horizon, undetermined_short: short, undetermined_long: long, shrinks: long <= short })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub beta: f64,
    pub p: Option<f64>,
    pub trials: u64,
    pub fractions: Fractions,
    pub f_value: Option<f64>,
    pub beta_star: Option<f64>,
    pub beta_natural: Option<f64>,
    pub ms_conv_bound: Option<f64>,
    pub lambda_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

pub const SWEEP_CSV_HEADER: &str = "beta,p,trials,frac_converged,frac_diverged,frac_clustered,frac_oscillating,frac_undetermined,f_value,beta_star,beta_natural,ms_conv_bound,lambda_star";

impl SweepResult {
    /// Missing values are written as empty fields.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = format!("{SWEEP_CSV_HEADER}\n");
        for pt in &self.points {
            let fr = &pt.fractions;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                pt.beta,
                opt(pt.p),
                pt.trials,
                fr.converged,
                fr.diverged,
                fr.clustered,
                fr.oscillating,
                fr.undetermined,
                opt(pt.f_value),
                opt(pt.beta_star),
                opt(pt.beta_natural),
                opt(pt.ms_conv_bound),
                opt(pt.lambda_star),
            )
            .unwrap();
        }
        out
    }

    /// Grid value where the converged fraction first drops through 1/2,
    /// linearly interpolated between neighbouring points.
    pub fn transition_midpoint(&self) -> Option<f64> {
        let x = |p: &SweepPoint| p.p.unwrap_or(p.beta);
        self.points.windows(2).find_map(|w| {
            let (a, b) = (w[0].fractions.converged, w[1].fractions.converged);
            if a >= 0.5 && b < 0.5 {
                let t = (a - 0.5) / (a - b);
                Some(x(&w[0]) + t * (x(&w[1]) - x(&w[0])))
            } else {
                None
            }
        })
    }

    /// Share of grid points whose converged fraction is within `margin` of
    /// 0 or 1.
    pub fn zero_one_diagnostic(&self, margin: f64) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let sharp = self
            .points
            .iter()
            .filter(|p| p.fractions.converged <= margin || p.fractions.converged >= 1.0 - margin)
            .count();
        sharp as f64 / self.points.len() as f64
    }
}

fn check_ascending(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams("grid must be finite and ascending".into()));
    }
    Ok(())
}

/// Monte Carlo fractions per β with the spectral overlay. Point `k` uses
/// trial indices `k * trials .. (k + 1) * trials`.
pub fn sweep_beta(config: &TrialConfig, grid: &[f64], trials: u64, base_seed: u64) -> Result<SweepResult> {
    check_ascending(grid)?;
    let model = SpectralModel::new(&config.graph, &config.selection)?;
    let alpha = config.params.alpha;
    let beta_star = if alpha > 0.0 && model.positive_connected() && model.has_negative() {
        Some(model.beta_star(alpha, BISECTION_TOL)?)
    } else {
        None
    };
    let beta_natural = Some(model.beta_natural(alpha)?).filter(|b| b.is_finite());
    let mut points = Vec::with_capacity(grid.len());
    for (k, &beta) in grid.iter().enumerate() {
        let cfg = config.with_beta(beta);
        let outcomes = run_trial_range(&cfg, k as u64 * trials, trials, base_seed)?;
        let ms = model.mean_square_bounds(alpha, beta)?;
        let ls = model.lambda_star(alpha, beta)?;
        points.push(SweepPoint {
            beta,
            p: None,
            trials,
            fractions: Fractions::of(&outcomes),
            f_value: Some(ms.f),
            beta_star,
            beta_natural,
            ms_conv_bound: Some(ms.l_conv),
            lambda_star: ls.converged.then_some(ls.value),
        });
    }
    let result = SweepResult { points };
    log::info!(
        "sweep: transition midpoint {:?}, zero-one share {:.2}",
        result.transition_midpoint(),
        result.zero_one_diagnostic(0.1)
    );
    Ok(result)
}

/// Sweep over the negative-edge probability of `K_n`. Every trial samples
/// its own graph; `f_value` is the mean over those graphs.
pub fn sweep_er(
    n: usize,
    grid: &[f64],
    params: &UpdateParams,
    initial: &InitialBeliefs,
    horizon: u64,
    trials: u64,
    base_seed: u64,
) -> Result<SweepResult> {
    check_ascending(grid)?;
    params.validate()?;
    let mut points = Vec::with_capacity(grid.len());
    for (k, &p) in grid.iter().enumerate() {
        let runs: Vec<(TrialOutcome, f64)> = (k as u64 * trials..(k as u64 + 1) * trials)
            .into_par_iter()
            .map(|index| {
                let mut rng = RngStream::substream(base_seed, index);
                let g = er_negative_graph(n, p, &mut rng)?;
                let sel = make_selection(&SelectionKind::Complete, &g)?;
                let f = SpectralModel::new(&g, &sel)?.f_value(params.alpha, params.beta)?;
                let cfg = TrialConfig::new(g, sel, *params, initial.clone(), horizon);
                Ok((run_trial(&cfg, base_seed ^ rng.random::<u64>(), index)?, f))
            })
            .collect::<Result<_>>()?;
        let f_mean = runs.iter().map(|(_, f)| f).sum::<f64>() / runs.len().max(1) as f64;
        let outcomes: Vec<TrialOutcome> = runs.into_iter().map(|(o, _)| o).collect();
        points.push(SweepPoint {
            beta: params.beta,
            p: Some(p),
            trials,
            fractions: Fractions::of(&outcomes),
            f_value: Some(f_mean),
            beta_star: None,
            beta_natural: None,
            ms_conv_bound: None,
            lambda_star: None,
        });
    }
    Ok(SweepResult { points })
}

/// `K_n` with each edge independently negative with probability `p`.
pub fn er_negative_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<SignedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(SignedGraph::complete(n, |_, _| if rng.random::<f64>() < p { Sign::Negative } else { Sign::Positive }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusteringReport {
    pub trials: usize,
    pub clustered: usize,
    /// Clustered trials whose assignment is constant per group (and, for
    /// strong balance, opposite across the two groups).
    pub consistent: usize,
    pub fraction_consistent: f64,
}

pub fn clustering_check(outcomes: &[TrialOutcome], balance: Option<&BalanceVerdict>) -> Result<ClusteringReport> {
    let balance = balance.ok_or_else(|| Error::Precondition("clustering check needs a balance verdict".into()))?;
    let groups = balance
        .groups()
        .filter(|g| g.len() >= 2)
        .ok_or_else(|| Error::Precondition("balance partition must have at least two groups".into()))?;
    let opposite = balance.is_strong();
    let clustered: Vec<&Vec<f64>> = outcomes.iter().filter_map(|o| o.cluster.as_ref()).collect();
    let consistent = clustered
        .iter()
        .filter(|c| {
            let values: Vec<f64> = groups.iter().map(|g| c[g[0]]).collect();
            let constant = groups.iter().zip(&values).all(|(g, &v)| g.iter().all(|&i| c[i] == v));
            constant && (!opposite || values[0] == -values[1])
        })
        .count();
    let fraction_consistent = if clustered.is_empty() { 0.0 } else { consistent as f64 / clustered.len() as f64 };
    Ok(ClusteringReport { trials: outcomes.len(), clustered: clustered.len(), consistent, fraction_consistent })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationReport {
    pub trials: usize,
    pub all_touched_both: usize,
    pub fraction: f64,
}

/// Share of trials in which every vertex entered both boundary bands.
pub fn oscillation_check(outcomes: &[TrialOutcome]) -> OscillationReport {
    let hits = outcomes.iter().filter(|o| o.every_vertex_touched_both()).count();
    let fraction = if outcomes.is_empty() { 0.0 } else { hits as f64 / outcomes.len() as f64 };
    OscillationReport { trials: outcomes.len(), all_touched_both: hits, fraction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Asymmetry;
    use crate::graph::balance_verdict;

    const P: Sign = Sign::Positive;
    const N: Sign = Sign::Negative;

    fn k3_one_negative(beta: f64, initial: InitialBeliefs) -> TrialConfig {
        let g = SignedGraph::complete(3, |u, v| if (u, v) == (0, 1) { N } else { P });
        TrialConfig::with_kind(g, &SelectionKind::Complete, UpdateParams::symmetric(0.5, beta), initial, 20_000).unwrap()
    }

    #[test]
    fn constant_start_converges_at_zero() {
        let cfg = k3_one_negative(0.5, InitialBeliefs::Explicit(vec![0.7; 3]));
        let out = run_trials(&cfg, 10, 1).unwrap();
        assert!(out.iter().all(|o| o.classification == Classification::Converged && o.stop_event == 0));
    }

    #[test]
    fn small_beta_converges() {
        let cfg = k3_one_negative(0.0, InitialBeliefs::Uniform { low: -1.0, high: 1.0 });
        let model = SpectralModel::new(&cfg.graph, &cfg.selection).unwrap();
        let cfg = cfg.with_beta(0.5 * model.beta_natural(0.5).unwrap());
        let out = run_trials(&cfg, 100, 9).unwrap();
        assert!(Fractions::of(&out).converged >= 0.95);
    }

    #[test]
    fn trials_are_reproducible_and_order_free() {
        let cfg = k3_one_negative(0.4, InitialBeliefs::Uniform { low: -1.0, high: 1.0 }).with_horizon(500);
        let all = run_trials(&cfg, 8, 42).unwrap();
        let tail = run_trial_range(&cfg, 5, 3, 42).unwrap();
        assert_eq!(&all[5..], &tail[..]);
        assert_eq!(run_trial(&cfg, 42, 2).unwrap(), all[2]);
    }

    #[test]
    fn er_graph_extremes() {
        let mut rng = RngStream::new(0);
        assert!(!er_negative_graph(6, 0.0, &mut rng).unwrap().has_negative_edge());
        assert_eq!(er_negative_graph(6, 1.0, &mut rng).unwrap().positive_edges().count(), 0);
        assert!(er_negative_graph(6, 1.5, &mut rng).is_err());
    }

    #[test]
    fn sweep_single_zero_point_converges() {
        let cfg = k3_one_negative(0.0, InitialBeliefs::Uniform { low: -1.0, high: 1.0 });
        let sweep = sweep_beta(&cfg, &[0.0], 20, 3).unwrap();
        assert_eq!(sweep.points[0].fractions.converged, 1.0);
        let csv = sweep.to_csv();
        assert!(csv.starts_with(SWEEP_CSV_HEADER));
        assert!(sweep_beta(&cfg, &[0.2, 0.1], 1, 0).is_err());
    }

    #[test]
    fn midpoint_interpolates() {
        let pt = |beta: f64, converged: f64| SweepPoint {
            beta,
            p: None,
            trials: 1,
            fractions: Fractions { converged, diverged: 1.0 - converged, ..Fractions::default() },
            f_value: None,
            beta_star: None,
            beta_natural: None,
            ms_conv_bound: None,
            lambda_star: None,
        };
        let s = SweepResult { points: vec![pt(0.0, 1.0), pt(1.0, 0.75), pt(2.0, 0.25), pt(3.0, 0.0)] };
        assert_eq!(s.transition_midpoint(), Some(1.5));
        assert_eq!(s.zero_one_diagnostic(0.1), 0.5);
    }

    #[test]
    fn clustering_check_needs_partition() {
        let g = SignedGraph::complete(3, |_, _| P);
        let v = balance_verdict(&g).unwrap();
        assert!(clustering_check(&[], None).is_err());
        assert!(clustering_check(&[], Some(&v)).is_err());
    }

    #[test]
    fn huge_bound_means_no_touches() {
        let g = SignedGraph::complete(4, |u, v| if (u, v) == (0, 1) { N } else { P });
        let params = UpdateParams::constrained(1.0 / 3.0, 0.5, Asymmetry::default(), 1e6);
        let cfg = TrialConfig::with_kind(g, &SelectionKind::UniformNeighbor, params, InitialBeliefs::Uniform { low: -1.0, high: 1.0 }, 2000)
            .unwrap();
        let out = run_trials(&cfg, 10, 5).unwrap();
        assert_eq!(oscillation_check(&out).all_touched_both, 0);
        assert!(out.iter().all(|o| o.touches_upper.iter().chain(&o.touches_lower).all(|&t| t == 0)));
    }
}

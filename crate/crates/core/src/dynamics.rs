//! Belief update rules and single-trajectory simulation.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph};
use crate::selection::{PairDraw, SelectionModel};

/// Default convergence stop: spread below this.
pub const DEFAULT_CONVERGENCE_EPS: f64 = 1e-9;
/// Default divergence stop factor: spread above `1e6 * max(1, ||x0||_inf)`.
pub const DEFAULT_DIVERGENCE_FACTOR: f64 = 1e6;
/// Boundary band width as a fraction of the bound `A`.
pub const BOUNDARY_BAND_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Both endpoints move; attraction on positive edges, repulsion on
    /// negative ones. Unbounded.
    Symmetric,
    /// One or both endpoints move (probabilities `a`, `b`, `c`) and the
    /// result is clamped to `[-A, A]`.
    AsymmetricConstrained,
    /// Negative edges use the sign-flipping averaging update.
    Altafini,
}

/// Probabilities of the initiator-only, partner-only and joint updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for Asymmetry {
    fn default() -> Self {
        Asymmetry { a: 1.0 / 3.0, b: 1.0 / 3.0, c: 1.0 / 3.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub asym: Asymmetry,
    #[serde(default = "default_bound")]
    pub bound: f64,
    pub rule: Rule,
}

fn default_bound() -> f64 {
    1.0
}

impl UpdateParams {
    pub fn symmetric(alpha: f64, beta: f64) -> Self {
        UpdateParams { alpha, beta, asym: Asymmetry::default(), bound: f64::INFINITY, rule: Rule::Symmetric }
    }

    pub fn constrained(alpha: f64, beta: f64, asym: Asymmetry, bound: f64) -> Self {
        UpdateParams { alpha, beta, asym, bound, rule: Rule::AsymmetricConstrained }
    }

    pub fn altafini(alpha: f64, beta: f64) -> Self {
        UpdateParams { alpha, beta, asym: Asymmetry::default(), bound: f64::INFINITY, rule: Rule::Altafini }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha must lie in [0, 1], got {}", self.alpha));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return bad(format!("beta must be finite and >= 0, got {}", self.beta));
        }
        match self.rule {
            Rule::Symmetric => {}
            Rule::Altafini => {
                if !(self.beta > 0.0 && self.beta < 1.0) {
                    return bad(format!("altafini rule requires beta in (0, 1), got {}", self.beta));
                }
            }
            Rule::AsymmetricConstrained => {
                let Asymmetry { a, b, c } = self.asym;
                if [a, b, c].iter().any(|p| !(*p >= 0.0)) || ((a + b + c) - 1.0).abs() > 1e-9 {
                    return bad(format!("asymmetry probabilities must be >= 0 and sum to 1, got ({a}, {b}, {c})"));
                }
                if !(self.bound > 0.0 && self.bound.is_finite()) {
                    return bad(format!("constrained rule requires a finite bound A > 0, got {}", self.bound));
                }
            }
        }
        Ok(())
    }

    /// Interaction weight: `alpha` on positive edges, `-beta` on negative.
    pub fn theta(&self, sign: Sign) -> f64 {
        match sign {
            Sign::Positive => self.alpha,
            Sign::Negative => -self.beta,
        }
    }

    /// Whether beliefs are confined to `[-A, A]`.
    pub fn is_bounded(&self) -> bool {
        self.rule == Rule::AsymmetricConstrained
    }
}

/// Symmetric update of the pair `{i, j}`.
pub fn step_symmetric(x: &mut [f64], i: usize, j: usize, sign: Sign, params: &UpdateParams) {
    let (xi, xj) = (x[i], x[j]);
    match sign {
        Sign::Positive => {
            let a = params.alpha;
            x[i] = (1.0 - a) * xi + a * xj;
            x[j] = (1.0 - a) * xj + a * xi;
        }
        Sign::Negative => {
            let b = params.beta;
            x[i] = (1.0 + b) * xi - b * xj;
            x[j] = (1.0 + b) * xj - b * xi;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymBranch {
    InitiatorOnly,
    PartnerOnly,
    Both,
}

impl AsymBranch {
    pub fn draw<R: Rng + ?Sized>(asym: &Asymmetry, rng: &mut R) -> Self {
        let u: f64 = rng.random();
        if u < asym.a {
            AsymBranch::InitiatorOnly
        } else if u < asym.a + asym.b {
            AsymBranch::PartnerOnly
        } else {
            AsymBranch::Both
        }
    }
}

pub fn project(z: f64, bound: f64) -> f64 {
    z.clamp(-bound, bound)
}

/// Applies one branch of the asymmetric constrained update with `i` the
/// initiator.
pub fn apply_asymmetric_branch(x: &mut [f64], i: usize, j: usize, sign: Sign, params: &UpdateParams, branch: AsymBranch) {
    let theta = params.theta(sign);
    let bound = params.bound;
    let (xi, xj) = (x[i], x[j]);
    let moved = |own: f64, other: f64| project((1.0 - theta) * own + theta * other, bound);
    match branch {
        AsymBranch::InitiatorOnly => x[i] = moved(xi, xj),
        AsymBranch::PartnerOnly => x[j] = moved(xj, xi),
        AsymBranch::Both => {
            x[i] = moved(xi, xj);
            x[j] = moved(xj, xi);
        }
    }
}

pub fn step_asymmetric_constrained<R: Rng + ?Sized>(
    x: &mut [f64],
    i: usize,
    j: usize,
    sign: Sign,
    params: &UpdateParams,
    rng: &mut R,
) -> AsymBranch {
    let branch = AsymBranch::draw(&params.asym, rng);
    apply_asymmetric_branch(x, i, j, sign, params, branch);
    branch
}

pub fn step_altafini(x: &mut [f64], i: usize, j: usize, sign: Sign, params: &UpdateParams) -> Result<()> {
    if !(params.beta > 0.0 && params.beta < 1.0) {
        return Err(Error::InvalidParams(format!("altafini rule requires beta in (0, 1), got {}", params.beta)));
    }
    altafini_unchecked(x, i, j, sign, params);
    Ok(())
}

fn altafini_unchecked(x: &mut [f64], i: usize, j: usize, sign: Sign, params: &UpdateParams) {
    match sign {
        Sign::Positive => step_symmetric(x, i, j, sign, params),
        Sign::Negative => {
            let b = params.beta;
            let (xi, xj) = (x[i], x[j]);
            x[i] = (1.0 - b) * xi - b * xj;
            x[j] = (1.0 - b) * xj - b * xi;
        }
    }
}

/// Belief vector together with the event counter.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefState {
    pub x: Vec<f64>,
    pub k: u64,
}

impl BeliefState {
    pub fn new(x: Vec<f64>) -> Self {
        BeliefState { x, k: 0 }
    }

    pub fn spread(&self) -> f64 {
        spread(&self.x)
    }
}

pub fn spread(x: &[f64]) -> f64 {
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if x.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

pub fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    /// Stop once the spread falls below this.
    pub converge_below: Option<f64>,
    /// Stop once the spread exceeds this.
    pub diverge_above: Option<f64>,
}

impl StopRule {
    pub fn none() -> Self {
        StopRule { converge_below: None, diverge_above: None }
    }

    /// `1e-9` and `1e6 * max(1, ||x0||_inf)`.
    pub fn defaults_for(x0: &[f64]) -> Self {
        StopRule {
            converge_below: Some(DEFAULT_CONVERGENCE_EPS),
            diverge_above: Some(DEFAULT_DIVERGENCE_FACTOR * inf_norm(x0).max(1.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub horizon: u64,
    pub record_every: u64,
    pub stop: StopRule,
    pub record_states: bool,
}

impl SimulationOptions {
    pub fn new(horizon: u64) -> Self {
        SimulationOptions { horizon, record_every: horizon.max(1), stop: StopRule::none(), record_states: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Converged,
    Diverged,
    Horizon,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub k: u64,
    pub spread: f64,
    pub state: Option<Vec<f64>>,
}

/// Uninterrupted stretch during which every belief sat in a boundary band
/// with the same side assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterStreak {
    /// `true` for the upper band `[A - δ, A]`.
    pub upper: Vec<bool>,
    pub since: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryStats {
    pub records: Vec<Record>,
    /// Event count at which the run ended.
    pub events: u64,
    pub stop: StopReason,
    pub final_state: Vec<f64>,
    pub max_spread: f64,
    /// `max_k |x_a(k) - x_b(k)|` for `a < b`, packed row by row.
    pub pair_max: Vec<f64>,
    /// Entries into the upper / lower boundary band per vertex, excluding
    /// the initial state. Empty for unbounded rules.
    pub touches_upper: Vec<u64>,
    pub touches_lower: Vec<u64>,
    pub cluster_streak: Option<ClusterStreak>,
}

impl TrajectoryStats {
    pub fn pair_max(&self, a: usize, b: usize) -> f64 {
        let n = self.final_state.len();
        let (a, b) = (a.min(b), a.max(b));
        self.pair_max[pair_index(n, a, b)]
    }

    /// Smallest per-pair maximum separation.
    pub fn min_pair_max(&self) -> f64 {
        self.pair_max.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `k,spread[,x0..x{n-1}]`.
    pub fn to_csv(&self) -> String {
        let n = self.final_state.len();
        let with_states = self.records.iter().any(|r| r.state.is_some());
        let mut out = String::from("k,spread");
        if with_states {
            for i in 0..n {
                write!(out, ",x{i}").unwrap();
            }
        }
        out.push('\n');
        for r in &self.records {
            write!(out, "{},{}", r.k, r.spread).unwrap();
            if let Some(state) = r.state.as_ref().filter(|_| with_states) {
                for v in state {
                    write!(out, ",{v}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

struct BandTracker {
    low: f64,
    high: f64,
    /// -1 lower band, 0 interior, +1 upper band.
    side: Vec<i8>,
    in_band: usize,
    touches_upper: Vec<u64>,
    touches_lower: Vec<u64>,
    streak_since: Option<u64>,
}

impl BandTracker {
    fn new(x: &[f64], bound: f64) -> Self {
        let delta = BOUNDARY_BAND_FRACTION * bound;
        let (low, high) = (-bound + delta, bound - delta);
        let side: Vec<i8> = x.iter().map(|&v| band_side(v, low, high)).collect();
        let in_band = side.iter().filter(|&&s| s != 0).count();
        let streak_since = (in_band == x.len()).then_some(0);
        BandTracker {
            low,
            high,
            side,
            in_band,
            touches_upper: vec![0; x.len()],
            touches_lower: vec![0; x.len()],
            streak_since,
        }
    }

    fn update(&mut self, v: usize, value: f64, k: u64) {
        let new = band_side(value, self.low, self.high);
        let old = self.side[v];
        if new == old {
            return;
        }
        match new {
            1 => self.touches_upper[v] += 1,
            -1 => self.touches_lower[v] += 1,
            _ => {}
        }
        if old != 0 {
            self.in_band -= 1;
        }
        if new != 0 {
            self.in_band += 1;
        }
        self.side[v] = new;
        self.streak_since = (self.in_band == self.side.len()).then_some(k);
    }

    fn streak(&self) -> Option<ClusterStreak> {
        self.streak_since.map(|since| ClusterStreak { upper: self.side.iter().map(|&s| s > 0).collect(), since })
    }
}

fn band_side(v: f64, low: f64, high: f64) -> i8 {
    if v >= high {
        1
    } else if v <= low {
        -1
    } else {
        0
    }
}

/// Runs the selection process and the configured rule for up to
/// `options.horizon` events.
///
/// Records `k = 0`, every `record_every` events, and the final event. Idle
/// draws advance `k` without changing the state.
pub fn simulate<R: Rng + ?Sized>(
    g: &SignedGraph,
    selection: &SelectionModel,
    params: &UpdateParams,
    x0: &[f64],
    options: &SimulationOptions,
    rng: &mut R,
) -> Result<TrajectoryStats> {
    params.validate()?;
    let n = g.n();
    if x0.len() != n || selection.n() != n {
        return Err(Error::InvalidParams(format!("x0 has {} entries, graph has {n} vertices", x0.len())));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if params.is_bounded() && x0.iter().any(|v| v.abs() > params.bound) {
        return Err(Error::InvalidParams(format!("x0 must lie within [-{0}, {0}]", params.bound)));
    }
    let record_every = options.record_every.max(1);

    let mut x = x0.to_vec();
    let mut pair_max = vec![0.0; n * n.saturating_sub(1) / 2];
    for a in 0..n {
        for b in a + 1..n {
            pair_max[pair_index(n, a, b)] = (x[a] - x[b]).abs();
        }
    }
    let mut bands = params.is_bounded().then(|| BandTracker::new(&x, params.bound));
    let mut records = Vec::new();
    let record = |k: u64, x: &[f64], s: f64, records: &mut Vec<Record>| {
        records.push(Record { k, spread: s, state: options.record_states.then(|| x.to_vec()) });
    };

    let mut current = spread(&x);
    let mut max_spread = current;
    record(0, &x, current, &mut records);
    let mut k = 0;
    let mut stop = stop_reason(current, &options.stop);

    while stop.is_none() && k < options.horizon {
        k += 1;
        if let PairDraw::Pair { initiator: i, partner: j } = selection.sample_pair(rng) {
            let sign = g.sign(i, j).expect("selection complies with the graph");
            match params.rule {
                Rule::Symmetric => step_symmetric(&mut x, i, j, sign, params),
                Rule::AsymmetricConstrained => {
                    step_asymmetric_constrained(&mut x, i, j, sign, params, rng);
                }
                Rule::Altafini => altafini_unchecked(&mut x, i, j, sign, params),
            }
            for v in [i, j] {
                for w in 0..n {
                    if w != v {
                        let idx = pair_index(n, v.min(w), v.max(w));
                        let d = (x[v] - x[w]).abs();
                        if d > pair_max[idx] {
                            pair_max[idx] = d;
                        }
                    }
                }
                if let Some(bands) = bands.as_mut() {
                    bands.update(v, x[v], k);
                }
            }
            current = spread(&x);
            max_spread = max_spread.max(current);
            stop = stop_reason(current, &options.stop);
        }
        if k % record_every == 0 || stop.is_some() || k == options.horizon {
            record(k, &x, current, &mut records);
        }
    }

    let (touches_upper, touches_lower, cluster_streak) = match bands {
        Some(b) => {
            let streak = b.streak();
            (b.touches_upper, b.touches_lower, streak)
        }
        None => (Vec::new(), Vec::new(), None),
    };
    Ok(TrajectoryStats {
        records,
        events: k,
        stop: stop.unwrap_or(StopReason::Horizon),
        final_state: x,
        max_spread,
        pair_max,
        touches_upper,
        touches_lower,
        cluster_streak,
    })
}

fn stop_reason(spread: f64, rule: &StopRule) -> Option<StopReason> {
    if rule.converge_below.is_some_and(|eps| spread < eps) {
        Some(StopReason::Converged)
    } else if rule.diverge_above.is_some_and(|m| spread > m) || !spread.is_finite() {
        Some(StopReason::Diverged)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::{make_selection, RngStream, SelectionKind};

    const P: Sign = Sign::Positive;
    const N: Sign = Sign::Negative;

    #[test]
    fn symmetric_examples() {
        let mut x = [0.0, 1.0];
        step_symmetric(&mut x, 0, 1, P, &UpdateParams::symmetric(0.5, 0.0));
        assert_eq!(x, [0.5, 0.5]);
        let mut x = [0.0, 1.0];
        step_symmetric(&mut x, 0, 1, P, &UpdateParams::symmetric(1.0, 0.0));
        assert_eq!(x, [1.0, 0.0]);
        let mut x = [0.0, 1.0];
        step_symmetric(&mut x, 0, 1, N, &UpdateParams::symmetric(0.5, 1.0));
        assert_eq!(x, [-1.0, 2.0]);
    }

    #[test]
    fn asymmetric_both_branch_clamps() {
        let params = UpdateParams::constrained(1.0 / 3.0, 1.0, Asymmetry::default(), 1.0);
        let mut x = [0.9, -0.9];
        apply_asymmetric_branch(&mut x, 0, 1, N, &params, AsymBranch::Both);
        assert_eq!(x, [1.0, -1.0]);
    }

    #[test]
    fn asymmetric_initiator_only_when_a_is_one() {
        let params = UpdateParams::constrained(0.3, 0.5, Asymmetry { a: 1.0, b: 0.0, c: 0.0 }, 10.0);
        let mut rng = RngStream::new(3);
        let mut x = [1.0, -2.0, 0.5];
        for _ in 0..200 {
            let before = x;
            let branch = step_asymmetric_constrained(&mut x, 0, 1, P, &params, &mut rng);
            assert_eq!(branch, AsymBranch::InitiatorOnly);
            assert_eq!(x[1], before[1]);
        }
    }

    #[test]
    fn asymmetric_positive_matches_symmetric_before_clamp() {
        let params = UpdateParams::constrained(0.3, 0.5, Asymmetry::default(), 100.0);
        let mut a = [0.2, 0.7];
        let mut b = a;
        apply_asymmetric_branch(&mut a, 0, 1, P, &params, AsymBranch::Both);
        step_symmetric(&mut b, 0, 1, P, &params);
        assert_eq!(a, b);
    }

    #[test]
    fn altafini_examples() {
        let p = UpdateParams::altafini(0.5, 0.5);
        let mut x = [1.0, 1.0];
        step_altafini(&mut x, 0, 1, N, &p).unwrap();
        assert_eq!(x, [0.0, 0.0]);
        let mut x = [1.0, -1.0];
        step_altafini(&mut x, 0, 1, N, &p).unwrap();
        assert_eq!(x, [1.0, -1.0]);
        let mut x = [0.0, 0.0];
        step_altafini(&mut x, 0, 1, P, &p).unwrap();
        assert_eq!(x, [0.0, 0.0]);
        assert!(step_altafini(&mut x, 0, 1, N, &UpdateParams::altafini(0.5, 1.0)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(UpdateParams::symmetric(1.2, 0.0).validate().is_err());
        assert!(UpdateParams::symmetric(0.5, -0.1).validate().is_err());
        assert!(UpdateParams::altafini(0.5, 0.0).validate().is_err());
        assert!(UpdateParams::constrained(0.5, 1.0, Asymmetry { a: 0.5, b: 0.5, c: 0.5 }, 1.0).validate().is_err());
        assert!(UpdateParams::constrained(0.5, 1.0, Asymmetry::default(), f64::INFINITY).validate().is_err());
        assert!(UpdateParams::constrained(0.5, 1.0, Asymmetry::default(), 1.0).validate().is_ok());
    }

    fn k3() -> SignedGraph {
        SignedGraph::complete(3, |_, _| P)
    }

    #[test]
    fn constant_start_is_converged_immediately() {
        let g = k3();
        let sel = make_selection(&SelectionKind::Complete, &g).unwrap();
        let x0 = [0.4; 3];
        let options = SimulationOptions { horizon: 100, record_every: 10, stop: StopRule::defaults_for(&x0), record_states: false };
        let stats = simulate(&g, &sel, &UpdateParams::symmetric(0.5, 1.0), &x0, &options, &mut RngStream::new(1)).unwrap();
        assert_eq!(stats.stop, StopReason::Converged);
        assert_eq!(stats.events, 0);
        assert_eq!(stats.records.len(), 1);
    }

    #[test]
    fn positive_triangle_reaches_consensus() {
        let g = k3();
        let sel = make_selection(&SelectionKind::Complete, &g).unwrap();
        let x0 = [-1.0, 0.3, 2.0];
        let mut options = SimulationOptions::new(10_000);
        options.stop.converge_below = Some(1e-6);
        let stats = simulate(&g, &sel, &UpdateParams::symmetric(0.5, 0.0), &x0, &options, &mut RngStream::new(5)).unwrap();
        assert_eq!(stats.stop, StopReason::Converged);
        assert!(stats.final_state.iter().all(|v| (v - 1.3 / 3.0).abs() < 1e-6));
    }

    #[test]
    fn records_include_first_and_last_event() {
        let g = k3();
        let sel = make_selection(&SelectionKind::Complete, &g).unwrap();
        let options = SimulationOptions { horizon: 25, record_every: 10, stop: StopRule::none(), record_states: true };
        let stats = simulate(&g, &sel, &UpdateParams::symmetric(0.3, 0.0), &[0.0, 1.0, 2.0], &options, &mut RngStream::new(2)).unwrap();
        let ks: Vec<u64> = stats.records.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![0, 10, 20, 25]);
        let csv = stats.to_csv();
        assert!(csv.starts_with("k,spread,x0,x1,x2\n0,2,0,1,2\n"), "{csv}");
        assert_eq!(csv.lines().count(), 5);
    }

    proptest::proptest! {
        #[test]
        fn symmetric_step_conserves_sum_and_scales_gap(
            xi in -1e3f64..1e3, xj in -1e3f64..1e3, alpha in 0.0f64..=1.0, beta in 0.0f64..10.0, neg: bool,
        ) {
            let sign = if neg { N } else { P };
            let mut x = [xi, xj];
            step_symmetric(&mut x, 0, 1, sign, &UpdateParams::symmetric(alpha, beta));
            let scale = if neg { 2.0 * beta + 1.0 } else { (2.0 * alpha - 1.0).abs() };
            let tol = 1e-9 * (1.0 + xi.abs() + xj.abs()) * (1.0 + beta);
            proptest::prop_assert!((x[0] + x[1] - xi - xj).abs() <= tol);
            proptest::prop_assert!(((x[0] - x[1]).abs() - scale * (xi - xj).abs()).abs() <= tol);
        }

        #[test]
        fn constrained_step_stays_in_bounds(
            xi in -2.0f64..=2.0, xj in -2.0f64..=2.0, beta in 0.0f64..20.0, neg: bool, branch in 0u8..3,
        ) {
            let params = UpdateParams::constrained(1.0 / 3.0, beta, Asymmetry::default(), 2.0);
            let branch = [AsymBranch::InitiatorOnly, AsymBranch::PartnerOnly, AsymBranch::Both][branch as usize];
            let mut x = [xi, xj];
            apply_asymmetric_branch(&mut x, 0, 1, if neg { N } else { P }, &params, branch);
            proptest::prop_assert!(x.iter().all(|v| v.abs() <= 2.0));
        }

        #[test]
        fn agreement_is_a_fixed_point(c in -5.0f64..5.0, beta in 0.0f64..0.99, neg: bool, rule in 0u8..3) {
            let sign = if neg { N } else { P };
            let mut x = [c, c];
            match rule {
                0 => step_symmetric(&mut x, 0, 1, sign, &UpdateParams::symmetric(0.4, beta)),
                1 => apply_asymmetric_branch(&mut x, 0, 1, sign, &UpdateParams::constrained(0.4, beta, Asymmetry::default(), 5.0), AsymBranch::Both),
                _ => {
                    // Altafini maps agreement c to (1 - 2β)c on negative edges, so only 0 is fixed.
                    x = [0.0, 0.0];
                    step_altafini(&mut x, 0, 1, sign, &UpdateParams::altafini(0.4, beta.max(0.01))).unwrap();
                    proptest::prop_assert_eq!(x, [0.0, 0.0]);
                    return Ok(());
                }
            }
            proptest::prop_assert!(x.iter().all(|v| (v - c).abs() <= 1e-14 * (1.0 + c.abs())));
        }
    }

    #[test]
    fn band_tracking_counts_entries() {
        let g = SignedGraph::new(2, [(0, 1, N)]).unwrap();
        let sel = make_selection(&SelectionKind::UniformNeighbor, &g).unwrap();
        let params = UpdateParams::constrained(0.3, 5.0, Asymmetry { a: 0.0, b: 0.0, c: 1.0 }, 1.0);
        let options = SimulationOptions::new(10);
        let stats = simulate(&g, &sel, &params, &[0.1, -0.1], &options, &mut RngStream::new(0)).unwrap();
        // 0.1 -> 0.1 + 5 * 0.2 = 1.1 -> clamped to the upper bound on the first event.
        assert_eq!(stats.final_state, vec![1.0, -1.0]);
        assert_eq!(stats.touches_upper, vec![1, 0]);
        assert_eq!(stats.touches_lower, vec![0, 1]);
        assert_eq!(stats.cluster_streak, Some(ClusterStreak { upper: vec![true, false], since: 1 }));
        assert_eq!(stats.pair_max(0, 1), 2.0);
    }
}

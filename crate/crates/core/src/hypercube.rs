//! Finite-time consensus schedules built on hypercube embeddings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{has_perfect_matching, Sign, SignedGraph};

/// Largest dimension accepted by [`find_hypercube_labeling`].
pub const LABELING_SEARCH_MAX_DIM: u32 = 4;
pub const VERIFY_TOL: f64 = 1e-12;

/// Ordered pairs applied left to right, each meant to be a positive edge.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PairSchedule {
    pub pairs: Vec<(usize, usize)>,
}

impl PairSchedule {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks every pair against the positive edges of `g`.
    pub fn check_against(&self, g: &SignedGraph) -> Result<()> {
        for &(u, v) in &self.pairs {
            if g.sign(u, v) != Some(Sign::Positive) {
                return Err(Error::MissingHypercubeEdge { u, v });
            }
        }
        Ok(())
    }

    /// One `i j` line per pair.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, j) in &self.pairs {
            writeln!(out, "{i} {j}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = fields[..] else {
                return Err(Error::parse(idx + 1, format!("expected 'i j', found '{line}'")));
            };
            let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(idx + 1, format!("invalid vertex '{s}'")));
            pairs.push((parse(a)?, parse(b)?));
        }
        Ok(PairSchedule { pairs })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        PairSchedule::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Schedule on hypercube codes `0..2^m`: both halves (top coordinate 0,
/// then 1) recursively, then the cross pairs `(c, c | 2^(m-1))`.
pub fn code_schedule(m: u32) -> Vec<(usize, usize)> {
    if m == 0 {
        return Vec::new();
    }
    let half = 1usize << (m - 1);
    let lower = code_schedule(m - 1);
    let mut out = Vec::with_capacity(m as usize * half);
    out.extend_from_slice(&lower);
    out.extend(lower.iter().map(|&(a, b)| (a + half, b + half)));
    out.extend((0..half).map(|c| (c, c + half)));
    out
}

/// `labeling[code]` is the vertex that plays hypercube corner `code`.
pub fn hypercube_schedule(g: &SignedGraph, m: u32, labeling: &[usize]) -> Result<PairSchedule> {
    let size = 1usize << m;
    if labeling.len() != size || g.n() != size {
        return Err(Error::InvalidLabeling(format!(
            "need {size} labels for a graph with {size} vertices, got {} labels and {} vertices",
            labeling.len(),
            g.n()
        )));
    }
    let mut seen = vec![false; size];
    for &v in labeling {
        if v >= size || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidLabeling(format!("labeling is not a bijection onto 0..{size}")));
        }
    }
    for c in 0..size {
        for b in 0..m {
            let d = c ^ (1 << b);
            if c < d && g.sign(labeling[c], labeling[d]) != Some(Sign::Positive) {
                return Err(Error::MissingHypercubeEdge { u: labeling[c], v: labeling[d] });
            }
        }
    }
    let pairs = code_schedule(m).into_iter().map(|(a, b)| (labeling[a], labeling[b])).collect();
    Ok(PairSchedule { pairs })
}

/// Applies `x_i, x_j <- (1-α)x_i + αx_j, (1-α)x_j + αx_i` for each pair.
pub fn apply_schedule(schedule: &PairSchedule, x: &mut [f64], alpha: f64) {
    for &(i, j) in &schedule.pairs {
        let (xi, xj) = (x[i], x[j]);
        x[i] = (1.0 - alpha) * xi + alpha * xj;
        x[j] = (1.0 - alpha) * xj + alpha * xi;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleVerification {
    pub pass: bool,
    /// Max-abs entry of `W_T ⋯ W_1 - U`.
    pub residual: f64,
}

pub fn verify_schedule(schedule: &PairSchedule, n: usize, alpha: f64) -> Result<ScheduleVerification> {
    if n == 0 {
        return Err(Error::InvalidParams("schedule verification needs n >= 1".into()));
    }
    for &(i, j) in &schedule.pairs {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { index: i.max(j), n });
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
    }
    // Column c of the product is the schedule applied to e_c.
    let mut residual: f64 = 0.0;
    let u = 1.0 / n as f64;
    let mut col = vec![0.0; n];
    for c in 0..n {
        col.iter_mut().for_each(|x| *x = 0.0);
        col[c] = 1.0;
        apply_schedule(schedule, &mut col, alpha);
        residual = col.iter().fold(residual, |r, x| r.max((x - u).abs()));
    }
    Ok(ScheduleVerification { pass: residual <= VERIFY_TOL, residual })
}

/// Whether some subset of the scheduled pairs is a perfect matching.
pub fn schedule_has_perfect_matching(schedule: &PairSchedule, n: usize) -> Result<bool> {
    let mut pairs: Vec<(usize, usize)> = schedule.pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let g = SignedGraph::new(n, pairs.into_iter().map(|(a, b)| (a, b, Sign::Positive)))?;
    Ok(has_perfect_matching(&g, true)?.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiniteTimeReport {
    pub alpha_is_half: bool,
    pub n_is_power_of_two: bool,
    pub positive_perfect_matching: bool,
    pub necessary_conditions_hold: bool,
}

/// Necessary conditions for a finite positive-edge schedule to reach `U`.
pub fn finite_time_necessary_checks(g: &SignedGraph, alpha: f64) -> Result<FiniteTimeReport> {
    let alpha_is_half = alpha == 0.5;
    let n_is_power_of_two = g.n().is_power_of_two();
    let positive_perfect_matching = has_perfect_matching(g, true)?.is_some();
    Ok(FiniteTimeReport {
        alpha_is_half,
        n_is_power_of_two,
        positive_perfect_matching,
        necessary_conditions_hold: alpha_is_half && n_is_power_of_two && positive_perfect_matching,
    })
}

/// Backtracking search for a spanning embedding of the `m`-cube into the
/// positive subgraph. Returns `labeling[code] = vertex`.
pub fn find_hypercube_labeling(g: &SignedGraph, m: u32) -> Result<Option<Vec<usize>>> {
    if m > LABELING_SEARCH_MAX_DIM {
        return Err(Error::UnsupportedSize(format!(
            "labeling search supports m <= {LABELING_SEARCH_MAX_DIM}; supply an explicit labeling"
        )));
    }
    let size = 1usize << m;
    if g.n() != size {
        return Err(Error::InvalidLabeling(format!("a {m}-cube needs {size} vertices, graph has {}", g.n())));
    }
    let positive = |u: usize, v: usize| g.sign(u, v) == Some(Sign::Positive);
    let pos_degree: Vec<usize> =
        (0..size).map(|v| g.neighbors(v).iter().filter(|(_, s)| s.is_positive()).count()).collect();
    if pos_degree.iter().any(|&d| d < m as usize) {
        return Ok(None);
    }

    fn extend(
        code: usize,
        m: u32,
        labels: &mut Vec<usize>,
        used: &mut [bool],
        positive: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if code == labels.capacity() {
            return true;
        }
        for v in 0..used.len() {
            if used[v] {
                continue;
            }
            let fits = (0..m).map(|b| code ^ (1 << b)).filter(|&d| d < code).all(|d| positive(labels[d], v));
            if !fits {
                continue;
            }
            used[v] = true;
            labels.push(v);
            if extend(code + 1, m, labels, used, positive) {
                return true;
            }
            labels.pop();
            used[v] = false;
        }
        false
    }

    // The cube is vertex-transitive, so corner 0 may be pinned to vertex 0.
    let mut labels = Vec::with_capacity(size);
    let mut used = vec![false; size];
    labels.push(0);
    used[0] = true;
    Ok(extend(1, m, &mut labels, &mut used, &positive).then_some(labels))
}

//! The i.i.d. node-pair selection process.
//!
//! At each event a node `i` is drawn uniformly, then picks `j` from row `i`
//! of a row-stochastic matrix `P` that complies with the graph. The induced
//! measure on edges is `mu({i,j}) = (p_ij + p_ji) / n`.

use std::fs;
use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionKind {
    /// `p_ij = 1/deg(i)` on edges.
    UniformNeighbor,
    /// `P = (11' - I)/(n-1)`; requires a complete graph.
    Complete,
    /// `P = A(R_n)/2`; requires a ring.
    RingHalf,
    /// Row-major `n x n` matrix.
    Custom(Vec<f64>),
}

impl SelectionKind {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionKind::UniformNeighbor => "uniform-neighbor",
            SelectionKind::Complete => "complete",
            SelectionKind::RingHalf => "ring-half",
            SelectionKind::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairWeight {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption2Branch {
    /// Every diagonal entry of `P` is at least 1/2.
    DiagonalMass,
    /// `P` is doubly stochastic and `n >= 4`.
    DoublyStochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Assumption2 {
    pub holds: bool,
    pub branch: Option<Assumption2Branch>,
}

/// Outcome of one draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairDraw {
    /// `initiator` picked `partner != initiator`.
    Pair { initiator: usize, partner: usize },
    /// The initiator picked itself; the event is a no-op.
    Idle(usize),
}

#[derive(Debug, Clone)]
pub struct SelectionModel {
    n: usize,
    p: Vec<f64>,
    pair_measure: Vec<PairWeight>,
    /// Per row: nonzero columns with cumulative probabilities.
    cumulative: Vec<Vec<(usize, f64)>>,
}

impl SelectionModel {
    /// Validates a row-major matrix against the graph.
    pub fn from_matrix(g: &SignedGraph, p: Vec<f64>) -> Result<Self> {
        let n = g.n();
        if p.len() != n * n {
            return Err(Error::InvalidSelection(format!("expected {} entries, got {}", n * n, p.len())));
        }
        for i in 0..n {
            let row = &p[i * n..(i + 1) * n];
            if let Some(x) = row.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidSelection(format!("row {i} has invalid entry {x}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidSelection(format!("row {i} sums to {sum}")));
            }
            for (j, &x) in row.iter().enumerate() {
                if j != i && x > 0.0 && g.sign(i, j).is_none() {
                    return Err(Error::InvalidSelection(format!("p[{i}][{j}] > 0 but {{{i}, {j}}} is not an edge")));
                }
            }
        }
        let pair_measure = g
            .edges()
            .iter()
            .map(|e| PairWeight { u: e.u, v: e.v, weight: (p[e.u * n + e.v] + p[e.v * n + e.u]) / n as f64 })
            .collect();
        let cumulative = (0..n)
            .map(|i| {
                let mut acc = 0.0;
                p[i * n..(i + 1) * n]
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0.0)
                    .map(|(j, &x)| {
                        acc += x;
                        (j, acc)
                    })
                    .collect()
            })
            .collect();
        Ok(SelectionModel { n, p, pair_measure, cumulative })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.p
    }

    /// Edge measure in the graph's canonical edge order.
    pub fn pair_measure(&self) -> &[PairWeight] {
        &self.pair_measure
    }

    /// Probability that an event is a no-op, `sum_i p_ii / n`.
    pub fn idle_probability(&self) -> f64 {
        (0..self.n).map(|i| self.p(i, i)).sum::<f64>() / self.n as f64
    }

    pub fn assumption2(&self) -> Assumption2 {
        let n = self.n;
        if (0..n).all(|i| self.p(i, i) >= 0.5) {
            return Assumption2 { holds: true, branch: Some(Assumption2Branch::DiagonalMass) };
        }
        let doubly = (0..n).all(|j| ((0..n).map(|i| self.p(i, j)).sum::<f64>() - 1.0).abs() <= 1e-9);
        if doubly && n >= 4 {
            return Assumption2 { holds: true, branch: Some(Assumption2Branch::DoublyStochastic) };
        }
        Assumption2 { holds: false, branch: None }
    }

    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> PairDraw {
        let i = rng.random_range(0..self.n);
        let row = &self.cumulative[i];
        let total = row.last().map_or(0.0, |&(_, c)| c);
        let u: f64 = rng.random::<f64>() * total;
        let k = row.partition_point(|&(_, c)| c <= u).min(row.len() - 1);
        let j = row[k].0;
        if j == i {
            PairDraw::Idle(i)
        } else {
            PairDraw::Pair { initiator: i, partner: j }
        }
    }
}

pub fn make_selection(kind: &SelectionKind, g: &SignedGraph) -> Result<SelectionModel> {
    let n = g.n();
    let mut p = vec![0.0; n * n];
    match kind {
        SelectionKind::UniformNeighbor => {
            for i in 0..n {
                let deg = g.degree(i);
                if deg == 0 {
                    return Err(Error::InvalidSelection(format!("vertex {i} has no neighbours")));
                }
                for &(j, _) in g.neighbors(i) {
                    p[i * n + j] = 1.0 / deg as f64;
                }
            }
        }
        SelectionKind::Complete => {
            if !g.is_complete() || n < 2 {
                return Err(Error::InvalidSelection("complete selection requires a complete graph".into()));
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        p[i * n + j] = 1.0 / (n - 1) as f64;
                    }
                }
            }
        }
        SelectionKind::RingHalf => {
            if n < 3 || g.edge_count() != n || !(0..n).all(|v| g.degree(v) == 2) || !g.is_connected() {
                return Err(Error::InvalidSelection("ring-half selection requires a ring graph".into()));
            }
            for e in g.edges() {
                p[e.u * n + e.v] = 0.5;
                p[e.v * n + e.u] = 0.5;
            }
        }
        SelectionKind::Custom(matrix) => p.clone_from(matrix),
    }
    SelectionModel::from_matrix(g, p)
}

/// Reads an `n x n` matrix from CSV (one row per line, comma separated).
pub fn load_matrix_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_csv(&text)
}

pub fn parse_matrix_csv(text: &str) -> Result<Vec<f64>> {
    let rows: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
    let n = rows.len();
    let mut out = Vec::with_capacity(n * n);
    for (line, row) in rows {
        let values: Vec<f64> = row
            .split(',')
            .map(|f| f.trim().parse::<f64>().map_err(|_| Error::parse(line, format!("invalid number '{}'", f.trim()))))
            .collect::<Result<_>>()?;
        if values.len() != n {
            return Err(Error::parse(line, format!("expected {n} columns, found {}", values.len())));
        }
        out.extend(values);
    }
    Ok(out)
}

/// Seeded, splittable random stream.
///
/// Backed by ChaCha8, a counter-based generator: `substream(seed, index)`
/// selects an independent stream of the same key, so per-trial draws depend
/// only on `(seed, index)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream::substream(seed, 0)
    }

    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RngStream { seed, stream: index, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.rng.get_word_pos()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

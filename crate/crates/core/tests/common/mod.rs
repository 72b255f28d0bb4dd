//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use signed_beliefs::selection::PairDraw;
use signed_beliefs::{Sign, SignedGraph, SelectionModel, UpdateParams};

/// Negative-edge counts of every simple cycle (each cycle reported once per
/// orientation).
pub fn cycle_negative_counts(g: &SignedGraph) -> Vec<usize> {
    let n = g.n();
    let mut out = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        on_path[start] = true;
        walk(g, start, start, 1, 0, &mut on_path, &mut out);
    }
    out
}

fn walk(g: &SignedGraph, start: usize, v: usize, len: usize, neg: usize, on_path: &mut [bool], out: &mut Vec<usize>) {
    for &(w, s) in g.neighbors(v) {
        let neg = neg + usize::from(s == Sign::Negative);
        if w == start && len >= 3 {
            out.push(neg);
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            walk(g, start, w, len + 1, neg, on_path, out);
            on_path[w] = false;
        }
    }
}

/// No cycle with an odd number of negative edges.
pub fn harary_balanced(g: &SignedGraph) -> bool {
    cycle_negative_counts(g).iter().all(|c| c % 2 == 0)
}

/// No cycle with exactly one negative edge.
pub fn davis_balanced(g: &SignedGraph) -> bool {
    cycle_negative_counts(g).iter().all(|&c| c != 1)
}

/// Negative-edge count of a closed vertex walk, or `None` if it is not a
/// simple cycle of `g`.
pub fn cycle_sign_count(g: &SignedGraph, cycle: &[usize]) -> Option<usize> {
    let k = cycle.len();
    if k < 3 {
        return None;
    }
    let mut seen = cycle.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != k {
        return None;
    }
    let mut neg = 0;
    for t in 0..k {
        match g.sign(cycle[t], cycle[(t + 1) % k])? {
            Sign::Negative => neg += 1,
            Sign::Positive => {}
        }
    }
    Some(neg)
}

/// Exhaustive search over `n/2`-subsets of `pairs` for a perfect matching.
pub fn brute_force_matching(n: usize, pairs: &[(usize, usize)]) -> bool {
    if n % 2 == 1 {
        return false;
    }
    fn pick(n: usize, pairs: &[(usize, usize)], from: usize, used: &mut Vec<bool>, left: usize) -> bool {
        if left == 0 {
            return used.iter().all(|&u| u);
        }
        for k in from..pairs.len() {
            let (a, b) = pairs[k];
            if a != b && !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                if pick(n, pairs, k + 1, used, left - 1) {
                    return true;
                }
                used[a] = false;
                used[b] = false;
            }
        }
        false
    }
    pick(n, pairs, 0, &mut vec![false; n], n / 2)
}

/// The realized update matrix for one draw of the symmetric rule.
pub fn realized_w(g: &SignedGraph, draw: PairDraw, alpha: f64, beta: f64) -> DMatrix<f64> {
    let n = g.n();
    let mut w = DMatrix::identity(n, n);
    if let PairDraw::Pair { initiator: i, partner: j } = draw {
        let c = match g.sign(i, j).unwrap() {
            Sign::Positive => -alpha,
            Sign::Negative => beta,
        };
        w[(i, i)] += c;
        w[(j, j)] += c;
        w[(i, j)] -= c;
        w[(j, i)] -= c;
    }
    w
}

pub fn averaging(n: usize) -> DMatrix<f64> {
    DMatrix::from_element(n, n, 1.0 / n as f64)
}

/// Exact `E{(W-U) ⊗ (W-U)}` by enumerating the selection distribution.
pub fn dense_theta(g: &SignedGraph, sel: &SelectionModel, alpha: f64, beta: f64) -> DMatrix<f64> {
    let n = g.n();
    let u = averaging(n);
    let mut theta = DMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let prob = sel.p(i, j) / n as f64;
            if prob == 0.0 {
                continue;
            }
            let draw = if i == j { PairDraw::Idle(i) } else { PairDraw::Pair { initiator: i, partner: j } };
            let m = realized_w(g, draw, alpha, beta) - &u;
            theta += m.kronecker(&m) * prob;
        }
    }
    theta
}

/// Largest eigenvalue of `theta` whose eigenvector is not orthogonal to
/// `vec(I - U)`.
pub fn dense_lambda_star(theta: &DMatrix<f64>, n: usize) -> f64 {
    let seed = DMatrix::identity(n, n) - averaging(n);
    let seed = nalgebra::DVector::from_iterator(n * n, seed.iter().copied());
    let eig = SymmetricEigen::new(theta.clone());
    let mut best = f64::NEG_INFINITY;
    for k in 0..eig.eigenvalues.len() {
        if eig.eigenvectors.column(k).dot(&seed).abs() > 1e-9 {
            best = best.max(eig.eigenvalues[k]);
        }
    }
    best
}

pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Entrywise mean and standard error of `f(W)` over `samples` draws.
pub fn sample_moments<R: Rng>(
    g: &SignedGraph,
    sel: &SelectionModel,
    params: &UpdateParams,
    samples: usize,
    rng: &mut R,
    f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = g.n();
    let mut sum = DMatrix::zeros(n, n);
    let mut sq = DMatrix::zeros(n, n);
    for _ in 0..samples {
        let w = f(&realized_w(g, sel.sample_pair(rng), params.alpha, params.beta));
        sq += w.component_mul(&w);
        sum += w;
    }
    let s = samples as f64;
    let mean = sum / s;
    let var = (sq / s - mean.component_mul(&mean)).map(|v| v.max(0.0));
    let se = var.map(|v| (v / (s - 1.0)).sqrt());
    (mean, se)
}

/// Every connected graph on `n` vertices with every sign assignment.
pub fn all_connected_signed_graphs(n: usize) -> Vec<SignedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let chosen: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        let skeleton = SignedGraph::new(n, chosen.iter().map(|&(u, v)| (u, v, Sign::Positive))).unwrap();
        if !skeleton.is_connected() {
            continue;
        }
        for signs in 0u32..1 << chosen.len() {
            let edges = chosen.iter().enumerate().map(|(k, &(u, v))| {
                (u, v, if signs >> k & 1 == 1 { Sign::Negative } else { Sign::Positive })
            });
            out.push(SignedGraph::new(n, edges).unwrap());
        }
    }
    out
}

/// A random connected signed graph: a random spanning tree plus extra
/// edges with probability `density`.
pub fn random_connected_signed_graph<R: Rng>(n: usize, density: f64, neg_prob: f64, rng: &mut R) -> SignedGraph {
    let mut edges = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        order.swap(k, rng.random_range(0..=k));
    }
    let mut present = vec![false; n * n];
    for k in 1..n {
        let (u, v) = (order[k], order[rng.random_range(0..k)]);
        present[u.min(v) * n + u.max(v)] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if present[u * n + v] || rng.random::<f64>() < density {
                let s = if rng.random::<f64>() < neg_prob { Sign::Negative } else { Sign::Positive };
                edges.push((u, v, s));
            }
        }
    }
    SignedGraph::new(n, edges).unwrap()
}

/// Pass/fail line in a fixed format.
pub fn report(id: u32, name: &str, pass: bool, detail: impl std::fmt::Display) -> bool {
    println!("criterion {id:>2} {}: {name} ({detail})", if pass { "PASS" } else { "FAIL" });
    pass
}

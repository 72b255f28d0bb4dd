//! Convergence in mean and mean square: expected update matrices, the
//! thresholds β★ and β♮, and the restricted second-moment radius λ★.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph};
use crate::numerics::{
    bisect_threshold, eigen_sym, lambda_max, restricted_spectral_radius, sym_eigenvalues, PowerIteration, RankOneTerm,
    SymMatrix, ThetaOperator, BISECTION_TOL,
};
use crate::selection::{Assumption2, SelectionModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converge,
    Diverge,
    Indeterminate,
}

impl Verdict {
    /// `Converge` below 1, `Diverge` above 1.
    pub fn from_radius(value: f64) -> Self {
        if value < 1.0 {
            Verdict::Converge
        } else if value > 1.0 {
            Verdict::Diverge
        } else {
            Verdict::Indeterminate
        }
    }
}

/// Symmetrized selection weights split by sign, with their Laplacians.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    n: usize,
    edges: Vec<(usize, usize, Sign, f64)>,
    p_dagger: SymMatrix,
    l_pos: SymMatrix,
    l_neg: SymMatrix,
    positive_connected: bool,
    has_negative: bool,
    idle: f64,
    assumption2: Assumption2,
}

impl SpectralModel {
    pub fn new(g: &SignedGraph, selection: &SelectionModel) -> Result<Self> {
        let n = g.n();
        if selection.n() != n {
            return Err(Error::InvalidSelection(format!("selection is {}x{0}, graph has {n} vertices", selection.n())));
        }
        let mut p_dagger = SymMatrix::zeros(n);
        let mut l_pos = SymMatrix::zeros(n);
        let mut l_neg = SymMatrix::zeros(n);
        let mut edges = Vec::with_capacity(g.edge_count());
        for (e, pw) in g.edges().iter().zip(selection.pair_measure()) {
            let w = pw.weight;
            p_dagger.add_sym(e.u, e.v, w);
            let l = if e.sign.is_positive() { &mut l_pos } else { &mut l_neg };
            l.add_sym(e.u, e.u, w);
            l.add_sym(e.v, e.v, w);
            l.add_sym(e.u, e.v, -w);
            edges.push((e.u, e.v, e.sign, w));
        }
        Ok(SpectralModel {
            n,
            edges,
            p_dagger,
            l_pos,
            l_neg,
            positive_connected: g.is_positive_connected(),
            has_negative: g.has_negative_edge(),
            idle: selection.idle_probability(),
            assumption2: selection.assumption2(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Off-diagonal part of `(P + P')/n`.
    pub fn p_dagger(&self) -> &SymMatrix {
        &self.p_dagger
    }

    pub fn laplacian_positive(&self) -> &SymMatrix {
        &self.l_pos
    }

    pub fn laplacian_negative(&self) -> &SymMatrix {
        &self.l_neg
    }

    pub fn positive_connected(&self) -> bool {
        self.positive_connected
    }

    pub fn has_negative(&self) -> bool {
        self.has_negative
    }

    pub fn assumption2(&self) -> Assumption2 {
        self.assumption2
    }

    /// `I - a L⁺ + b L⁻`.
    fn affine(&self, a: f64, b: f64) -> SymMatrix {
        let i = SymMatrix::identity(self.n);
        i.combine(1.0, &self.l_pos, -a).combine(1.0, &self.l_neg, b)
    }

    /// `E{W} = I - αL⁺ + βL⁻`.
    pub fn expected_w(&self, alpha: f64, beta: f64) -> SymMatrix {
        let m = self.affine(alpha, beta);
        debug_assert!((0..self.n).all(|i| (m.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-9));
        m
    }

    /// `E{W²} = I - 2α(1-α)L⁺ + 2β(1+β)L⁻`.
    pub fn expected_w2(&self, alpha: f64, beta: f64) -> SymMatrix {
        self.affine(2.0 * alpha * (1.0 - alpha), 2.0 * beta * (1.0 + beta))
    }

    fn minus_u(&self, m: &SymMatrix) -> SymMatrix {
        m.combine(1.0, &SymMatrix::averaging(self.n), -1.0)
    }

    /// `f(α, β) = λmax(E{W} - U)`.
    pub fn f_value(&self, alpha: f64, beta: f64) -> Result<f64> {
        lambda_max(&self.minus_u(&self.expected_w(alpha, beta)))
    }

    /// Second-smallest eigenvalue of `L⁺`, exactly 0 when the positive
    /// graph is disconnected.
    pub fn lambda2_positive(&self) -> Result<f64> {
        if !self.positive_connected || self.n < 2 {
            return Ok(0.0);
        }
        Ok(sym_eigenvalues(&self.l_pos)?[1])
    }

    pub fn lambda_max_negative(&self) -> Result<f64> {
        if !self.has_negative {
            return Ok(0.0);
        }
        lambda_max(&self.l_neg)
    }

    /// Root of `f(α, β) = 1` in β.
    pub fn beta_star(&self, alpha: f64, tol: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParams(format!("beta_star requires alpha in (0, 1], got {alpha}")));
        }
        if !self.positive_connected {
            return Err(Error::PositiveDisconnected);
        }
        if !self.has_negative {
            return Err(Error::BracketFailure("no finite threshold in range: no negative edges".into()));
        }
        bisect_threshold(|b| Ok(self.f_value(alpha, b)? - 1.0), 0.0, 1.0, tol)
    }

    /// `(λmax(E{W²} - U), f(α, β), λmin(E{W²} - U))` with the minimum taken
    /// over the complement of `1`.
    pub fn mean_square_bounds(&self, alpha: f64, beta: f64) -> Result<MeanSquareBounds> {
        let m = self.minus_u(&self.expected_w2(alpha, beta));
        let e = eigen_sym(&m)?;
        let l_conv = e.max();
        let f = self.f_value(alpha, beta)?;
        let root_n = (self.n as f64).sqrt();
        // 1 is an eigenvector of E{W²} - U with eigenvalue 0; drop it.
        let consensus = (0..e.values.len())
            .max_by(|&a, &b| alignment(&e.vectors[a], root_n).total_cmp(&alignment(&e.vectors[b], root_n)))
            .expect("non-empty spectrum");
        let l_min = e
            .values
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != consensus)
            .map(|(_, &v)| v)
            .fold(f64::INFINITY, f64::min);
        let l_min = if l_min.is_finite() { l_min } else { 0.0 };
        let verdict = if l_conv < 1.0 {
            Verdict::Converge
        } else if f > 1.0 || l_min > 1.0 {
            Verdict::Diverge
        } else {
            Verdict::Indeterminate
        };
        Ok(MeanSquareBounds { l_conv, f, l_min, verdict })
    }

    /// `β♮ = (-1 + √(1 + 4rα(1-α)))/2` with `r = λ₂(L⁺)/λmax(L⁻)`.
    /// Infinite without negative edges, 0 when the positive graph is
    /// disconnected.
    pub fn beta_natural(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParams(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        if !self.positive_connected {
            log::warn!("positive subgraph is disconnected; beta_natural reported as 0");
            return Ok(0.0);
        }
        if !self.has_negative {
            return Ok(f64::INFINITY);
        }
        let r = self.lambda2_positive()? / self.lambda_max_negative()?;
        Ok(beta_natural_closed_form(r, alpha))
    }

    /// `Θ = E{(W - U) ⊗ (W - U)}` for the symmetric rule.
    pub fn theta_operator(&self, alpha: f64, beta: f64) -> ThetaOperator {
        let mut terms: Vec<RankOneTerm> = self
            .edges
            .iter()
            .map(|&(i, j, sign, weight)| {
                let coeff = if sign.is_positive() { -alpha } else { beta };
                RankOneTerm { i, j, coeff, weight }
            })
            .collect();
        if self.idle > 0.0 {
            terms.push(RankOneTerm { i: 0, j: 0, coeff: 0.0, weight: self.idle });
        }
        ThetaOperator::new(self.n, terms)
    }

    /// Power iteration of `Θ` seeded at `vec(I - U)`.
    pub fn lambda_star(&self, alpha: f64, beta: f64) -> Result<PowerIteration> {
        let theta = self.theta_operator(alpha, beta);
        let seed = theta.seed();
        if seed.iter().all(|&x| x == 0.0) {
            // n = 1: nothing to contract.
            return Ok(PowerIteration { value: 0.0, iterations: 0, converged: true });
        }
        restricted_spectral_radius(|v| theta.apply(v), &seed)
    }

    /// Full analysis at one parameter point.
    pub fn analyze(&self, alpha: f64, beta: f64) -> Result<AnalysisReport> {
        let f = self.f_value(alpha, beta)?;
        let beta_star = if alpha > 0.0 && self.positive_connected && self.has_negative {
            Some(self.beta_star(alpha, BISECTION_TOL)?)
        } else {
            None
        };
        let beta_natural = Some(self.beta_natural(alpha)?).filter(|b| b.is_finite());
        let ms = self.mean_square_bounds(alpha, beta)?;
        let ls = self.lambda_star(alpha, beta)?;
        let threshold = match beta_star {
            Some(bs) if beta < bs => Verdict::Converge,
            Some(bs) if beta > bs => Verdict::Diverge,
            Some(_) => Verdict::Indeterminate,
            None if self.positive_connected && !self.has_negative && alpha > 0.0 => Verdict::Converge,
            None => Verdict::Indeterminate,
        };
        let lambda_star_verdict = if ls.converged { Verdict::from_radius(ls.value) } else { Verdict::Indeterminate };
        Ok(AnalysisReport {
            alpha,
            beta,
            f,
            beta_star,
            beta_natural,
            ms_bounds: [ms.l_conv, ms.f, ms.l_min],
            lambda_star: ls.value,
            lambda_star_iterations: ls.iterations,
            lambda_star_converged: ls.converged,
            verdicts: Verdicts {
                expectation: Verdict::from_radius(f),
                threshold,
                mean_square_bounds: ms.verdict,
                lambda_star: lambda_star_verdict,
            },
            assumption2: self.assumption2,
        })
    }
}

fn alignment(v: &[f64], root_n: f64) -> f64 {
    (v.iter().sum::<f64>() / root_n).abs()
}

pub fn beta_natural_closed_form(r: f64, alpha: f64) -> f64 {
    (-1.0 + (1.0 + 4.0 * r * alpha * (1.0 - alpha)).sqrt()) / 2.0
}

/// Erdős–Rényi mean threshold `p★ = α/(α+β)`.
pub fn er_threshold(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha >= 0.0 && beta >= 0.0 && alpha + beta > 0.0) {
        return Err(Error::InvalidParams(format!("need alpha, beta >= 0 with alpha + beta > 0, got ({alpha}, {beta})")));
    }
    Ok(alpha / (alpha + beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSquareBounds {
    pub l_conv: f64,
    pub f: f64,
    pub l_min: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdicts {
    /// `f < 1`.
    pub expectation: Verdict,
    /// `β` against `β★`.
    pub threshold: Verdict,
    pub mean_square_bounds: Verdict,
    pub lambda_star: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub alpha: f64,
    pub beta: f64,
    pub f: f64,
    pub beta_star: Option<f64>,
    pub beta_natural: Option<f64>,
    pub ms_bounds: [f64; 3],
    pub lambda_star: f64,
    pub lambda_star_iterations: usize,
    pub lambda_star_converged: bool,
    pub verdicts: Verdicts,
    pub assumption2: Assumption2,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::{make_selection, SelectionKind};

    const P: Sign = Sign::Positive;
    const N: Sign = Sign::Negative;

    fn complete_model(n: usize, neg: &[(usize, usize)]) -> SpectralModel {
        let g = SignedGraph::complete(n, |u, v| if neg.contains(&(u, v)) { N } else { P });
        let sel = make_selection(&SelectionKind::Complete, &g).unwrap();
        SpectralModel::new(&g, &sel).unwrap()
    }

    #[test]
    fn k3_expected_w() {
        let m = complete_model(3, &[]);
        let ew = m.expected_w(0.6, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let l = if i == j { 2.0 } else { -1.0 };
                assert!((ew.get(i, j) - (f64::from(u8::from(i == j)) - 0.2 * l)).abs() < 1e-15);
            }
        }
        assert_eq!(m.expected_w(0.0, 0.0), SymMatrix::identity(3));
        assert!((m.f_value(0.4, 0.0).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn pure_repulsion_expands() {
        let m = complete_model(4, &[(0, 1)]);
        assert!(m.f_value(0.0, 0.1).unwrap() > 1.0);
    }

    #[test]
    fn k3_one_negative_beta_star() {
        let m = complete_model(3, &[(0, 1)]);
        assert!((m.beta_star(0.5, 1e-10).unwrap() - 0.25).abs() < 1e-8);
    }

    #[test]
    fn beta_star_preconditions() {
        let m = complete_model(3, &[(0, 1)]);
        assert!(m.beta_star(0.0, 1e-8).is_err());
        let g = SignedGraph::new(3, [(0, 1, P), (1, 2, N), (0, 2, N)]).unwrap();
        let sel = make_selection(&SelectionKind::Complete, &g).unwrap();
        let m = SpectralModel::new(&g, &sel).unwrap();
        assert!(matches!(m.beta_star(0.5, 1e-8), Err(Error::PositiveDisconnected)));
        assert_eq!(m.beta_natural(0.5).unwrap(), 0.0);
    }

    #[test]
    fn beta_natural_examples() {
        assert!((beta_natural_closed_form(2.0, 0.5) - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        let m = complete_model(4, &[(0, 1)]);
        assert_eq!(m.beta_natural(0.0).unwrap(), 0.0);
        assert_eq!(m.beta_natural(1.0).unwrap(), 0.0);
        assert_eq!(complete_model(3, &[]).beta_natural(0.5).unwrap(), f64::INFINITY);
    }

    #[test]
    fn mean_square_examples() {
        let m = complete_model(4, &[]);
        assert!(m.mean_square_bounds(0.5, 0.0).unwrap().l_conv < 1.0);
        for alpha in [0.0, 1.0] {
            let b = m.mean_square_bounds(alpha, 0.0).unwrap();
            assert!((b.l_conv - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_star_single_edge_is_zero() {
        let g = SignedGraph::new(2, [(0, 1, P)]).unwrap();
        let sel = make_selection(&SelectionKind::Complete, &g).unwrap();
        let m = SpectralModel::new(&g, &sel).unwrap();
        let ls = m.lambda_star(0.5, 0.0).unwrap();
        assert!(ls.converged);
        assert_eq!(ls.value, 0.0);
    }

    #[test]
    fn er_threshold_examples() {
        assert_eq!(er_threshold(0.4, 0.4).unwrap(), 0.5);
        assert_eq!(er_threshold(1.0, 0.0).unwrap(), 1.0);
        assert!(er_threshold(0.0, 0.0).is_err());
    }

    #[test]
    fn report_for_positive_graph_converges() {
        let r = complete_model(4, &[]).analyze(0.5, 0.0).unwrap();
        assert_eq!(r.verdicts.expectation, Verdict::Converge);
        assert_eq!(r.verdicts.threshold, Verdict::Converge);
        assert_eq!(r.verdicts.mean_square_bounds, Verdict::Converge);
        assert_eq!(r.verdicts.lambda_star, Verdict::Converge);
        assert_eq!(r.beta_star, None);
    }
}

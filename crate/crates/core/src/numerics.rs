//! Dense symmetric linear algebra for the spectral analysis.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Sizes above this use a tridiagonal QR eigenvalue routine instead of
/// Jacobi rotations in [`sym_eigenvalues`].
pub const JACOBI_MAX_DIM: usize = 64;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_RELATIVE_TOL: f64 = 1e-11;

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITERATIONS: usize = 100_000;

pub const BISECTION_TOL: f64 = 1e-8;
const BRACKET_DOUBLINGS: usize = 60;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds from row-major entries, symmetrizing by averaging with the
    /// transpose.
    pub fn new(n: usize, mut data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "expected {n}x{n} entries");
        for i in 0..n {
            for j in i + 1..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        SymMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// The averaging projector `11'/n`.
    pub fn averaging(n: usize) -> Self {
        SymMatrix { n, data: vec![1.0 / n as f64; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SymMatrix::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Adds `value` to both `(i, j)` and `(j, i)` (once on the diagonal).
    pub fn add_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] += value;
        if i != j {
            self.data[j * self.n + i] += value;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &SymMatrix, b: f64) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        SymMatrix { n: self.n, data }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps over all off-diagonal pairs, annihilating each with a plane
/// rotation, until the off-diagonal Frobenius norm drops below
/// `1e-11 * ||m||_F`.
pub fn eigen_sym(m: &SymMatrix) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = JACOBI_RELATIVE_TOL * m.frobenius_norm();

    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NotConverged { what: "Jacobi eigensolver", iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|i| v[i * n + k]).collect()).collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Ascending eigenvalues only. Jacobi up to [`JACOBI_MAX_DIM`], nalgebra's
/// tridiagonal QR beyond.
pub fn sym_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    if m.n <= JACOBI_MAX_DIM {
        return Ok(eigen_sym(m)?.values);
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let dense = DMatrix::from_row_slice(m.n, m.n, &m.data);
    let mut values: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn lambda_max(m: &SymMatrix) -> Result<f64> {
    Ok(*sym_eigenvalues(m)?.last().expect("non-empty matrix"))
}

/// One term of a random symmetric update `W = I + coeff * (e_i - e_j)(e_i - e_j)'`
/// drawn with probability `weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: f64,
    pub weight: f64,
}

/// The second-moment operator `E{(W - U) ⊗ (W - U)}` acting on `vec(V)`,
/// never materialized.
///
/// Every realization is `W - U = Q + c dd'` with `Q = I - U` and `d ⊥ 1`
/// (`c = 0` for idle events), so
/// `E{(W-U) V (W-U)} = QVQ + Σ w c (QV dd' + dd' VQ) + Σ w c² (d'Vd) dd'`,
/// which costs `O(n² + |E| n)` per application.
#[derive(Debug, Clone)]
pub struct ThetaOperator {
    n: usize,
    terms: Vec<RankOneTerm>,
}

impl ThetaOperator {
    pub fn new(n: usize, terms: Vec<RankOneTerm>) -> Self {
        ThetaOperator { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[RankOneTerm] {
        &self.terms
    }

    /// `vec(I - U)`, the seed of the mean-square recursion.
    pub fn seed(&self) -> Vec<f64> {
        let n = self.n;
        let u = 1.0 / n as f64;
        (0..n * n).map(|k| if k / n == k % n { 1.0 - u } else { -u }).collect()
    }

    /// `v` is `vec(V)` in row-major order (`V` need not be symmetric).
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(v.len(), n * n);
        let nf = n as f64;
        let at = |m: &[f64], r: usize, c: usize| m[r * n + c];

        // QV: subtract column means; VQ: subtract row means; QVQ: both.
        let col_mean: Vec<f64> = (0..n).map(|c| (0..n).map(|r| at(v, r, c)).sum::<f64>() / nf).collect();
        let row_mean: Vec<f64> = (0..n).map(|r| v[r * n..(r + 1) * n].iter().sum::<f64>() / nf).collect();
        let grand = row_mean.iter().sum::<f64>() / nf;

        let mut out: Vec<f64> = (0..n * n).map(|k| v[k] - row_mean[k / n] - col_mean[k % n] + grand).collect();
        let qv = |r: usize, c: usize| at(v, r, c) - col_mean[c];
        let vq = |r: usize, c: usize| at(v, r, c) - row_mean[r];

        for term in &self.terms {
            let (i, j, c, w) = (term.i, term.j, term.coeff, term.weight);
            if c == 0.0 || w == 0.0 {
                continue;
            }
            let wc = w * c;
            // QV dd': column i gains QV d, column j loses it.
            for r in 0..n {
                let qvd = qv(r, i) - qv(r, j);
                out[r * n + i] += wc * qvd;
                out[r * n + j] -= wc * qvd;
            }
            // dd' VQ: row i gains d'VQ, row j loses it.
            for col in 0..n {
                let dvq = vq(i, col) - vq(j, col);
                out[i * n + col] += wc * dvq;
                out[j * n + col] -= wc * dvq;
            }
            let dvd = at(v, i, i) - at(v, i, j) - at(v, j, i) + at(v, j, j);
            let s = w * c * c * dvd;
            out[i * n + i] += s;
            out[j * n + j] += s;
            out[i * n + j] -= s;
            out[j * n + i] -= s;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration started exactly at `seed`, reporting the Rayleigh
/// quotient. For a symmetric operator this converges to the dominant
/// eigenvalue among the eigenspaces the seed is not orthogonal to.
pub fn restricted_spectral_radius(apply: impl Fn(&[f64]) -> Vec<f64>, seed: &[f64]) -> Result<PowerIteration> {
    restricted_spectral_radius_with(apply, seed, POWER_TOL, POWER_MAX_ITERATIONS)
}

pub fn restricted_spectral_radius_with(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    seed: &[f64],
    tol: f64,
    max_iterations: usize,
) -> Result<PowerIteration> {
    if seed.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let seed_norm = norm(seed);
    if seed_norm == 0.0 {
        return Err(Error::ZeroSeed);
    }
    let mut v: Vec<f64> = seed.iter().map(|x| x / seed_norm).collect();
    let mut previous = f64::NAN;
    for iteration in 1..=max_iterations {
        let w = apply(&v);
        let rayleigh = dot(&v, &w);
        let w_norm = norm(&w);
        if w_norm == 0.0 {
            return Ok(PowerIteration { value: 0.0, iterations: iteration, converged: true });
        }
        if (rayleigh - previous).abs() < tol {
            return Ok(PowerIteration { value: rayleigh, iterations: iteration, converged: true });
        }
        previous = rayleigh;
        v = w.into_iter().map(|x| x / w_norm).collect();
    }
    Ok(PowerIteration { value: previous, iterations: max_iterations, converged: false })
}

/// Root of a nondecreasing `h` by bisection. The upper end is doubled up
/// to 60 times until `h(hi) >= 0`.
pub fn bisect_threshold(mut h: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::BracketFailure(format!("invalid interval [{lo}, {hi}] or tolerance {tol}")));
    }
    let check = |x: f64, value: f64| {
        if value.is_nan() {
            Err(Error::BracketFailure(format!("h({x}) is NaN")))
        } else {
            Ok(value)
        }
    };
    let mut lo = lo;
    let mut hi = hi;
    if check(lo, h(lo)?)? > 0.0 {
        return Err(Error::BracketFailure(format!("h({lo}) > 0 at the lower end")));
    }
    let mut doublings = 0;
    while check(hi, h(hi)?)? < 0.0 {
        if doublings == BRACKET_DOUBLINGS {
            return Err(Error::BracketFailure(format!("no sign change up to {hi}")));
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
    }
    while hi - lo > 2.0 * tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if check(mid, h(mid)?)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

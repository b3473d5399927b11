use std::sync::Once;

use faer::linalg::solvers::Solve;
use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::sparse::linalg::solvers::Llt;
use faer::{Mat, Par, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DiscreteOperator;
use crate::{Error, Result};

/// Systems up to this size are solved densely.
pub const DENSE_LIMIT: usize = 1200;
const SEED: u64 = 0x5eed_2b0b;
const MAX_RESTARTS: usize = 40;
const KRYLOV_STEPS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `M`-orthonormal, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `|A v - lambda M v| / |M v|`.
    pub residuals: Vec<f64>,
}

fn sequential_faer() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| faer::set_global_parallelism(Par::Seq));
}

pub fn residual(op: &DiscreteOperator, lambda: f64, v: &[f64]) -> f64 {
    let av = op.a.mul_vec(v);
    let mv = op.m.mul_vec(v);
    let num: f64 = av.iter().zip(&mv).map(|(a, m)| (a - lambda * m).powi(2)).sum();
    let den: f64 = mv.iter().map(|m| m * m).sum();
    (num / den).sqrt()
}

/// The `m` algebraically smallest eigenpairs of `A v = lambda M v`.
pub fn solve_lowest(op: &DiscreteOperator, m: usize, tol: f64) -> Result<SpectrumResult> {
    if m == 0 || m > op.dof_count {
        return Err(Error::InvalidArgument(format!("requested {m} eigenpairs of {} dofs", op.dof_count)));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    sequential_faer();
    let mut out = if op.dof_count <= DENSE_LIMIT { solve_dense(op, m)? } else { solve_krylov(op, m, tol)? };
    for v in &mut out.eigenvectors {
        fix_sign(v);
    }
    out.residuals = out.eigenvalues.iter().zip(&out.eigenvectors).map(|(&l, v)| residual(op, l, v)).collect();
    let worst = out.residuals.iter().copied().fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::Solver { reason: format!("residual above tolerance {tol:e}"), best_residual: worst });
    }
    Ok(out)
}

/// Makes the largest-magnitude entry positive.
fn fix_sign(v: &mut [f64]) {
    let pivot = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn solve_dense(op: &DiscreteOperator, m: usize) -> Result<SpectrumResult> {
    let n = op.dof_count;
    let a = op.a.to_dense();
    let mass = op.m.to_dense();
    let llt = mass
        .llt(Side::Lower)
        .map_err(|_| Error::Solver { reason: "mass matrix is not positive definite".into(), best_residual: f64::NAN })?;
    let l = llt.L();
    // C = L^{-1} A L^{-T}
    let mut x = a.clone();
    solve_lower_triangular_in_place(l, x.as_mut(), Par::Seq);
    let mut c = x.transpose().to_owned();
    solve_lower_triangular_in_place(l, c.as_mut(), Par::Seq);
    let sym = Mat::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    let eig = sym
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Solver { reason: "dense eigendecomposition failed".into(), best_residual: f64::NAN })?;
    let s = eig.S();
    let mut y = eig.U().subcols(0, m).to_owned();
    solve_upper_triangular_in_place(l.transpose(), y.as_mut(), Par::Seq);
    Ok(SpectrumResult {
        eigenvalues: (0..m).map(|i| s[i]).collect(),
        eigenvectors: (0..m).map(|j| (0..n).map(|i| y[(i, j)]).collect()).collect(),
        residuals: Vec::new(),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// `M`-orthonormal basis kept together with `M` times each vector.
struct Basis<'a> {
    mass: &'a super::CsrMatrix,
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
}

impl<'a> Basis<'a> {
    /// Orthogonalises `w` against the basis twice and appends it unless it
    /// has (numerically) vanished.
    fn push(&mut self, mut w: Vec<f64>) -> bool {
        let scale0 = dot(&w, &self.mass.mul_vec(&w)).sqrt();
        if !(scale0 > 0.0) {
            return false;
        }
        for _ in 0..2 {
            for (v, mv) in self.v.iter().zip(&self.mv) {
                let c = dot(mv, &w);
                axpy(-c, v, &mut w);
            }
        }
        let mw = self.mass.mul_vec(&w);
        let norm = dot(&w, &mw).sqrt();
        if !(norm > 1e-10 * scale0) {
            return false;
        }
        self.v.push(w.iter().map(|x| x / norm).collect());
        self.mv.push(mw.iter().map(|x| x / norm).collect());
        true
    }
}

/// Shift below the spectrum, found by probing Cholesky factorisations of
/// `A - sigma M`. The Rayleigh quotient of the constant function bounds
/// `lambda_1` from above and sets the scale of the first guess.
fn positive_shift(op: &DiscreteOperator) -> Result<(f64, Llt<usize, f64>)> {
    let ones = vec![1.0; op.dof_count];
    let rho = op.a.bilinear(&ones, &ones) / op.m.bilinear(&ones, &ones);
    let step = rho.abs().max(1.0);
    let mut sigma = rho - step;
    for k in 0..60 {
        let shifted = op.a.combine(1.0, &op.m, -sigma).to_faer()?;
        if let Ok(llt) = shifted.sp_cholesky(Side::Lower) {
            return Ok((sigma, llt));
        }
        sigma -= step * 2f64.powi(k);
    }
    Err(Error::Solver { reason: "no shift below the spectrum found".into(), best_residual: f64::NAN })
}

/// Lowest `keep` Ritz pairs of `A` on the span of an `M`-orthonormal basis.
fn rayleigh_ritz(op: &DiscreteOperator, basis: &[Vec<f64>], keep: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = op.dof_count;
    let k = basis.len();
    let av: Vec<Vec<f64>> = basis.iter().map(|v| op.a.mul_vec(v)).collect();
    let h = Mat::from_fn(k, k, |i, j| 0.5 * (dot(&basis[i], &av[j]) + dot(&basis[j], &av[i])));
    let eig = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Solver { reason: "Ritz problem failed".into(), best_residual: f64::NAN })?;
    let (s, u) = (eig.S(), eig.U());
    let keep = keep.min(k);
    let vectors = (0..keep)
        .map(|j| {
            let mut y = vec![0.0; n];
            for (i, v) in basis.iter().enumerate() {
                axpy(u[(i, j)], v, &mut y);
            }
            y
        })
        .collect();
    Ok(((0..keep).map(|j| s[j]).collect(), vectors))
}

fn solve_krylov(op: &DiscreteOperator, m: usize, tol: f64) -> Result<SpectrumResult> {
    let n = op.dof_count;
    let block = (m + 2).max(3).min(n);
    let (_, llt) = positive_shift(op)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut start: Vec<Vec<f64>> = (0..block).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let apply = |mv: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let mut rhs = Mat::from_fn(n, mv.len(), |i, j| mv[j][i]);
        llt.solve_in_place(rhs.as_mut());
        (0..mv.len()).map(|j| (0..n).map(|i| rhs[(i, j)]).collect()).collect()
    };
    let mut best = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        let mut basis = Basis { mass: &op.m, v: Vec::new(), mv: Vec::new() };
        let mut last = Vec::new();
        for w in start.drain(..) {
            let before = basis.v.len();
            if basis.push(w) {
                last.push(before);
            }
        }
        for _ in 0..KRYLOV_STEPS {
            if basis.v.len() >= n || last.is_empty() {
                break;
            }
            let images = apply(&last.iter().map(|&i| basis.mv[i].clone()).collect::<Vec<_>>());
            last.clear();
            for w in images {
                let before = basis.v.len();
                if basis.v.len() < n && basis.push(w) {
                    last.push(before);
                }
            }
        }
        let (values, ritz) = rayleigh_ritz(op, &basis.v, block)?;
        // one shift-invert step on the Ritz block strips rounding noise picked
        // up by the deeper Krylov vectors
        let mut polished = Basis { mass: &op.m, v: Vec::new(), mv: Vec::new() };
        for w in apply(&ritz.iter().map(|y| op.m.mul_vec(y)).collect::<Vec<_>>()) {
            polished.push(w);
        }
        let (values, ritz) = if polished.v.len() >= m { rayleigh_ritz(op, &polished.v, block)? } else { (values, ritz) };
        let keep = values.len();
        let worst = (0..m.min(keep)).map(|j| residual(op, values[j], &ritz[j])).fold(0.0, f64::max);
        best = best.min(worst);
        if keep >= m && worst <= 0.5 * tol {
            return Ok(SpectrumResult {
                eigenvalues: values[..m].to_vec(),
                eigenvectors: ritz[..m].to_vec(),
                residuals: Vec::new(),
            });
        }
        start = ritz;
    }
    Err(Error::Solver { reason: format!("no convergence after {MAX_RESTARTS} restarts"), best_residual: best })
}

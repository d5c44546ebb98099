//! Smallest eigenpairs of the symmetric pencil A v = Lambda M v.
//!
//! Below [`DENSE_CROSSOVER`] free DOFs the pencil is reduced through the
//! Cholesky factor of M and solved densely, then polished by a few steps of
//! inverse subspace iteration. Above it, block inverse subspace iteration
//! with the Cholesky factor of A runs from a fixed start block.

use alloc::vec::Vec;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::assembly::{AssembledForms, EnergyFactor};
use crate::error::{Error, Result};

/// Largest pencil solved by dense reduction.
pub const DENSE_CROSSOVER: usize = 800;
/// Default bound on the relative residual. Storing an eigenvector in f64
/// alone leaves a residual near eps * |A| / (Lambda_1 |M|), which grows like
/// h^-4 and passes 1e-8 around 200 cubic elements on a unit interval.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Relative change of Ritz values regarded as converged.
const STEADY_CHANGE: f64 = 1e-14;
/// Relative gap below which neighbouring eigenvalues form a cluster.
pub const CLUSTER_GAP: f64 = 1e-8;
const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    Dense,
    SubspaceIteration,
}

/// Certified eigenpairs, ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// M-orthonormal eigenvectors as columns.
    pub vectors: DMatrix<f64>,
    /// |A v - Lambda M v| / (Lambda |M v|).
    pub residuals: Vec<f64>,
    /// Index ranges [start, end) of eigenvalues closer than [`CLUSTER_GAP`].
    pub clusters: Vec<(usize, usize)>,
    pub method: SolverMethod,
    pub iterations: usize,
    pub free_dofs: usize,
    pub elements: Vec<usize>,
    pub mesh_size: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Errors unless at least `needed` eigenvalues are present.
    pub fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::InsufficientSpectrum { needed, available: self.len() });
        }
        Ok(())
    }
}

/// The `k` smallest eigenpairs of the assembled pencil.
pub fn smallest_eigenpairs(forms: &AssembledForms, k: usize, tol: f64) -> Result<Spectrum> {
    let mut s = solve(Stiffness::Factored(&forms.a, &forms.energy), &forms.m, k, tol)?;
    s.elements = forms.mesh.elements.clone();
    s.mesh_size = forms.mesh.mesh_size();
    Ok(s)
}

/// The `k` smallest eigenpairs of a symmetric pencil with M positive definite.
pub fn solve_pencil(a: &DMatrix<f64>, m: &DMatrix<f64>, k: usize, tol: f64) -> Result<Spectrum> {
    solve(Stiffness::Dense(a), m, k, tol)
}

/// v^T A v / v^T M v.
pub fn rayleigh_quotient(forms: &AssembledForms, v: &DVector<f64>) -> Result<f64> {
    let mass = v.dot(&(&forms.m * v));
    if !(mass > 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(forms.energy.energy(v) / mass)
}

/// Relative residuals |A v - Lambda M v| / (Lambda |M v|) of approximate
/// eigenpairs of a dense pencil.
pub fn residuals(a: &DMatrix<f64>, m: &DMatrix<f64>, values: &[f64], vectors: &DMatrix<f64>) -> Vec<f64> {
    Stiffness::Dense(a).residuals(m, values, vectors)
}

/// How products with A are formed.
#[derive(Clone, Copy)]
enum Stiffness<'a> {
    Dense(&'a DMatrix<f64>),
    /// Assembled matrix plus its square-root factor for accurate products.
    Factored(&'a DMatrix<f64>, &'a EnergyFactor),
}

impl Stiffness<'_> {
    fn matrix(&self) -> &DMatrix<f64> {
        match self {
            Stiffness::Dense(a) | Stiffness::Factored(a, _) => a,
        }
    }

    fn times(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            Stiffness::Dense(a) => *a * x,
            Stiffness::Factored(_, b) => b.stiffness_times(x),
        }
    }

    fn gram(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            Stiffness::Dense(a) => x.transpose() * (*a * x),
            Stiffness::Factored(_, b) => b.gram(x),
        }
    }

    fn residuals(&self, m: &DMatrix<f64>, values: &[f64], vectors: &DMatrix<f64>) -> Vec<f64> {
        let av = self.times(vectors);
        let mv = m * vectors;
        values
            .iter()
            .enumerate()
            .map(|(i, &lam)| {
                let mvi = mv.column(i);
                let r = av.column(i) - mvi * lam;
                r.norm() / (lam.abs() * mvi.norm())
            })
            .collect()
    }
}

fn solve(a: Stiffness<'_>, m: &DMatrix<f64>, k: usize, tol: f64) -> Result<Spectrum> {
    let am = a.matrix();
    let n = am.nrows();
    if am.ncols() != n || m.shape() != (n, n) {
        return Err(Error::InvalidInput("pencil matrices must be square and of equal size".into()));
    }
    if k == 0 {
        return Err(Error::InvalidInput("at least one eigenpair must be requested".into()));
    }
    if k > n {
        return Err(Error::TooManyEigenpairs { requested: k, free_dofs: n });
    }
    let mchol = Cholesky::new(m.clone()).ok_or(Error::IndefiniteMass)?;
    let block = (2 * k).max(k + 8).min(n);

    let (method, start) = if n <= DENSE_CROSSOVER {
        (SolverMethod::Dense, dense_block(am, &mchol, block))
    } else {
        (SolverMethod::SubspaceIteration, start_block(n, block))
    };
    let (values, vectors, iterations) = match Cholesky::new(am.clone()) {
        Some(achol) => {
            let max_iter = if method == SolverMethod::Dense { 12 } else { MAX_ITERATIONS };
            subspace_iteration(a, m, &achol, start, k, tol, max_iter)?
        }
        // A singular on the free space: nothing to invert, keep the dense answer.
        None if method == SolverMethod::Dense => {
            let (v, x) = rayleigh_ritz(a, m, &start)?;
            (v, x, 0)
        }
        None => return Err(Error::InvalidInput("stiffness matrix is not positive definite".into())),
    };
    let values: Vec<f64> = values[..k].to_vec();
    let vectors = vectors.columns(0, k).into_owned();
    let residuals = a.residuals(m, &values, &vectors);
    let achieved = residuals.iter().copied().fold(0.0, f64::max);
    if !(achieved <= tol) {
        return Err(Error::NoConvergence { achieved, eigenvalues: values });
    }
    Ok(Spectrum {
        clusters: clusters(&values),
        values,
        vectors,
        residuals,
        method,
        iterations,
        free_dofs: n,
        elements: Vec::new(),
        mesh_size: f64::NAN,
    })
}

fn clusters(values: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len() || (values[i] - values[i - 1]) >= CLUSTER_GAP * values[i].abs();
        if split {
            if i - start > 1 {
                out.push((start, i));
            }
            start = i;
        }
    }
    out
}

/// Lowest `block` eigenvectors of the dense reduction L^-1 A L^-T.
fn dense_block(a: &DMatrix<f64>, mchol: &Cholesky<f64, Dyn>, block: usize) -> DMatrix<f64> {
    let l = mchol.l();
    let x = l.solve_lower_triangular(a).expect("Cholesky factor has a positive diagonal");
    let c = l.solve_lower_triangular(&x.transpose()).expect("Cholesky factor has a positive diagonal");
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let order = ascending(eig.eigenvalues.as_slice());
    let mut y = DMatrix::zeros(a.nrows(), block);
    for (j, &i) in order.iter().take(block).enumerate() {
        y.set_column(j, &eig.eigenvectors.column(i));
    }
    l.transpose().solve_upper_triangular(&y).expect("Cholesky factor has a positive diagonal")
}

/// Fixed, well-spread start block for the iterative path.
fn start_block(n: usize, block: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, block, |i, j| {
        let t = (i + 1) as f64 * (0.6180339887498949 + j as f64 * 0.4142135623730951);
        (t * core::f64::consts::TAU).sin() + 0.25 * ((j + 1) as f64 * t).cos()
    })
}

fn ascending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    order
}

/// Rayleigh-Ritz on span(W): ascending Ritz values and M-orthonormal Ritz vectors.
fn rayleigh_ritz(a: Stiffness<'_>, m: &DMatrix<f64>, w: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let q = w.clone().qr().q();
    let small_a = a.gram(&q);
    let small_m = q.transpose() * (m * &q);
    let small_a = (&small_a + small_a.transpose()) * 0.5;
    let small_m = (&small_m + small_m.transpose()) * 0.5;
    let chol = Cholesky::new(small_m).ok_or(Error::IndefiniteMass)?;
    let l = chol.l();
    let x = l.solve_lower_triangular(&small_a).ok_or(Error::IndefiniteMass)?;
    let c = l.solve_lower_triangular(&x.transpose()).ok_or(Error::IndefiniteMass)?;
    let eig = SymmetricEigen::new((&c + c.transpose()) * 0.5);
    let order = ascending(eig.eigenvalues.as_slice());
    let p = w.ncols();
    let mut y = DMatrix::zeros(p, p);
    for (j, &i) in order.iter().enumerate() {
        y.set_column(j, &eig.eigenvectors.column(i));
    }
    let z = l.transpose().solve_upper_triangular(&y).ok_or(Error::IndefiniteMass)?;
    let mut v = q * z;
    // Renormalize, then take Ritz values as Rayleigh quotients of the
    // final vectors so that they inherit the accuracy of `gram`.
    for j in 0..p {
        let mut col = v.column_mut(j);
        let norm = col.dot(&(m * &col)).sqrt();
        col /= norm;
    }
    let values = a.gram(&v).diagonal().iter().copied().collect();
    Ok((values, v))
}

/// A^-1 R with two steps of iterative refinement against the accurate
/// product of `a`.
fn refined_solve(a: Stiffness<'_>, achol: &Cholesky<f64, Dyn>, rhs: &DMatrix<f64>) -> DMatrix<f64> {
    let mut x = achol.solve(rhs);
    for _ in 0..2 {
        let r = rhs - a.times(&x);
        x += achol.solve(&r);
    }
    x
}

/// Block inverse iteration W <- A^-1 M V followed by Rayleigh-Ritz, until the
/// first `k` Ritz pairs meet `tol`.
fn subspace_iteration(
    a: Stiffness<'_>,
    m: &DMatrix<f64>,
    achol: &Cholesky<f64, Dyn>,
    start: DMatrix<f64>,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, DMatrix<f64>, usize)> {
    let (mut values, mut vectors) = rayleigh_ritz(a, m, &start)?;
    let mut steady = 0;
    for it in 0..max_iter {
        let w = refined_solve(a, achol, &(m * &vectors));
        let (next_values, next_vectors) = rayleigh_ritz(a, m, &w)?;
        let change = (0..k).map(|i| (next_values[i] - values[i]).abs() / next_values[i].abs()).fold(0.0, f64::max);
        (values, vectors) = (next_values, next_vectors);
        if change <= STEADY_CHANGE {
            steady += 1;
        } else {
            steady = 0;
        }
        // Ritz values have settled; the residual is then as small as f64
        // storage of the vectors allows. Stop once it meets `tol`, or give up
        // after a few more steady sweeps.
        if steady >= 1 {
            let res = a.residuals(m, &values[..k], &vectors.columns(0, k).into_owned());
            if res.iter().all(|&r| r <= tol) || steady >= 3 {
                return Ok((values, vectors, it + 1));
            }
        }
    }
    Ok((values, vectors, max_iter))
}

#[cfg(test)]
mod tests;

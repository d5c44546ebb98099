use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

/// Sparse B with A = B^T B: one row per quadrature point holding
/// sqrt(weight) * L_nu phi_r for the free DOFs r active there.
///
/// Energies v^T A v evaluated as |B v|^2 are sums of squares, free of the
/// cancellation that limits v^T (A v) to about eps * cond(A) relative
/// accuracy on fine meshes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyFactor {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    ncols: usize,
}

impl EnergyFactor {
    pub fn new(ncols: usize) -> Self {
        EnergyFactor { offsets: alloc::vec![0], cols: Vec::new(), vals: Vec::new(), ncols }
    }

    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, f64)>) {
        for (c, v) in entries {
            self.cols.push(c);
            self.vals.push(v);
        }
        self.offsets.push(self.cols.len());
    }

    pub fn nrows(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    /// B X.
    pub fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.nrows(), x.ncols());
        for j in 0..x.ncols() {
            let xj = x.column(j);
            for i in 0..self.nrows() {
                let (c, v) = self.row(i);
                out[(i, j)] = c.iter().zip(v).map(|(&c, &v)| v * xj[c]).sum();
            }
        }
        out
    }

    /// B^T Y.
    pub fn apply_transpose(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.ncols, y.ncols());
        for j in 0..y.ncols() {
            for i in 0..self.nrows() {
                let yi = y[(i, j)];
                let (c, v) = self.row(i);
                for (&c, &v) in c.iter().zip(v) {
                    out[(c, j)] += v * yi;
                }
            }
        }
        out
    }

    /// A X computed as B^T (B X).
    pub fn stiffness_times(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self.apply_transpose(&self.apply(x))
    }

    /// X^T A X computed as (B X)^T (B X).
    pub fn gram(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let bx = self.apply(x);
        bx.transpose() * bx
    }

    /// v^T A v.
    pub fn energy(&self, v: &DVector<f64>) -> f64 {
        (0..self.nrows())
            .map(|i| {
                let (c, w) = self.row(i);
                let s: f64 = c.iter().zip(w).map(|(&c, &w)| w * v[c]).sum();
                s * s
            })
            .sum()
    }
}

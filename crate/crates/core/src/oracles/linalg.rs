//! Elementary dense/banded linear algebra for the oracles. Deliberately
//! separate from the main solver path.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Sparse rectangular matrix stored by rows.
#[derive(Debug, Clone, Default)]
pub struct SparseRows {
    pub rows: Vec<Vec<(usize, f64)>>,
    pub ncols: usize,
}

impl SparseRows {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(c, v)| v * x[c]).sum()).collect()
    }

    /// Largest |i - j| over pairs of columns sharing a row.
    pub fn normal_bandwidth(&self) -> usize {
        self.rows
            .iter()
            .map(|r| {
                let lo = r.iter().map(|e| e.0).min().unwrap_or(0);
                let hi = r.iter().map(|e| e.0).max().unwrap_or(0);
                hi - lo
            })
            .max()
            .unwrap_or(0)
    }

    /// Lower band of R^T R.
    pub fn normal_band(&self) -> Band {
        let bw = self.normal_bandwidth();
        let mut band = Band::zeros(self.ncols, bw);
        for r in &self.rows {
            for &(i, a) in r {
                for &(j, b) in r {
                    if j <= i {
                        *band.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        band
    }
}

/// Symmetric band matrix, lower part. Row i stores columns i - bw ..= i
/// contiguously (entries left of column 0 stay zero).
#[derive(Debug, Clone)]
pub struct Band {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Band {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Band { n, bw, data: alloc::vec![0.0; n * (bw + 1)] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.bw + 1) + (j + self.bw - i)
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.data[k]
    }

    /// In-place Cholesky factorization L L^T.
    pub fn cholesky(mut self) -> Result<Self> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let (done, rest) = self.data.split_at_mut(i * w);
            let row_i = &mut rest[..w];
            for j in lo..=i {
                // Columns shared by rows i and j: max(lo, j - bw) .. j.
                let start = lo.max(j.saturating_sub(bw));
                let len = j - start;
                let oi = start + bw - i;
                let s = if j == i {
                    let (head, tail) = row_i.split_at(bw);
                    tail[0] - head[oi..oi + len].iter().map(|x| x * x).sum::<f64>()
                } else {
                    let row_j = &done[j * w..j * w + w];
                    let oj = start + bw - j;
                    row_i[j + bw - i] - dot(&row_i[oi..oi + len], &row_j[oj..oj + len])
                };
                if j == i {
                    if !(s > 0.0) {
                        return Err(Error::InvalidInput("oracle matrix is not positive definite".into()));
                    }
                    row_i[bw] = s.sqrt();
                } else {
                    row_i[j + bw - i] = s / done[j * w + bw];
                }
            }
        }
        Ok(self)
    }

    /// Solves L L^T x = b with a factored band.
    pub fn solve(&self, b: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &self.data[i * w..i * w + w];
            let s = b[i] - dot(&row[lo + bw - i..bw], &b[lo..i]);
            b[i] = s / row[bw];
        }
        for i in (0..n).rev() {
            let row = &self.data[i * w..i * w + w];
            b[i] /= row[bw];
            let lo = i.saturating_sub(bw);
            let xi = b[i];
            for (bk, l) in b[lo..i].iter_mut().zip(&row[lo + bw - i..bw]) {
                *bk -= l * xi;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for k in 0..4 {
            acc[k] += a[4 * c + k] * b[4 * c + k];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}

/// Cyclic Jacobi eigen-decomposition of a small symmetric matrix given
/// row-major. Returns ascending eigenvalues and the matching eigenvectors
/// as columns (row-major p x p).
pub fn jacobi_eigen(mut a: Vec<f64>, p: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = alloc::vec![0.0; p * p];
    for i in 0..p {
        v[i * p + i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..p).flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i * p + j] * a[i * p + j]).sum();
        let diag: f64 = (0..p).map(|i| a[i * p + i] * a[i * p + i]).sum();
        if off <= 1e-32 * diag {
            break;
        }
        for r in 0..p {
            for s in r + 1..p {
                let ars = a[r * p + s];
                if ars == 0.0 {
                    continue;
                }
                let theta = (a[s * p + s] - a[r * p + r]) / (2.0 * ars);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..p {
                    let akr = a[k * p + r];
                    let aks = a[k * p + s];
                    a[k * p + r] = c * akr - sn * aks;
                    a[k * p + s] = sn * akr + c * aks;
                }
                for k in 0..p {
                    let ark = a[r * p + k];
                    let ask = a[s * p + k];
                    a[r * p + k] = c * ark - sn * ask;
                    a[s * p + k] = sn * ark + c * ask;
                }
                for k in 0..p {
                    let vkr = v[k * p + r];
                    let vks = v[k * p + s];
                    v[k * p + r] = c * vkr - sn * vks;
                    v[k * p + s] = sn * vkr + c * vks;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| a[i * p + i].total_cmp(&a[j * p + j]));
    let values = order.iter().map(|&i| a[i * p + i]).collect();
    let mut vecs = alloc::vec![0.0; p * p];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..p {
            vecs[k * p + new] = v[k * p + old];
        }
    }
    (values, vecs)
}

/// Smallest `count` eigenvalues of R^T R x = mass * x by block inverse
/// iteration on the band factor, Rayleigh-Ritz energies taken as |R x|^2.
pub fn smallest_by_root(root: &SparseRows, mass: f64, count: usize) -> Result<Vec<f64>> {
    let n = root.ncols;
    if count == 0 || count > n {
        return Err(Error::InvalidInput("oracle eigenvalue count out of range".into()));
    }
    let p = (count + 4).min(n);
    let chol = root.normal_band().cholesky()?;
    let mut block: Vec<Vec<f64>> = (0..p)
        .map(|j| (0..n).map(|i| (((i + 1) * (j + 1)) as f64 * 0.7548776662466927).sin() + 0.01 * j as f64).collect())
        .collect();
    let mut prev = alloc::vec![f64::INFINITY; count];
    let (mut best_change, mut stalled) = (f64::INFINITY, 0);
    for _ in 0..500 {
        orthonormalize(&mut block)?;
        let images: Vec<Vec<f64>> = block.iter().map(|x| root.apply(x)).collect();
        let mut gram = alloc::vec![0.0; p * p];
        for a in 0..p {
            for b in a..p {
                let g: f64 = images[a].iter().zip(&images[b]).map(|(x, y)| x * y).sum();
                gram[a * p + b] = g;
                gram[b * p + a] = g;
            }
        }
        let (vals, vecs) = jacobi_eigen(gram, p);
        let rotated: Vec<Vec<f64>> =
            (0..p).map(|c| (0..n).map(|i| (0..p).map(|k| block[k][i] * vecs[k * p + c]).sum()).collect()).collect();
        let values: Vec<f64> = vals.iter().take(count).map(|v| v / mass).collect();
        let change = values.iter().zip(&prev).map(|(a, b)| ((a - b) / a).abs()).fold(0.0, f64::max);
        // Once rounding dominates, the change stops shrinking.
        if change < best_change {
            best_change = change;
            stalled = 0;
        } else {
            stalled += 1;
        }
        if change < 1e-14 || (best_change < 1e-10 && stalled >= 5) {
            return Ok(values);
        }
        prev = values;
        block = rotated;
        for x in block.iter_mut() {
            chol.solve(x);
        }
    }
    Err(Error::NoConvergence { achieved: f64::NAN, eigenvalues: prev })
}

fn orthonormalize(block: &mut [Vec<f64>]) -> Result<()> {
    for j in 0..block.len() {
        for _ in 0..2 {
            for k in 0..j {
                let c: f64 = block[j].iter().zip(&block[k]).map(|(x, y)| x * y).sum();
                let (head, tail) = block.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= c * y;
                }
            }
        }
        let norm = block[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::ZeroVector);
        }
        for x in block[j].iter_mut() {
            *x /= norm;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes() {
        let a = alloc::vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 1.0];
        let (vals, vecs) = jacobi_eigen(a.clone(), 3);
        for c in 0..3 {
            for r in 0..3 {
                let av: f64 = (0..3).map(|k| a[r * 3 + k] * vecs[k * 3 + c]).sum();
                assert!((av - vals[c] * vecs[r * 3 + c]).abs() < 1e-13);
            }
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
    }

    #[test]
    fn band_cholesky_solves() {
        // Second difference matrix, bandwidth 1.
        let n = 7;
        let root = SparseRows {
            rows: (0..=n)
                .map(|i| {
                    let mut r = alloc::vec::Vec::new();
                    if i > 0 {
                        r.push((i - 1, 1.0));
                    }
                    if i < n {
                        r.push((i, -1.0));
                    }
                    r
                })
                .collect(),
            ncols: n,
        };
        let chol = root.normal_band().cholesky().unwrap();
        let x: alloc::vec::Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let rx = root.apply(&x);
        let mut b = alloc::vec![0.0; n];
        for (r, v) in root.rows.iter().zip(&rx) {
            for &(c, a) in r {
                b[c] += a * v;
            }
        }
        chol.solve(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-12);
        }
    }
}

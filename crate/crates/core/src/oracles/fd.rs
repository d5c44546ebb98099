//! Finite-difference discretizations of (D^2 - c)^2 with clamped ends,
//! c = |nu|^2 / 4, obtained from L_nu by the gauge v = e^{<nu, x>/2} u.
//! Clamping is imposed with mirrored ghost values, and the operator is
//! assembled as S^T W S with S the discrete (D^2 - c) on all grid nodes
//! and W the trapezoid weights.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::linalg::{smallest_by_root, SparseRows};
use super::richardson::richardson_corner;
use crate::error::{Error, Result};

/// Grid levels of the interval oracle (intervals per unit length scale).
pub const INTERVAL_LEVELS: [usize; 5] = [200, 400, 800, 1600, 3200];
/// Grid levels of the plate oracle.
pub const PLATE_LEVELS: [usize; 3] = [32, 64, 128];
/// Largest change between the two best extrapolants still accepted.
pub const INTERVAL_STALL: f64 = 1e-8;
pub const PLATE_STALL: f64 = 1e-3;

/// Mirror index for clamped ghosts: -1 -> 1 and n + 1 -> n - 1.
fn mirror(i: isize, n: usize) -> usize {
    if i < 0 {
        (-i) as usize
    } else if i as usize > n {
        2 * n - i as usize
    } else {
        i as usize
    }
}

fn interval_root(length: f64, shift: f64, n: usize) -> SparseRows {
    let h = length / n as f64;
    let ih2 = 1.0 / (h * h);
    let col = |i: usize| if i == 0 || i == n { None } else { Some(i - 1) };
    let mut rows = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let w = if j == 0 || j == n { 0.5 * h } else { h };
        let sw = w.sqrt();
        let mut row: Vec<(usize, f64)> = Vec::new();
        let mut add = |i: usize, v: f64| {
            if let Some(c) = col(i) {
                match row.iter_mut().find(|e| e.0 == c) {
                    Some(e) => e.1 += sw * v,
                    None => row.push((c, sw * v)),
                }
            }
        };
        add(mirror(j as isize - 1, n), ih2);
        add(j, -2.0 * ih2 - shift);
        add(mirror(j as isize + 1, n), ih2);
        rows.push(row);
    }
    SparseRows { rows, ncols: n - 1 }
}

/// Eigenvalues of the interval discretization with `n` cells.
pub fn interval_fd_eigenvalues(length: f64, b: f64, count: usize, n: usize) -> Result<Vec<f64>> {
    let root = interval_root(length, 0.25 * b * b, n);
    smallest_by_root(&root, length / n as f64, count)
}

fn extrapolate(levels: &[Vec<f64>], count: usize, stall: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let seq: Vec<f64> = levels.iter().map(|l| l[i]).collect();
        let corner = richardson_corner(&seq, 2.0, 2.0, 2.0);
        let best = corner[corner.len() - 1];
        let prev = corner[corner.len() - 2];
        worst = worst.max(((best - prev) / best).abs());
        out.push(best);
    }
    if worst > stall {
        return Err(Error::NoConvergence { achieved: worst, eigenvalues: out });
    }
    Ok(out)
}

/// Clamped eigenvalues of (D^2 - b^2/4)^2 on [0, length], extrapolated
/// from second-order finite differences on nested grids.
pub fn conjugation_oracle(length: f64, b: f64, count: usize) -> Result<Vec<f64>> {
    if !(length > 0.0) || !(b >= 0.0) || !b.is_finite() {
        return Err(Error::InvalidInput("conjugation oracle needs length > 0 and b >= 0".into()));
    }
    let levels = INTERVAL_LEVELS
        .iter()
        .map(|&n| interval_fd_eigenvalues(length, b, count, n))
        .collect::<Result<Vec<_>>>()?;
    extrapolate(&levels, count, INTERVAL_STALL)
}

fn plate_root(width: f64, height: f64, shift: f64, nx: usize, ny: usize) -> SparseRows {
    let (hx, hy) = (width / nx as f64, height / ny as f64);
    let (ix2, iy2) = (1.0 / (hx * hx), 1.0 / (hy * hy));
    let col = |i: usize, j: usize| {
        if i == 0 || i == nx || j == 0 || j == ny {
            None
        } else {
            Some((i - 1) * (ny - 1) + (j - 1))
        }
    };
    let weight = |i: usize, n: usize, h: f64| if i == 0 || i == n { 0.5 * h } else { h };
    let mut rows = Vec::with_capacity((nx + 1) * (ny + 1));
    for i in 0..=nx {
        for j in 0..=ny {
            let sw = (weight(i, nx, hx) * weight(j, ny, hy)).sqrt();
            let mut row: Vec<(usize, f64)> = Vec::new();
            let mut add = |a: usize, b: usize, v: f64| {
                if let Some(c) = col(a, b) {
                    match row.iter_mut().find(|e| e.0 == c) {
                        Some(e) => e.1 += sw * v,
                        None => row.push((c, sw * v)),
                    }
                }
            };
            add(mirror(i as isize - 1, nx), j, ix2);
            add(mirror(i as isize + 1, nx), j, ix2);
            add(i, mirror(j as isize - 1, ny), iy2);
            add(i, mirror(j as isize + 1, ny), iy2);
            add(i, j, -2.0 * ix2 - 2.0 * iy2 - shift);
            rows.push(row);
        }
    }
    SparseRows { rows, ncols: (nx - 1) * (ny - 1) }
}

/// Eigenvalues of the 13-point plate discretization with n cells per
/// unit of the shorter side.
pub fn plate_fd_eigenvalues(width: f64, height: f64, nu: &[f64], count: usize, n: usize) -> Result<Vec<f64>> {
    let short = width.min(height);
    let nx = ((width / short) * n as f64).round() as usize;
    let ny = ((height / short) * n as f64).round() as usize;
    let shift = 0.25 * nu.iter().take(2).map(|v| v * v).sum::<f64>();
    let root = plate_root(width, height, shift, nx, ny);
    smallest_by_root(&root, (width / nx as f64) * (height / ny as f64), count)
}

/// Clamped eigenvalues of L_nu^2 on the flat rectangle [0, width] x
/// [0, height] with in-plane drift (nu[0], nu[1]); a third, normal component
/// is allowed and has no effect.
pub fn fd_plate_oracle(width: f64, height: f64, nu: &[f64], count: usize) -> Result<Vec<f64>> {
    if !(width > 0.0 && height > 0.0) || nu.len() < 2 || nu.len() > 3 {
        return Err(Error::InvalidInput("plate oracle needs a rectangle and a 2 or 3 component drift".into()));
    }
    let levels = PLATE_LEVELS
        .iter()
        .map(|&n| plate_fd_eigenvalues(width, height, nu, count, n))
        .collect::<Result<Vec<_>>>()?;
    extrapolate(&levels, count, PLATE_STALL)
}

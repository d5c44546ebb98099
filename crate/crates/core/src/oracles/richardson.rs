use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Relative level-to-level change below which a sequence counts as converged.
pub const CONVERGED_CHANGE: f64 = 1e-12;

/// Observed algebraic order of a refinement sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Order {
    Observed(f64),
    /// Differences vanished to rounding; no order can be read off.
    Converged,
}

impl Order {
    pub fn value(&self) -> Option<f64> {
        match self {
            Order::Observed(p) => Some(*p),
            Order::Converged => None,
        }
    }
}

/// Checks that every level refines the previous one by an integer factor.
/// Returns the factors.
pub fn nested_ratios(levels: &[usize]) -> Result<Vec<usize>> {
    if levels.len() < 3 {
        return Err(Error::InvalidInput("need at least three refinement levels".into()));
    }
    levels
        .windows(2)
        .map(|w| {
            if w[0] == 0 || w[1] <= w[0] || w[1] % w[0] != 0 {
                Err(Error::InvalidInput(alloc::format!("levels {} and {} are not nested", w[0], w[1])))
            } else {
                Ok(w[1] / w[0])
            }
        })
        .collect()
}

/// Order read from three consecutive values on nested levels with ratios
/// r1 = h0/h1 and r2 = h1/h2. Equal ratios give the usual log formula;
/// unequal ones are solved by bisection.
pub fn observed_order(values: [f64; 3], r1: f64, r2: f64) -> Order {
    let d1 = values[0] - values[1];
    let d2 = values[1] - values[2];
    let scale = values[2].abs().max(f64::MIN_POSITIVE);
    if d1.abs() <= CONVERGED_CHANGE * scale || d2.abs() <= CONVERGED_CHANGE * scale {
        return Order::Converged;
    }
    let q = (d1 / d2).abs();
    if (r1 - r2).abs() < 1e-12 {
        return Order::Observed(q.ln() / r1.ln());
    }
    // d1/d2 = (r1^p - 1) r2^p / (r2^p - 1)
    let f = |p: f64| (r1.powf(p) - 1.0) * r2.powf(p) / (r2.powf(p) - 1.0) - q;
    let (mut lo, mut hi) = (1e-6, 30.0);
    if f(lo) * f(hi) > 0.0 {
        return Order::Observed(q.ln() / (r1 * r2).sqrt().ln());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Order::Observed(0.5 * (lo + hi))
}

/// Orders for every consecutive triple of a nested sequence.
pub fn observed_orders(levels: &[usize], values: &[f64]) -> Result<Vec<Order>> {
    let ratios = nested_ratios(levels)?;
    if values.len() != levels.len() {
        return Err(Error::InvalidInput("one value per level required".into()));
    }
    Ok((0..values.len() - 2)
        .map(|i| observed_order([values[i], values[i + 1], values[i + 2]], ratios[i] as f64, ratios[i + 1] as f64))
        .collect())
}

/// Repeated Richardson extrapolation for values on grids refined by
/// `ratio`, assuming an error expansion in powers first_order,
/// first_order + step, ... Entry j of the result eliminates j error terms
/// using the finest j + 1 levels.
pub fn richardson_corner(values: &[f64], ratio: f64, first_order: f64, step: f64) -> Vec<f64> {
    let mut column: Vec<f64> = values.to_vec();
    let mut corner = alloc::vec![values[values.len() - 1]];
    let mut order = first_order;
    let mut width = values.len();
    while width > 1 {
        let factor = ratio.powf(order);
        column = column.windows(2).map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0)).collect();
        width -= 1;
        corner.push(column[width - 1]);
        order += step;
    }
    corner
}

/// Richardson limit of a Hermite-element eigenvalue ladder (error ~ h^4).
pub fn extrapolated_limit(levels: &[usize], values: &[f64]) -> Result<f64> {
    let ratios = nested_ratios(levels)?;
    let r = ratios[ratios.len() - 1] as f64;
    let n = values.len();
    Ok(values[n - 1] + (values[n - 1] - values[n - 2]) / (r.powi(4) - 1.0))
}

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};

pub const MAX_BEAM_COUNT: usize = 10;

/// cos k cosh k - 1, divided by cosh k to stay finite.
fn frequency_equation(k: f64) -> f64 {
    k.cos() - 1.0 / k.cosh()
}

/// m-th positive root (m >= 1) of cos k cosh k = 1, by bisection on
/// [(m + 1/2) pi - pi/4, (m + 1/2) pi + pi/4].
pub fn beam_root(m: usize) -> f64 {
    let centre = (m as f64 + 0.5) * core::f64::consts::PI;
    let (mut lo, mut hi) = (centre - core::f64::consts::FRAC_PI_4, centre + core::f64::consts::FRAC_PI_4);
    let flo = frequency_equation(lo);
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        let fm = frequency_equation(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First `count` clamped-beam eigenvalues k_m^4 on [0, 1].
pub fn beam_reference(count: usize) -> Result<Vec<f64>> {
    if count > MAX_BEAM_COUNT {
        return Err(Error::InvalidInput(alloc::format!("beam oracle supports at most {MAX_BEAM_COUNT} values")));
    }
    Ok((1..=count).map(|m| beam_root(m).powi(4)).collect())
}

//! Cubic Hermite shape functions and their tensor products.

/// (value, d/dx, d2/dx2) of the four cubic Hermite functions on an element
/// of length `h` at local coordinate t in [0, 1]. Order: value at left
/// node, slope at left node, value at right node, slope at right node.
pub fn hermite_1d(t: f64, h: f64) -> [[f64; 3]; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    let ih = 1.0 / h;
    let ih2 = ih * ih;
    [
        [1.0 - 3.0 * t2 + 2.0 * t3, (-6.0 * t + 6.0 * t2) * ih, (-6.0 + 12.0 * t) * ih2],
        [h * (t - 2.0 * t2 + t3), 1.0 - 4.0 * t + 3.0 * t2, (-4.0 + 6.0 * t) * ih],
        [3.0 * t2 - 2.0 * t3, (6.0 * t - 6.0 * t2) * ih, (6.0 - 12.0 * t) * ih2],
        [h * (-t2 + t3), -2.0 * t + 3.0 * t2, (-2.0 + 6.0 * t) * ih],
    ]
}

/// Index into [`hermite_1d`] for a corner (0 = left, 1 = right) and DOF
/// kind (0 = value, 1 = derivative).
#[inline]
pub fn hermite_index(corner: usize, kind: usize) -> usize {
    2 * corner + kind
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodal_interpolation_conditions() {
        let h = 0.3;
        let left = hermite_1d(0.0, h);
        let right = hermite_1d(1.0, h);
        let expect_left = [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.0, 0.0]];
        let expect_right = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        for k in 0..4 {
            assert!((left[k][0] - expect_left[k][0]).abs() < 1e-15);
            assert!((left[k][1] - expect_left[k][1]).abs() < 1e-14);
            assert!((right[k][0] - expect_right[k][0]).abs() < 1e-15);
            assert!((right[k][1] - expect_right[k][1]).abs() < 1e-14);
        }
    }

    #[test]
    fn reproduces_cubics() {
        // p(x) = 1 - 2x + x^3 on [0.5, 0.8]
        let (a, h) = (0.5, 0.3);
        let p = |x: f64| 1.0 - 2.0 * x + x * x * x;
        let dp = |x: f64| -2.0 + 3.0 * x * x;
        let dofs = [p(a), dp(a), p(a + h), dp(a + h)];
        for t in [0.1, 0.45, 0.9] {
            let b = hermite_1d(t, h);
            let x = a + t * h;
            let v: f64 = (0..4).map(|k| dofs[k] * b[k][0]).sum();
            let d: f64 = (0..4).map(|k| dofs[k] * b[k][1]).sum();
            let dd: f64 = (0..4).map(|k| dofs[k] * b[k][2]).sum();
            assert!((v - p(x)).abs() < 1e-14);
            assert!((d - dp(x)).abs() < 1e-13);
            assert!((dd - 6.0 * x).abs() < 1e-12);
        }
    }
}

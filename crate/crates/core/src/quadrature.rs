//! Gauss-Legendre rules on [-1, 1] and tensor products over boxes.

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Nodes and weights of the `q`-point Gauss-Legendre rule on [-1, 1],
/// nodes ascending. Exact for polynomials of degree 2q - 1.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1, "quadrature order must be positive");
    let mut nodes = alloc::vec![0.0; q];
    let mut weights = alloc::vec![0.0; q];
    let m = (q + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_q.
        let mut x = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(q, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=q {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if q == 0 {
        return (1.0, 0.0);
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss rule over an axis-aligned box split into `cells` equal
/// sub-intervals per coordinate. Returns (point, weight) pairs in a fixed
/// lexicographic order (last coordinate fastest).
pub fn composite_box_rule(lo: &[f64], hi: &[f64], cells: &[usize], q: usize) -> Vec<(Vec<f64>, f64)> {
    let dim = lo.len();
    let (gx, gw) = gauss_legendre(q);
    let per_axis: Vec<Vec<(f64, f64)>> = (0..dim)
        .map(|d| {
            let h = (hi[d] - lo[d]) / cells[d] as f64;
            let mut pts = Vec::with_capacity(cells[d] * q);
            for c in 0..cells[d] {
                let a = lo[d] + c as f64 * h;
                for (x, w) in gx.iter().zip(&gw) {
                    pts.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
                }
            }
            pts
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; dim];
    loop {
        let mut p = Vec::with_capacity(dim);
        let mut w = 1.0;
        for d in 0..dim {
            let (x, wd) = per_axis[d][idx[d]];
            p.push(x);
            w *= wd;
        }
        out.push((p, w));
        let mut d = dim;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < per_axis[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

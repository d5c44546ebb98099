use alloc::vec;
use nalgebra::{DMatrix, DVector};

use super::*;
use crate::assembly::{assemble, DomainSpec, MeshC1};
use crate::geometry::{DriftSpec, Immersion, Interval};

fn beam(elements: usize, b: f64) -> AssembledForms {
    let imm = Interval { a: 0.0, b: 1.0 };
    let dom = DomainSpec::whole(&imm.param_box());
    let mesh = MeshC1::uniform(&dom, elements).unwrap();
    assemble(&imm, &DriftSpec::new(&[b]), &dom, &mesh).unwrap()
}

const BEAM: [f64; 2] = [500.563901740, 3803.537080];

#[test]
fn beam_eigenvalues() {
    let s = smallest_eigenpairs(&beam(100, 0.0), 4, 1e-8).unwrap();
    assert_eq!(s.method, SolverMethod::Dense);
    for i in 0..2 {
        assert!((s.values[i] / BEAM[i] - 1.0).abs() < 5e-4);
    }
    assert!(s.max_residual() <= 1e-8);
    let gram = s.vectors.transpose() * &beam(100, 0.0).m * &s.vectors;
    assert!((gram - DMatrix::identity(4, 4)).amax() < 1e-10);
}

#[test]
fn iterative_path_agrees_with_dense() {
    let big = beam(450, 0.7);
    assert!(big.free_dofs() > DENSE_CROSSOVER);
    let it = smallest_eigenpairs(&big, 3, DEFAULT_TOLERANCE).unwrap();
    assert_eq!(it.method, SolverMethod::SubspaceIteration);
    let dense = solve_dense_reference(&big.a, &big.m, 3);
    for i in 0..3 {
        assert!((it.values[i] / dense[i] - 1.0).abs() < 1e-7, "{:?} {:?}", it.values, dense);
    }
}

/// Ritz values straight from the dense reduction, no polishing.
fn solve_dense_reference(a: &DMatrix<f64>, m: &DMatrix<f64>, k: usize) -> alloc::vec::Vec<f64> {
    let chol = Cholesky::new(m.clone()).unwrap();
    let v = dense_block(a, &chol, k);
    (0..k).map(|j| rayleigh_ritz(Stiffness::Dense(a), m, &v.columns(j, 1).into_owned()).unwrap().0[0]).collect()
}

#[test]
fn identity_pencil() {
    let m = DMatrix::from_fn(6, 6, |i, j| if i == j { 2.0 + i as f64 } else { 0.1 });
    let s = solve_pencil(&m, &m, 6, 1e-10).unwrap();
    for v in &s.values {
        assert!((v - 1.0).abs() < 1e-12);
    }
    assert_eq!(s.clusters, vec![(0, 6)]);
}

#[test]
fn direct_sum_spectrum_is_sorted_union() {
    let f = beam(12, 0.0);
    let n = f.free_dofs();
    let g = beam(12, 1.5);
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    a.view_mut((0, 0), (n, n)).copy_from(&f.a);
    a.view_mut((n, n), (n, n)).copy_from(&g.a);
    m.view_mut((0, 0), (n, n)).copy_from(&f.m);
    m.view_mut((n, n), (n, n)).copy_from(&g.m);
    let both = solve_pencil(&a, &m, 6, 1e-8).unwrap();
    let s1 = solve_pencil(&f.a, &f.m, 6, 1e-8).unwrap();
    let s2 = solve_pencil(&g.a, &g.m, 6, 1e-8).unwrap();
    let mut union: alloc::vec::Vec<f64> = s1.values.iter().chain(&s2.values).copied().collect();
    union.sort_by(f64::total_cmp);
    for i in 0..6 {
        assert!((both.values[i] / union[i] - 1.0).abs() < 1e-10);
    }
}

#[test]
fn rayleigh_quotient_bounds() {
    let f = beam(20, 0.5);
    let s = smallest_eigenpairs(&f, 4, DEFAULT_TOLERANCE).unwrap();
    let l1 = rayleigh_quotient(&f, &s.vector(0)).unwrap();
    assert!((l1 / s.values[0] - 1.0).abs() < 1e-10);
    let v = DVector::from_fn(f.free_dofs(), |i, _| ((i * 7 + 3) as f64).sin());
    assert!(rayleigh_quotient(&f, &v).unwrap() >= s.values[0]);
    // Deflate the first two modes in the M inner product.
    let mut w = v.clone();
    for j in 0..2 {
        let vj = s.vector(j);
        let c = vj.dot(&(&f.m * &w));
        w -= vj * c;
    }
    assert!(rayleigh_quotient(&f, &w).unwrap() >= s.values[2] * (1.0 - 1e-10));
    assert_eq!(rayleigh_quotient(&f, &DVector::zeros(f.free_dofs())), Err(Error::ZeroVector));
}

#[test]
fn request_validation() {
    let f = beam(3, 0.0);
    assert_eq!(
        smallest_eigenpairs(&f, 9, 1e-8).unwrap_err(),
        Error::TooManyEigenpairs { requested: 9, free_dofs: 4 }
    );
    let bad = -DMatrix::<f64>::identity(3, 3);
    assert_eq!(solve_pencil(&bad, &bad, 1, 1e-8).unwrap_err(), Error::IndefiniteMass);
}

#[test]
fn deterministic_rerun_is_bitwise_identical() {
    let f = beam(60, 2.0);
    let a = smallest_eigenpairs(&f, 4, DEFAULT_TOLERANCE).unwrap();
    let b = smallest_eigenpairs(&beam(60, 2.0), 4, DEFAULT_TOLERANCE).unwrap();
    assert_eq!(a.values, b.values);
}


#[test]
fn fine_mesh_eigenvalues_stay_accurate() {
    // Far past the point where v^T (A v) loses digits to cancellation.
    let s = smallest_eigenpairs(&beam(450, 0.0), 1, 1e-5).unwrap();
    assert!((s.values[0] / BEAM[0] - 1.0).abs() < 1e-10, "{}", s.values[0]);
}

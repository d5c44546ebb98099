use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use super::*;
use crate::geometry::{GrimReaperArc, Interval, Rectangle, SphereBand};
use crate::geometry::{AmbientCoordinate, DriftSpec, Factor, Immersion, Separable, Transformed};

fn interval_forms(elements: usize, b: f64) -> AssembledForms {
    let imm = Interval { a: 0.0, b: 1.0 };
    let dom = DomainSpec::whole(&imm.param_box());
    let mesh = MeshC1::uniform(&dom, elements).unwrap();
    assemble(&imm, &DriftSpec::new(&[b]), &dom, &mesh).unwrap()
}

/// Textbook cubic beam element matrices, hand integrated.
fn beam_element(h: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let k = DMatrix::from_row_slice(
        4,
        4,
        &[
            12.0, 6.0 * h, -12.0, 6.0 * h,
            6.0 * h, 4.0 * h * h, -6.0 * h, 2.0 * h * h,
            -12.0, -6.0 * h, 12.0, -6.0 * h,
            6.0 * h, 2.0 * h * h, -6.0 * h, 4.0 * h * h,
        ],
    ) / (h * h * h);
    let m = DMatrix::from_row_slice(
        4,
        4,
        &[
            156.0, 22.0 * h, 54.0, -13.0 * h,
            22.0 * h, 4.0 * h * h, 13.0 * h, -3.0 * h * h,
            54.0, 13.0 * h, 156.0, -22.0 * h,
            -13.0 * h, -3.0 * h * h, -22.0 * h, 4.0 * h * h,
        ],
    ) * (h / 420.0);
    (k, m)
}

#[test]
fn flat_interval_reproduces_beam_matrices() {
    let ne = 4;
    let h = 1.0 / ne as f64;
    let (ke, me) = beam_element(h);
    let total = 2 * (ne + 1);
    let mut k = DMatrix::zeros(total, total);
    let mut m = DMatrix::zeros(total, total);
    for e in 0..ne {
        for r in 0..4 {
            for s in 0..4 {
                k[(2 * e + r, 2 * e + s)] += ke[(r, s)];
                m[(2 * e + r, 2 * e + s)] += me[(r, s)];
            }
        }
    }
    let free = 2 * (ne - 1);
    let k = k.view((2, 2), (free, free)).into_owned();
    let m = m.view((2, 2), (free, free)).into_owned();
    let forms = interval_forms(ne, 0.0);
    assert!((&forms.a - &k).amax() < 1e-10 * k.amax());
    assert!((&forms.m - &m).amax() < 1e-14);
}

#[test]
fn forms_are_exactly_symmetric() {
    assert_eq!(asymmetry(&interval_forms(7, 1.3)), 0.0);
    let band = SphereBand { theta_min: 0.6, theta_max: 2.2, radius: 1.0 };
    let dom = DomainSpec::whole(&band.param_box());
    let mesh = MeshC1::new(&dom, vec![3, 6], 6).unwrap();
    let forms = assemble(&band, &DriftSpec::new(&[0.2, -0.1, 0.5]), &dom, &mesh).unwrap();
    assert_eq!(asymmetry(&forms), 0.0);
}

#[test]
fn translation_scales_forms_by_gauge_factor() {
    let arc = GrimReaperArc { x0: 1.0 };
    let nu = DVector::from_vec(vec![0.3, 1.0]);
    let c = DVector::from_vec(vec![0.7, -0.4]);
    let moved = Transformed::identity(arc.clone()).with_shift(c.clone());
    let drift = DriftSpec::new(nu.as_slice());
    let dom = DomainSpec::whole(&arc.param_box());
    let mesh = MeshC1::uniform(&dom, 6).unwrap();
    let f0 = assemble(&arc, &drift, &dom, &mesh).unwrap();
    let f1 = assemble(&moved, &drift, &dom, &mesh).unwrap();
    let factor = nu.dot(&c).exp();
    for (x, y) in [(&f0.a, &f1.a), (&f0.m, &f1.m), (&f0.g, &f1.g)] {
        assert!((x * factor - y).amax() <= 1e-12 * y.amax());
    }
}

#[test]
fn clamping_everything_is_an_error() {
    let imm = Interval { a: 0.0, b: 1.0 };
    let dom = DomainSpec::whole(&imm.param_box());
    assert_eq!(MeshC1::uniform(&dom, 1).unwrap_err(), crate::Error::EmptyInterior);
}

#[test]
fn lnu_of_constants_vanishes() {
    let band = SphereBand { theta_min: 0.6, theta_max: 2.2, radius: 1.0 };
    let one = Separable::new(vec![Factor::Poly(vec![1.0]), Factor::Poly(vec![1.0])]);
    let drift = DriftSpec::new(&[1.0, 2.0, 3.0]);
    assert_eq!(lnu_apply(&band, &drift, &one, &[1.0, 0.3]).unwrap(), 0.0);
}

#[test]
fn lnu_of_square_on_flat_interval() {
    let imm = Interval { a: 0.0, b: 1.0 };
    let sq = Separable::new(vec![Factor::Poly(vec![0.0, 0.0, 1.0])]);
    for (b, x) in [(0.0, 0.4), (1.5, 0.2), (-2.0, 0.9)] {
        let v = lnu_apply(&imm, &DriftSpec::new(&[b]), &sq, &[x]).unwrap();
        assert!((v - (2.0 + 2.0 * b * x)).abs() < 1e-14);
    }
}

#[test]
fn coordinate_functions_on_the_sphere_are_eigenfunctions() {
    let band = SphereBand { theta_min: 0.6, theta_max: 2.2, radius: 1.0 };
    let drift = DriftSpec::zero(3);
    for alpha in 0..3 {
        let y = AmbientCoordinate { immersion: &band, alpha };
        for u in [[0.7, 0.1], [1.2, 2.5], [2.1, 5.9]] {
            let v = lnu_apply(&band, &drift, &y, &u).unwrap();
            let value = band.position(&u)[alpha];
            assert!((v + 2.0 * value).abs() < 1e-12, "alpha {alpha} at {u:?}");
        }
    }
}

fn bump2(a: f64, b: f64, c: f64, d: f64, tilt: f64) -> Separable {
    Separable::new(vec![
        Factor::Bump { lo: a, hi: b, power: 3 },
        Factor::Bump { lo: c, hi: d, power: 3 },
    ])
    .scaled(1.0 + tilt)
}

#[test]
fn self_adjointness_on_drifted_rectangle() {
    let rect = Rectangle { width: 1.0, height: 1.0 };
    let dom = DomainSpec::whole(&rect.param_box());
    let (lo, hi) = (dom.lo.clone(), dom.hi.clone());
    let u = bump2(lo[0], hi[0], lo[1], hi[1], 0.0);
    let w = Separable::new(vec![
        Factor::Bump { lo: lo[0], hi: hi[0], power: 3 },
        Factor::Poly(vec![0.0, 1.0, 2.0]),
    ]);
    let w = ProductFn(&w, &Separable::new(vec![Factor::Poly(vec![1.0]), Factor::Bump { lo: lo[1], hi: hi[1], power: 2 }]));
    let drift = DriftSpec::new(&[1.0, 0.0, 0.0]);
    let (r1, r2) = self_adjointness_check(&rect, &drift, &dom, &u, &w, &[8, 8], 8).unwrap();
    assert!(r1 <= 1e-8 && r2 <= 1e-8, "{r1} {r2}");
    let (s1, _) = self_adjointness_check(&rect, &drift, &dom, &u, &u, &[4, 4], 6).unwrap();
    assert_eq!(s1, 0.0);
}

#[test]
fn self_adjointness_on_plain_interval() {
    let imm = Interval { a: 0.0, b: 1.0 };
    let dom = DomainSpec::whole(&imm.param_box());
    let u = Separable::new(vec![Factor::Bump { lo: 0.0, hi: 1.0, power: 2 }]);
    let w = ProductFn(&u, &Separable::new(vec![Factor::Cos { freq: 3.0, phase: 0.2 }]));
    let (r1, r2) = self_adjointness_check(&imm, &DriftSpec::zero(1), &dom, &u, &w, &[16], 8).unwrap();
    assert!(r1 <= 1e-10 && r2 <= 1e-10, "{r1} {r2}");
}

#[test]
fn functionals_chain() {
    let forms = interval_forms(10, 0.0);
    let v = DVector::from_fn(forms.free_dofs(), |i, _| ((i + 1) as f64).sin());
    let f = eigenfunction_functionals(&forms, &v);
    assert_eq!(f.phi_hat, -f.dirichlet);
    let scaled = eigenfunction_functionals(&forms, &(&v * 3.0));
    assert!((scaled.dirichlet - f.dirichlet).abs() < 1e-12 * f.dirichlet);
}

#[test]
fn periodic_mismatch_is_rejected() {
    let band = SphereBand { theta_min: 0.6, theta_max: 2.2, radius: 1.0 };
    let pb = band.param_box();
    assert!(DomainSpec::sub_box(&pb, vec![0.8, 0.0], vec![2.0, 3.0]).is_err());
    assert!(DomainSpec::sub_box(&pb, vec![0.8, pb.lo[1]], vec![2.0, pb.hi[1]]).is_ok());
    let mut d = DomainSpec::whole(&pb);
    d.faces[1] = [FaceCondition::Clamped; 2];
    assert!(d.validate(&pb).is_err());
}

/// Pointwise product of two smooth functions.
struct ProductFn<'a>(&'a dyn crate::geometry::SmoothFn, &'a dyn crate::geometry::SmoothFn);

impl crate::geometry::SmoothFn for ProductFn<'_> {
    fn jet(&self, u: &[f64]) -> crate::geometry::ScalarJet {
        let a = self.0.jet(u);
        let b = self.1.jet(u);
        let n = u.len();
        let gradient: Vec<f64> = (0..n).map(|i| a.gradient[i] * b.value + a.value * b.gradient[i]).collect();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                hessian[i * n + j] = a.hessian[i * n + j] * b.value
                    + a.gradient[i] * b.gradient[j]
                    + a.gradient[j] * b.gradient[i]
                    + a.value * b.hessian[i * n + j];
            }
        }
        crate::geometry::ScalarJet { value: a.value * b.value, gradient, hessian }
    }
}

use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::geometry::{lattice, Rectangle, SphereBand};

fn zero_constants(n: usize) -> GeometricConstants {
    GeometricConstants {
        n,
        ambient_dim: n,
        c1_hat: 0.0,
        c1_tilde: 0.0,
        c1_combined: 0.0,
        c2_hat: 0.0,
        c3: 0.0,
        c4: None,
        c5: 0.0,
        c6: None,
        max_mean_curvature: 0.0,
        max_drift_tangent: 0.0,
        max_sphere_mean_curvature: None,
        samples: 0,
    }
}

#[test]
fn quadratic_form_on_toy_spectrum() {
    let r = thm11_check(&[1.0, 2.0], &zero_constants(1), 1).unwrap();
    assert!((r.lhs - 1.0).abs() < 1e-15);
    assert!((r.rhs - 4.0 * 1.5f64.sqrt()).abs() < 1e-14);
    assert!((r.rhs - 4.898979485566356).abs() < 1e-12);
    assert!(r.pass);
}

#[test]
fn zero_constants_reduce_to_closed_form() {
    for n in 1..6 {
        for l1 in [0.3, 1.0, 500.5639, 1.7e6] {
            let mut eig = vec![l1];
            eig.extend((1..=n).map(|i| l1 * (1.0 + i as f64)));
            let r = thm11_check(&eig, &zero_constants(n), n).unwrap();
            let closed = (8.0 * (n as f64 + 2.0) * l1).sqrt();
            assert!((r.rhs / closed - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn six_form_with_zero_constant() {
    let l1: f64 = 37.0;
    let r = cor12_check(&[l1, 50.0], &zero_constants(1), 1).unwrap();
    assert!((r.rhs - 4.0 * 3f64.sqrt() * l1.sqrt()).abs() < 1e-12 * r.rhs);
}

#[test]
fn insufficient_spectrum() {
    assert_eq!(
        thm11_check(&[1.0, 2.0], &zero_constants(2), 2).unwrap_err(),
        Error::InsufficientSpectrum { needed: 3, available: 2 }
    );
}

#[test]
fn flat_rectangle_has_zero_constants() {
    let rect = Rectangle { width: 1.0, height: 1.0 };
    let pb = rect.param_box();
    let k = constants(&rect, &DriftSpec::zero(3), &lattice(&pb.lo, &pb.hi, &[8, 8])).unwrap();
    assert_eq!((k.c1_hat, k.c1_tilde, k.c2_hat), (0.0, 0.0, 0.0));
    // Purely normal drift keeps nu^T = 0 and the minimal variant collapses.
    let k = constants(&rect, &DriftSpec::new(&[0.0, 0.0, 1.0]), &lattice(&pb.lo, &pb.hi, &[8, 8])).unwrap();
    assert_eq!(k.c3, 0.0);
    let eig = [40.0, 90.0, 95.0];
    let a = cor6x_check(&eig, &k, 2, Variant::Minimal).unwrap();
    let b = thm11_check(&eig, &zero_constants(2), 2).unwrap();
    assert_eq!(a.rhs, b.rhs);
}

#[test]
fn grim_reaper_constants() {
    let arc = crate::geometry::GrimReaperArc { x0: 1.0 };
    let pb = arc.param_box();
    let k = constants(&arc, &DriftSpec::new(&[0.0, 1.0]), &lattice(&pb.lo, &pb.hi, &[64])).unwrap();
    assert!((k.c1_hat - 0.25).abs() < 1e-12);
    assert!((k.c1_tilde - 0.25 * 1f64.sin()).abs() < 1e-12);
}

#[test]
fn sphere_variants_agree_on_the_round_sphere() {
    let band = SphereBand { theta_min: 0.6, theta_max: 2.2, radius: 1.0 };
    let pb = band.param_box();
    let k = constants(&band, &DriftSpec::new(&[0.0, 0.0, 0.5]), &lattice(&pb.lo, &pb.hi, &[16, 16])).unwrap();
    // |H| = 1 for the unit sphere in R^3.
    assert!((k.c1_hat - 1.0).abs() < 1e-12);
    assert!(k.max_sphere_mean_curvature.unwrap() < 1e-12);
    let eig = [200.0, 400.0, 410.0];
    let s = cor6x_check(&eig, &k, 2, Variant::Sphere).unwrap();
    let u = cor6x_check(&eig, &k, 2, Variant::UnitSphere).unwrap();
    assert!((s.rhs - u.rhs).abs() < 1e-12 * u.rhs);
    assert!(matches!(cor6x_check(&eig, &k, 2, Variant::Minimal), Err(Error::VariantMismatch(_))));
}

#[test]
fn sphere_variant_rejects_off_sphere_geometry() {
    let rect = Rectangle { width: 1.0, height: 1.0 };
    let pb = rect.param_box();
    let k = constants(&rect, &DriftSpec::zero(3), &lattice(&pb.lo, &pb.hi, &[4, 4])).unwrap();
    assert!(matches!(cor6x_check(&[1.0, 2.0, 3.0], &k, 2, Variant::Sphere), Err(Error::VariantMismatch(_))));
}

#[test]
fn translator_gate_rejects_the_sphere() {
    let band = SphereBand { theta_min: 0.6, theta_max: 2.2, radius: 1.0 };
    let pb = band.param_box();
    let samples = lattice(&pb.lo, &pb.hi, &[8, 8]);
    let drift = DriftSpec::translator(&[0.0, 0.0, 1.0]).unwrap();
    assert!(matches!(translator_gate(&band, &drift, &samples), Err(Error::NotATranslator { .. })));
    let arc = crate::geometry::GrimReaperArc { x0: 1.0 };
    let pb = arc.param_box();
    let gate = translator_gate(&arc, &DriftSpec::translator(&[0.0, 1.0]).unwrap(), &lattice(&pb.lo, &pb.hi, &[50])).unwrap();
    let r = thm51_check(&[16.0, 16.0], 1, &gate).unwrap();
    assert_eq!(r.lhs, 0.0);
    assert!(r.pass);
    // A non-unit drift never certifies.
    assert!(translator_gate(&arc, &DriftSpec::new(&[0.0, 1.0]), &lattice(&pb.lo, &pb.hi, &[4])).is_err());
}

#[test]
fn projective_constants_arithmetic() {
    let p = projective_constants(2, Field::Real, 0.0, 0.0);
    assert_eq!((p.c6_hat, p.c6_tilde), (3.0, 0.0));
    assert_eq!(Field::Quaternion.real_dim(), 4);
    assert_eq!(projective_constants(2, Field::Complex, 1.0, 0.0).c6_hat, 5.0);
}

#[test]
fn closed_form_delta_minimizes_the_bound() {
    let (l1, n, c, ct) = (500.0, 2, 0.3, 0.1);
    let k = k_term(l1, c, ct);
    let f = |d: f64| 4.0 * (0.5 * d + 0.5 / d) * k + n as f64 * d * l1.sqrt();
    let d = optimal_delta(l1, n, c, ct);
    assert!((f(d) - quadratic_rhs(l1, n, c, ct)).abs() < 1e-10 * f(d));
    for t in [0.9, 0.99, 1.01, 1.1] {
        assert!(f(d * t) >= f(d));
    }
}

#[test]
fn theorem_keys_round_trip() {
    for t in TheoremId::ALL {
        assert_eq!(TheoremId::from_key(t.key()), Some(t));
    }
    let v: Vec<_> = TheoremId::ALL.iter().filter(|t| t.is_translator()).collect();
    assert_eq!(v.len(), 4);
}

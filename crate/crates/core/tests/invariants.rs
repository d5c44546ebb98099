use driftplate::assembly::{assemble, eigenfunction_functionals, DomainSpec, MeshC1};
use driftplate::bounds::{constants, quadratic_rhs, six_rhs};
use driftplate::eigensolve::{smallest_eigenpairs, Spectrum, DEFAULT_TOLERANCE};
use driftplate::geometry::{
    identity_suite, lattice, translator_residual, Catalogue, DriftSpec, Factor, GrimReaperArc, GrimReaperPlane,
    Immersion, Interval, Separable, SmoothFn, Transformed, CATALOGUE_NAMES,
};
use driftplate::oracles::{observed_orders, Order};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn solve<I: Immersion>(imm: &I, drift: &DriftSpec, dom: &DomainSpec, elements: usize, k: usize) -> Spectrum {
    let mesh = MeshC1::uniform(dom, elements).unwrap();
    let forms = assemble(imm, drift, dom, &mesh).unwrap();
    smallest_eigenpairs(&forms, k, DEFAULT_TOLERANCE).unwrap()
}

fn whole<I: Immersion>(imm: &I, drift: &DriftSpec, elements: usize, k: usize) -> Spectrum {
    solve(imm, drift, &DomainSpec::whole(&imm.param_box()), elements, k)
}

fn rotation2(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Rotation of R^3 as a product of rotations about z and then x.
fn rotation3(a: f64, b: f64) -> DMatrix<f64> {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let rz = DMatrix::from_row_slice(3, 3, &[ca, -sa, 0.0, sa, ca, 0.0, 0.0, 0.0, 1.0]);
    let rx = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, cb, -sb, 0.0, sb, cb]);
    rx * rz
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rigid_motions_leave_the_spectrum_alone(
        theta in 0.0..6.28f64,
        shift in prop::array::uniform2(-3.0..3.0f64),
        nu in prop::array::uniform2(-2.0..2.0f64),
        x0 in 0.4..1.3f64,
    ) {
        let arc = GrimReaperArc { x0 };
        let q = rotation2(theta);
        let moved = Transformed::identity(arc.clone())
            .with_rotation(q.clone())
            .with_shift(DVector::from_column_slice(&shift));
        let drift = DriftSpec::new(&nu);
        let drift_moved = DriftSpec { nu: &q * &drift.nu, unit: false };
        let a = whole(&arc, &drift, 30, 3);
        let b = whole(&moved, &drift_moved, 30, 3);
        for i in 0..3 {
            prop_assert!(rel(a.values[i], b.values[i]) < 1e-10, "{} vs {}", a.values[i], b.values[i]);
        }
    }

    #[test]
    fn surface_rotations_leave_the_spectrum_alone(
        a in 0.0..6.28f64,
        b in 0.0..3.14f64,
        nu in prop::array::uniform3(-1.0..1.0f64),
    ) {
        let plane = GrimReaperPlane { x0: 1.0, width: 1.5 };
        let q = rotation3(a, b);
        let moved = Transformed::identity(plane.clone()).with_rotation(q.clone());
        let drift = DriftSpec::new(&nu);
        let drift_moved = DriftSpec { nu: &q * &drift.nu, unit: false };
        let x = whole(&plane, &drift, 6, 2);
        let y = whole(&moved, &drift_moved, 6, 2);
        for i in 0..2 {
            prop_assert!(rel(x.values[i], y.values[i]) < 1e-10);
        }
    }

    #[test]
    fn homothety_scales_eigenvalues_by_t_to_the_minus_four(
        t in 0.3..3.0f64,
        nu in prop::array::uniform2(-2.0..2.0f64),
    ) {
        let arc = GrimReaperArc { x0: 1.0 };
        let scaled = Transformed::identity(arc.clone()).with_scale(t);
        let a = whole(&arc, &DriftSpec::new(&nu), 30, 3);
        let b = whole(&scaled, &DriftSpec::new(&[nu[0] / t, nu[1] / t]), 30, 3);
        for i in 0..3 {
            prop_assert!(rel(b.values[i] * t.powi(4), a.values[i]) < 1e-8);
        }
    }

    #[test]
    fn shrinking_the_domain_raises_eigenvalues(b in -3.0..3.0f64, x0 in 0.5..1.4f64) {
        // Sub-box meshed with the same element size, so the spaces nest.
        let arc = GrimReaperArc { x0 };
        let drift = DriftSpec::new(&[b, 0.5 * b]);
        let pb = arc.param_box();
        let full = solve(&arc, &drift, &DomainSpec::whole(&pb), 40, 3);
        let sub = DomainSpec::sub_box(&pb, vec![-0.5 * x0], vec![0.5 * x0]).unwrap();
        let part = solve(&arc, &drift, &sub, 20, 3);
        for i in 0..3 {
            prop_assert!(part.values[i] >= full.values[i] * (1.0 - 1e-9));
        }
    }

    #[test]
    fn refinement_never_raises_eigenvalues(b in 0.0..3.0f64, x0 in 0.5..1.4f64, e in 8usize..40) {
        let arc = GrimReaperArc { x0 };
        let drift = DriftSpec::new(&[0.0, b]);
        let coarse = whole(&arc, &drift, e, 3);
        let fine = whole(&arc, &drift, 2 * e, 3);
        for i in 0..3 {
            prop_assert!(fine.values[i] <= coarse.values[i] * (1.0 + 1e-9));
        }
    }

    #[test]
    fn constants_grow_with_nested_lattices(nu in prop::array::uniform3(-2.0..2.0f64), m in 2usize..12) {
        let plane = GrimReaperPlane { x0: 1.2, width: 2.0 };
        let pb = plane.param_box();
        let drift = DriftSpec::new(&nu);
        let coarse = constants(&plane, &drift, &lattice(&pb.lo, &pb.hi, &[m, m])).unwrap();
        let fine = constants(&plane, &drift, &lattice(&pb.lo, &pb.hi, &[2 * m, 2 * m])).unwrap();
        prop_assert!(fine.c1_hat >= coarse.c1_hat);
        prop_assert!(fine.c1_tilde >= coarse.c1_tilde);
        prop_assert!(fine.c1_combined >= coarse.c1_combined);
        prop_assert!(fine.c2_hat >= coarse.c2_hat);
        prop_assert!(fine.c3 >= coarse.c3);
        prop_assert!(fine.max_mean_curvature >= coarse.max_mean_curvature);
    }

    #[test]
    fn bound_rhs_grows_with_constants(
        l1 in 1.0..1e5f64,
        n in 1usize..5,
        c in 0.0..50.0f64,
        ct in 0.0..50.0f64,
        dc in 0.0..10.0f64,
    ) {
        let base = quadratic_rhs(l1, n, c, ct);
        prop_assert!(quadratic_rhs(l1, n, c + dc, ct) >= base);
        prop_assert!(quadratic_rhs(l1, n, c, ct + dc) >= base);
        prop_assert!(six_rhs(l1, n, c + dc) >= six_rhs(l1, n, c));
    }
}

fn probes(dim: usize) -> Vec<Separable> {
    let f = |k: usize| -> Vec<Factor> {
        (0..dim)
            .map(|d| match (k + d) % 3 {
                0 => Factor::Poly(vec![0.2, 1.0, -0.4]),
                1 => Factor::Cos { freq: 1.3, phase: 0.2 * d as f64 },
                _ => Factor::Exp { rate: -0.6 },
            })
            .collect()
    };
    (0..3).map(|k| Separable::new(f(k))).collect()
}

fn thousand_points(imm: &Catalogue) -> Vec<Vec<f64>> {
    let pb = imm.param_box();
    let counts: Vec<usize> = if pb.dim() == 1 { vec![999] } else { vec![31, 31] };
    lattice(&pb.lo, &pb.hi, &counts)
}

#[test]
fn identities_hold_on_every_catalogue_geometry() {
    for name in CATALOGUE_NAMES {
        let g = Catalogue::build(name, &BTreeMap::new()).unwrap();
        let m = g.ambient_dim();
        let nu: Vec<f64> = (0..m).map(|a| 0.7 - 0.9 * a as f64).collect();
        let samples = thousand_points(&g);
        assert!(samples.len() >= 1000);
        let pr = probes(g.intrinsic_dim());
        let refs: Vec<&dyn SmoothFn> = pr.iter().map(|p| p as &dyn SmoothFn).collect();
        let rep = identity_suite(&g, &DriftSpec::new(&nu), &samples, &refs).unwrap();
        assert!(rep.max_violation() <= 1e-9, "{name}: {rep:?}");
    }
}

#[test]
fn grim_reapers_translate() {
    let arc = Catalogue::build("grim_reaper_arc", &BTreeMap::new()).unwrap();
    let plane = Catalogue::build("grim_reaper_plane", &BTreeMap::new()).unwrap();
    let r1 = translator_residual(&arc, &DriftSpec::translator(&[0.0, 1.0]).unwrap(), &thousand_points(&arc)).unwrap();
    let r2 =
        translator_residual(&plane, &DriftSpec::translator(&[0.0, 0.0, 1.0]).unwrap(), &thousand_points(&plane)).unwrap();
    assert!(r1 <= 1e-9 && r2 <= 1e-9, "{r1} {r2}");
    let band = Catalogue::build("sphere_band", &BTreeMap::new()).unwrap();
    let r3 = translator_residual(&band, &DriftSpec::translator(&[0.0, 0.0, 1.0]).unwrap(), &thousand_points(&band)).unwrap();
    assert!(r3 > 0.1);
}

#[test]
fn eigenfunction_functionals_respect_their_bounds() {
    let cases: Vec<(Catalogue, Vec<f64>, usize)> = vec![
        (Catalogue::build("interval", &BTreeMap::new()).unwrap(), vec![2.0], 80),
        (Catalogue::build("grim_reaper_arc", &BTreeMap::new()).unwrap(), vec![0.0, 1.0], 80),
        (Catalogue::build("rectangle", &BTreeMap::new()).unwrap(), vec![1.0, -2.0, 0.5], 8),
        (Catalogue::build("sphere_band", &BTreeMap::new()).unwrap(), vec![0.0, 0.0, 1.0], 8),
    ];
    for (g, nu, e) in cases {
        let dom = DomainSpec::whole(&g.param_box());
        let mesh = MeshC1::uniform(&dom, e).unwrap();
        let forms = assemble(&g, &DriftSpec::new(&nu), &dom, &mesh).unwrap();
        let pairs = smallest_eigenpairs(&forms, 1, DEFAULT_TOLERANCE).unwrap();
        let f = eigenfunction_functionals(&forms, &pairs.vector(0));
        let s = pairs.values[0].sqrt();
        let n = g.intrinsic_dim() as f64;
        assert!(f.dirichlet <= s * (1.0 + 1e-6), "{}: {} vs {s}", g.name(), f.dirichlet);
        assert!(f.phi_hat >= -n * s * (1.0 + 1e-6));
    }
}

#[test]
fn beam_ladder_converges_at_fourth_order() {
    let levels = [25, 50, 100, 200];
    let beam = Interval { a: 0.0, b: 1.0 };
    let spectra: Vec<Spectrum> = levels.iter().map(|&e| whole(&beam, &DriftSpec::zero(1), e, 3)).collect();
    for i in 0..3 {
        let values: Vec<f64> = spectra.iter().map(|s| s.values[i]).collect();
        for w in values.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9));
        }
        let orders = observed_orders(&levels, &values).unwrap();
        // Rounding can hide the finest differences; the first triple is clean.
        match orders[0] {
            Order::Observed(p) => assert!(p >= 3.5, "mode {i}: order {p}"),
            Order::Converged => panic!("mode {i} converged at 25 elements"),
        }
        for o in &orders {
            if let Order::Observed(p) = o {
                assert!(*p >= 3.5, "mode {i}: {orders:?}");
            }
        }
    }
}

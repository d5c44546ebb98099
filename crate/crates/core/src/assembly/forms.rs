//! Weighted bilinear forms of the clamped problem.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::domain::DomainSpec;
use super::factor::EnergyFactor;
use super::mesh::MeshC1;
use crate::error::Result;
use crate::geometry::{point_geometry, DriftSpec, Immersion, SmoothFn};
use crate::quadrature::composite_box_rule;

/// Galerkin matrices over the free DOFs:
/// `a` of int (L_nu phi_r)(L_nu phi_s) e^w dv,
/// `m` of int phi_r phi_s e^w dv,
/// `g` of int <grad phi_r, grad phi_s> e^w dv.
#[derive(Debug, Clone)]
pub struct AssembledForms {
    pub a: DMatrix<f64>,
    pub m: DMatrix<f64>,
    pub g: DMatrix<f64>,
    /// Square-root factor of `a`.
    pub energy: EnergyFactor,
    pub mesh: MeshC1,
    pub intrinsic_dim: usize,
}

impl AssembledForms {
    pub fn free_dofs(&self) -> usize {
        self.mesh.free_dofs()
    }
}

/// Assembles A, M and G element by element.
///
/// Each quadrature point contributes to the upper triangle only; the lower
/// triangle is a copy, so symmetry holds bit for bit.
pub fn assemble<I: Immersion + ?Sized>(
    imm: &I,
    drift: &DriftSpec,
    domain: &DomainSpec,
    mesh: &MeshC1,
) -> Result<AssembledForms> {
    domain.validate(&imm.param_box())?;
    let n = imm.intrinsic_dim();
    let size = mesh.free_dofs();
    let mut a = DMatrix::zeros(size, size);
    let mut m = DMatrix::zeros(size, size);
    let mut g = DMatrix::zeros(size, size);
    let mut energy = EnergyFactor::new(size);

    let mut lphi: Vec<f64> = Vec::new();
    let mut raised: Vec<f64> = Vec::new();
    mesh.for_each_point(|qp| {
        let geo = point_geometry(imm, drift, qp.u)?;
        let w = qp.weight * geo.weighted_density();
        let local = qp.basis.len();
        lphi.clear();
        raised.clear();
        for l in 0..local {
            let gr = qp.basis.gradient(l, n);
            lphi.push(geo.lnu(gr, qp.basis.hessian(l, n)));
            for i in 0..n {
                raised.push((0..n).map(|j| geo.metric_inv[(i, j)] * gr[j]).sum());
            }
        }
        let root = w.sqrt();
        energy.push_row(qp.dofs.iter().zip(&lphi).filter_map(|(d, l)| d.map(|r| (r, root * l))));
        for (r, dr) in qp.dofs.iter().enumerate() {
            let Some(i) = *dr else { continue };
            let gr = qp.basis.gradient(r, n);
            for (s, ds) in qp.dofs.iter().enumerate() {
                let Some(j) = *ds else { continue };
                if i > j {
                    continue;
                }
                let up = &raised[s * n..(s + 1) * n];
                let dot: f64 = gr.iter().zip(up).map(|(x, y)| x * y).sum();
                a[(i, j)] += w * lphi[r] * lphi[s];
                m[(i, j)] += w * qp.basis.values[r] * qp.basis.values[s];
                g[(i, j)] += w * dot;
            }
        }
        Ok(())
    })?;
    for mat in [&mut a, &mut m, &mut g] {
        mat.fill_lower_triangle_with_upper_triangle();
    }
    Ok(AssembledForms { a, m, g, energy, mesh: mesh.clone(), intrinsic_dim: n })
}

/// L_nu f at parameter point `u`.
pub fn lnu_apply<I: Immersion + ?Sized>(imm: &I, drift: &DriftSpec, f: &dyn SmoothFn, u: &[f64]) -> Result<f64> {
    let geo = point_geometry(imm, drift, u)?;
    let jet = f.jet(u);
    Ok(geo.lnu(&jet.gradient, &jet.hessian))
}

/// Residuals of the weighted self-adjointness identities for a pair of
/// functions vanishing to first order near the boundary:
/// (|int (L u) w - int (L w) u|, |int (L u) w + int <grad u, grad w>|),
/// all integrals against e^w dv on a `cells` x `q` Gauss grid.
pub fn self_adjointness_check<I: Immersion + ?Sized>(
    imm: &I,
    drift: &DriftSpec,
    domain: &DomainSpec,
    u: &dyn SmoothFn,
    w: &dyn SmoothFn,
    cells: &[usize],
    q: usize,
) -> Result<(f64, f64)> {
    let (mut luw, mut lwu, mut grads) = (0.0, 0.0, 0.0);
    for (p, weight) in composite_box_rule(&domain.lo, &domain.hi, cells, q) {
        let geo = point_geometry(imm, drift, &p)?;
        let dens = weight * geo.weighted_density();
        let ju = u.jet(&p);
        let jw = w.jet(&p);
        luw += dens * geo.lnu(&ju.gradient, &ju.hessian) * jw.value;
        lwu += dens * geo.lnu(&jw.gradient, &jw.hessian) * ju.value;
        grads += dens * geo.grad_inner(&ju.gradient, &jw.gradient);
    }
    Ok(((luw - lwu).abs(), (luw + grads).abs()))
}

/// Discrete Dirichlet energy of the first eigenfunction and the
/// functional Phi-hat = n int u1 L_nu u1 e^w dv = -n * dirichlet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functionals {
    pub dirichlet: f64,
    pub phi_hat: f64,
}

/// `v1` is rescaled to unit M-norm before use.
pub fn eigenfunction_functionals(forms: &AssembledForms, v1: &DVector<f64>) -> Functionals {
    let mass = v1.dot(&(&forms.m * v1));
    let dirichlet = v1.dot(&(&forms.g * v1)) / mass;
    Functionals { dirichlet, phi_hat: -(forms.intrinsic_dim as f64) * dirichlet }
}

/// Sum of |entries| of A - A^T, M - M^T and G - G^T.
pub fn asymmetry(forms: &AssembledForms) -> f64 {
    [&forms.a, &forms.m, &forms.g].iter().map(|x| (*x - x.transpose()).abs().sum()).sum()
}

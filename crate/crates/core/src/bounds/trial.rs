//! Rotated coordinate trial functions and the pointwise general formula.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::{optimal_delta, GeometricConstants};
use crate::assembly::AssembledForms;
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};
use crate::geometry::{point_geometry, DriftSpec, Immersion};

/// Fixed delta grid; the closed-form delta is appended at evaluation time.
pub const DELTA_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
/// Relative slack on the eigenvalue side of the general formula.
pub const FORMULA_SLACK: f64 = 1e-6;
const RANK_TOLERANCE: f64 = 1e-12;

/// h_alpha = sum_gamma tau[(alpha, gamma)] y^gamma with
/// int h_alpha u_1 u_{beta+1} e^w dv = 0 for beta < alpha.
#[derive(Debug, Clone)]
pub struct TrialFunctions {
    /// Orthogonal (n+p) x (n+p) rotation.
    pub tau: DMatrix<f64>,
    /// Numerical rank of D = (int y^alpha u_1 u_{beta+1} e^w dv).
    pub rank: usize,
    /// max_{beta < alpha} |int h_alpha u_1 u_{beta+1} e^w dv|, recomputed by quadrature.
    pub orthogonality: f64,
    /// max |sum_alpha |grad h_alpha|^2 - n| over the samples.
    pub gradient_identity: f64,
    /// max positive part of sum_alpha (L_nu h_alpha)^2 - (n^2 H^2 + |nu^T|^2),
    /// relative to max(1, rhs).
    pub lnu_identity: f64,
    pub samples: usize,
}

impl TrialFunctions {
    pub fn count(&self) -> usize {
        self.tau.nrows()
    }

    pub fn rank_deficient(&self) -> bool {
        self.rank < self.count()
    }
}

/// Weighted quadrature of pointwise integrands over the mesh.
fn integrate<I, F>(imm: &I, drift: &DriftSpec, forms: &AssembledForms, mut f: F) -> Result<()>
where
    I: Immersion + ?Sized,
    F: FnMut(&crate::geometry::PointGeometry, &crate::assembly::QuadPoint<'_>, f64),
{
    forms.mesh.for_each_point(|qp| {
        let pg = point_geometry(imm, drift, qp.u)?;
        let w = qp.weight * pg.weighted_density();
        f(&pg, qp, w);
        Ok(())
    })
}

pub fn gram_schmidt_trial_functions<I: Immersion + ?Sized>(
    imm: &I,
    drift: &DriftSpec,
    forms: &AssembledForms,
    spectrum: &Spectrum,
    samples: &[Vec<f64>],
) -> Result<TrialFunctions> {
    let m = imm.ambient_dim();
    let n = imm.intrinsic_dim();
    spectrum.require(m + 1)?;
    let vecs: Vec<Vec<f64>> = (0..=m).map(|j| spectrum.vectors.column(j).iter().copied().collect()).collect();

    let mut d: DMatrix<f64> = DMatrix::zeros(m, m);
    integrate(imm, drift, forms, |pg, qp, w| {
        let u: Vec<f64> = vecs.iter().map(|v| qp.field(v).value).collect();
        for a in 0..m {
            for b in 0..m {
                d[(a, b)] += w * pg.position[a] * u[0] * u[b + 1];
            }
        }
    })?;
    let qr = d.clone().qr();
    let r = qr.r();
    let tau = qr.q().transpose();
    let scale = (0..m).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    let rank = (0..m).filter(|&i| r[(i, i)].abs() > RANK_TOLERANCE * scale.max(f64::MIN_POSITIVE)).count();

    // Orthogonality of the constructed functions, integrated afresh.
    let mut e: DMatrix<f64> = DMatrix::zeros(m, m);
    integrate(imm, drift, forms, |pg, qp, w| {
        let u: Vec<f64> = vecs.iter().map(|v| qp.field(v).value).collect();
        let h = &tau * &pg.position;
        for a in 0..m {
            for b in 0..a {
                e[(a, b)] += w * h[a] * u[0] * u[b + 1];
            }
        }
    })?;
    let orthogonality = e.amax();

    let (mut grad_id, mut lnu_id) = (0.0f64, 0.0f64);
    for u in samples {
        let pg = point_geometry(imm, drift, u)?;
        let proj = pg.tangent_projector();
        let lh = &tau * pg.lnu_y();
        let grad_sum: f64 = (0..m).map(|a| (proj.clone() * tau.row(a).transpose()).norm_squared()).sum();
        grad_id = grad_id.max((grad_sum - n as f64).abs());
        let nf = n as f64;
        let rhs = nf * nf * pg.mean_curvature * pg.mean_curvature + pg.drift_tangent_norm * pg.drift_tangent_norm;
        lnu_id = lnu_id.max((lh.norm_squared() - rhs).max(0.0) / rhs.max(1.0));
    }
    Ok(TrialFunctions {
        tau,
        rank,
        orthogonality,
        gradient_identity: grad_id,
        lnu_identity: if lnu_id > 1e-12 { lnu_id } else { 0.0 },
        samples: samples.len(),
    })
}

/// One (i, delta) instance of the general formula.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneralFormulaEntry {
    pub i: usize,
    pub delta: f64,
    /// (Lambda_{i+1} - Lambda_1)^{1/2} int |u_1 grad h_i|^2 e^w dv
    pub lhs: f64,
    /// (delta/2 + 1/(2 delta)) int Upsilon(h_i) e^w dv - delta int Phi(h_i) e^w dv
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneralFormulaReport {
    pub entries: Vec<GeneralFormulaEntry>,
    /// Grid followed by the closed-form delta.
    pub deltas: Vec<f64>,
    pub closed_form_delta: f64,
    /// sqrt(Upsilon-hat / (Upsilon-hat - 2 Phi-hat)), minimizer of the summed right side.
    pub data_optimal_delta: f64,
    /// Grid value minimizing the summed right side.
    pub grid_argmin: f64,
    /// sum_alpha int Upsilon(h_alpha) e^w dv
    pub upsilon_hat: f64,
    /// int [6 |grad u_1|^2 + u_1^2 (n^2 H^2 + 3 |nu^T|^2)] e^w dv
    pub upsilon_bound: f64,
    /// sum_alpha int Phi(h_alpha) e^w dv
    pub phi_hat: f64,
    /// n int u_1 L_nu u_1 e^w dv
    pub phi_hat_direct: f64,
    pub worst_margin: f64,
    /// min over entries of margin / max(|rhs|, tiny).
    pub worst_relative_margin: f64,
    pub pass: bool,
}

pub fn general_formula_check<I: Immersion + ?Sized>(
    imm: &I,
    drift: &DriftSpec,
    forms: &AssembledForms,
    spectrum: &Spectrum,
    trial: &TrialFunctions,
    constants: &GeometricConstants,
    grid: &[f64],
) -> Result<GeneralFormulaReport> {
    let m = trial.count();
    let n = imm.intrinsic_dim();
    spectrum.require(m + 1)?;
    if grid.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidInput("delta values must be positive".into()));
    }
    let nf = n as f64;
    let v1: Vec<f64> = spectrum.vectors.column(0).iter().copied().collect();
    let tau = &trial.tau;

    let mut base: DVector<f64> = DVector::zeros(m);
    let mut ups: DVector<f64> = DVector::zeros(m);
    let mut phi: DVector<f64> = DVector::zeros(m);
    let (mut ups_bound, mut u_lu) = (0.0, 0.0);
    integrate(imm, drift, forms, |pg, qp, w| {
        let u = qp.field(&v1);
        let lu = pg.lnu(&u.gradient, &u.hessian);
        let gu = pg.ambient_gradient(&u.gradient);
        let proj = pg.tangent_projector();
        let lh = tau * pg.lnu_y();
        let grad_u2 = gu.norm_squared();
        for a in 0..m {
            let ta = tau.row(a).transpose();
            let gh = &proj * &ta;
            let gh2 = gh.norm_squared();
            let cross = gh.dot(&gu);
            base[a] += w * u.value * u.value * gh2;
            let y = u.value * lh[a] + 2.0 * cross;
            ups[a] += w * y * y;
            phi[a] += w * gh2 * u.value * lu;
        }
        let h2 = pg.mean_curvature * pg.mean_curvature;
        let t2 = pg.drift_tangent_norm * pg.drift_tangent_norm;
        ups_bound += w * (6.0 * grad_u2 + u.value * u.value * (nf * nf * h2 + 3.0 * t2));
        u_lu += w * u.value * lu;
    })?;

    let l = &spectrum.values;
    let closed = optimal_delta(l[0], n, constants.c1_hat, constants.c1_tilde);
    let mut deltas: Vec<f64> = grid.to_vec();
    deltas.push(closed);
    let mut entries = Vec::new();
    for i in 0..m {
        let gap = (l[i + 1] - l[0]).max(0.0).sqrt();
        for &delta in &deltas {
            let lhs = gap * base[i];
            let rhs = (0.5 * delta + 0.5 / delta) * ups[i] - delta * phi[i];
            let margin = rhs - lhs;
            entries.push(GeneralFormulaEntry {
                i: i + 1,
                delta,
                lhs,
                rhs,
                margin,
                pass: lhs <= rhs + FORMULA_SLACK * rhs.abs(),
            });
        }
    }
    let upsilon_hat = ups.sum();
    let phi_hat = phi.sum();
    let summed = |d: f64| (0.5 * d + 0.5 / d) * upsilon_hat - d * phi_hat;
    let grid_argmin =
        grid.iter().copied().fold(f64::NAN, |best: f64, d| if best.is_nan() || summed(d) < summed(best) { d } else { best });
    let worst_margin = entries.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min);
    let worst_relative_margin =
        entries.iter().map(|e| e.margin / e.rhs.abs().max(f64::MIN_POSITIVE)).fold(f64::INFINITY, f64::min);
    let pass = entries.iter().all(|e| e.pass) && upsilon_hat <= ups_bound * (1.0 + FORMULA_SLACK);
    Ok(GeneralFormulaReport {
        entries,
        deltas,
        closed_form_delta: closed,
        data_optimal_delta: (upsilon_hat / (upsilon_hat - 2.0 * phi_hat)).sqrt(),
        grid_argmin,
        upsilon_hat,
        upsilon_bound: ups_bound,
        phi_hat,
        phi_hat_direct: nf * u_lu,
        worst_margin,
        worst_relative_margin,
        pass,
    })
}

//! Immersed manifolds given by analytic charts, and the pointwise
//! differential geometry the eigenvalue bounds consume.

mod catalogue;
mod functions;
mod transform;

pub use catalogue::{Annulus, Catalogue, GrimReaperArc, GrimReaperPlane, Interval, LineSegment, Rectangle, SphereBand, CATALOGUE_NAMES};
pub use functions::{AmbientCoordinate, Factor, ScalarJet, Separable, SmoothFn};
pub use transform::Transformed;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest metric condition number accepted before a point is declared
/// degenerate.
pub const MAX_METRIC_CONDITION: f64 = 1e12;

/// Closed parameter box with per-coordinate periodic identification.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub periodic: Vec<bool>,
}

impl ParamBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, periodic: Vec<bool>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert_eq!(lo.len(), periodic.len());
        ParamBox { lo, hi, periodic }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn extent(&self, d: usize) -> f64 {
        self.hi[d] - self.lo[d]
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.iter()
            .enumerate()
            .all(|(d, &x)| x >= self.lo[d] && x <= self.hi[d])
    }
}

/// Position and first two parameter derivatives of a chart at one point.
#[derive(Debug, Clone)]
pub struct ChartJet {
    /// X(u), length n+p.
    pub position: DVector<f64>,
    /// dX/du^i as columns, (n+p) x n.
    pub jacobian: DMatrix<f64>,
    /// d^2X/du^i du^j stored at index i*n + j.
    pub hessian: Vec<DVector<f64>>,
}

impl ChartJet {
    pub fn second(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.hessian[i * self.jacobian.ncols() + j]
    }
}

/// An immersion X: box -> R^{n+p} with exact first and second derivatives.
pub trait Immersion {
    fn intrinsic_dim(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    fn param_box(&self) -> ParamBox;
    fn jet(&self, u: &[f64]) -> ChartJet;

    fn position(&self, u: &[f64]) -> DVector<f64> {
        self.jet(u).position
    }

    fn jacobian(&self, u: &[f64]) -> DMatrix<f64> {
        self.jet(u).jacobian
    }

    fn hessian(&self, u: &[f64]) -> Vec<DVector<f64>> {
        self.jet(u).hessian
    }
}

impl<T: Immersion + ?Sized> Immersion for &T {
    fn intrinsic_dim(&self) -> usize {
        (**self).intrinsic_dim()
    }
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn param_box(&self) -> ParamBox {
        (**self).param_box()
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        (**self).jet(u)
    }
}

/// Constant ambient drift vector nu. `unit` marks the translator case.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec {
    pub nu: DVector<f64>,
    pub unit: bool,
}

impl DriftSpec {
    pub fn new(nu: &[f64]) -> Self {
        DriftSpec { nu: DVector::from_column_slice(nu), unit: false }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        DriftSpec { nu: DVector::zeros(ambient_dim), unit: false }
    }

    /// A unit drift nu_0. Rejects vectors whose length is off by more than 1e-14.
    pub fn translator(nu: &[f64]) -> Result<Self> {
        let v = DVector::from_column_slice(nu);
        if (v.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidInput(alloc::format!(
                "translator drift must have unit length, got |nu| = {}",
                v.norm()
            )));
        }
        Ok(DriftSpec { nu: v, unit: true })
    }

    pub fn norm(&self) -> f64 {
        self.nu.norm()
    }
}

/// Pointwise geometry at one parameter point.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub position: DVector<f64>,
    pub jacobian: DMatrix<f64>,
    pub metric: DMatrix<f64>,
    pub metric_inv: DMatrix<f64>,
    /// sqrt(det g).
    pub volume_density: f64,
    /// Laplace-Beltrami of each ambient coordinate, from the divergence form.
    pub laplace_y: DVector<f64>,
    /// Mean curvature vector from the normal part of the second fundamental form.
    pub mean_curvature_vector: DVector<f64>,
    /// |H|, unsigned.
    pub mean_curvature: f64,
    /// nu^T in parameter-basis components: g^{ij} <nu, d_j X>.
    pub drift_tangent: DVector<f64>,
    /// |nu^T| measured in the ambient metric.
    pub drift_tangent_norm: f64,
    /// w = <nu, X>; the measure is e^w dv.
    pub weight: f64,
    /// (1/sqrt g) d_i(sqrt g g^{ij}), the first-order part of Delta in coordinates.
    pub laplace_first_order: DVector<f64>,
}

impl PointGeometry {
    pub fn intrinsic_dim(&self) -> usize {
        self.metric.nrows()
    }

    /// Density of the weighted measure e^w dv with respect to du.
    pub fn weighted_density(&self) -> f64 {
        self.weight.exp() * self.volume_density
    }

    /// <grad a, grad b>_g from parameter gradients.
    pub fn grad_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.intrinsic_dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * self.metric_inv[(i, j)] * b[j];
            }
        }
        s
    }

    /// Delta_g f from parameter gradient and row-major parameter Hessian.
    pub fn laplacian(&self, grad: &[f64], hess: &[f64]) -> f64 {
        let n = self.intrinsic_dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.metric_inv[(i, j)] * hess[i * n + j];
            }
            s += self.laplace_first_order[i] * grad[i];
        }
        s
    }

    /// L_nu f = Delta f + <nu, grad f>.
    pub fn lnu(&self, grad: &[f64], hess: &[f64]) -> f64 {
        let drift: f64 = (0..self.intrinsic_dim()).map(|j| self.drift_tangent[j] * grad[j]).sum();
        self.laplacian(grad, hess) + drift
    }

    /// Ambient vector of grad f (a tangent vector of the immersion).
    pub fn ambient_gradient(&self, grad: &[f64]) -> DVector<f64> {
        let g = DVector::from_column_slice(grad);
        &self.jacobian * (&self.metric_inv * g)
    }

    /// Orthogonal projector of R^{n+p} onto the tangent space.
    pub fn tangent_projector(&self) -> DMatrix<f64> {
        &self.jacobian * &self.metric_inv * self.jacobian.transpose()
    }

    /// L_nu y^alpha = Delta y^alpha + (nu^T)^alpha for every ambient coordinate.
    pub fn lnu_y(&self) -> DVector<f64> {
        &self.laplace_y + &self.jacobian * &self.drift_tangent
    }
}

/// Evaluates every pointwise quantity of the immersion at `u`.
pub fn point_geometry<I: Immersion + ?Sized>(imm: &I, drift: &DriftSpec, u: &[f64]) -> Result<PointGeometry> {
    let n = imm.intrinsic_dim();
    let m = imm.ambient_dim();
    debug_assert_eq!(u.len(), n);
    let jet = imm.jet(u);
    let jac = &jet.jacobian;
    let metric = jac.transpose() * jac;

    let eig = SymmetricEigen::new(metric.clone());
    let (mut lmin, mut lmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut det = 1.0;
    for &l in eig.eigenvalues.iter() {
        lmin = lmin.min(l);
        lmax = lmax.max(l);
        det *= l;
    }
    let condition = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    if !(det > 0.0) || lmin <= 0.0 || condition > MAX_METRIC_CONDITION {
        return Err(Error::SingularMetric { det, condition });
    }
    let metric_inv = metric
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMetric { det, condition })?;
    let volume_density = det.sqrt();

    // d_k g_ij = <X_ki, X_j> + <X_i, X_kj>
    let mut dmetric = alloc::vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                dmetric[(k * n + i) * n + j] =
                    jet.second(k, i).dot(&jac.column(j)) + jac.column(i).dot(jet.second(k, j));
            }
        }
    }
    // (1/sqrt g) d_i(sqrt g g^{ij}) = 1/2 g^{kl} d_i g_kl g^{ij} - g^{ia} d_i g_ab g^{bj}
    let mut first_order = DVector::zeros(n);
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            let mut tr = 0.0;
            for k in 0..n {
                for l in 0..n {
                    tr += metric_inv[(k, l)] * dmetric[(i * n + k) * n + l];
                }
            }
            s += 0.5 * tr * metric_inv[(i, j)];
            for a in 0..n {
                for b in 0..n {
                    s -= metric_inv[(i, a)] * dmetric[(i * n + a) * n + b] * metric_inv[(b, j)];
                }
            }
        }
        first_order[j] = s;
    }

    let mut trace_second = DVector::zeros(m);
    for i in 0..n {
        for j in 0..n {
            trace_second.axpy(metric_inv[(i, j)], jet.second(i, j), 1.0);
        }
    }
    let laplace_y = &trace_second + jac * &first_order;

    let projector = jac * &metric_inv * jac.transpose();
    let normal_part = &trace_second - &projector * &trace_second;
    let mean_curvature_vector = normal_part / n as f64;
    let mean_curvature = mean_curvature_vector.norm();

    let nu_coords = jac.transpose() * &drift.nu;
    let drift_tangent = &metric_inv * &nu_coords;
    let drift_tangent_norm = drift_tangent.dot(&nu_coords).max(0.0).sqrt();
    let weight = drift.nu.dot(&jet.position);

    Ok(PointGeometry {
        position: jet.position,
        jacobian: jet.jacobian,
        metric,
        metric_inv,
        volume_density,
        laplace_y,
        mean_curvature_vector,
        mean_curvature,
        drift_tangent,
        drift_tangent_norm,
        weight,
        laplace_first_order: first_order,
    })
}

/// Worst violation of each coordinate-function identity over a sample.
/// Equalities are measured as |lhs - rhs| / max(1, |rhs|).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityReport {
    /// sum_a |grad y^a|^2 = n
    pub gradient_trace: f64,
    /// sum_a (Delta y^a)^2 = n^2 H^2
    pub mean_curvature: f64,
    /// sum_a Delta y^a grad y^a = 0
    pub normality: f64,
    /// sum_a <grad y^a, nu>^2 = |nu^T|^2
    pub drift_projection: f64,
    /// sum_a <grad y^a, grad u><grad y^a, grad w> = <grad u, grad w>
    pub polarization: f64,
    /// positive part of sum_a <grad y^a, grad u><grad y^a, nu> - |grad u||nu^T|
    pub cauchy_schwarz: f64,
    pub points: usize,
}

impl IdentityReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.gradient_trace,
            self.mean_curvature,
            self.normality,
            self.drift_projection,
            self.polarization,
            self.cauchy_schwarz,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn rel(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / rhs.abs().max(1.0)
}

/// Checks the coordinate-function identities of an isometric immersion at
/// every sample point, with every pair of probe functions.
pub fn identity_suite<I: Immersion + ?Sized>(
    imm: &I,
    drift: &DriftSpec,
    samples: &[Vec<f64>],
    probes: &[&dyn SmoothFn],
) -> Result<IdentityReport> {
    let n = imm.intrinsic_dim() as f64;
    let mut rep = IdentityReport { points: samples.len(), ..Default::default() };
    for u in samples {
        let pg = point_geometry(imm, drift, u)?;
        let proj = pg.tangent_projector();

        let trace: f64 = (0..proj.nrows()).map(|a| proj[(a, a)]).sum();
        rep.gradient_trace = rep.gradient_trace.max(rel(trace, n));

        let nh2 = n * n * pg.mean_curvature * pg.mean_curvature;
        rep.mean_curvature = rep.mean_curvature.max(rel(pg.laplace_y.norm_squared(), nh2));

        let tangential = &proj * &pg.laplace_y;
        rep.normality = rep.normality.max(tangential.norm() / pg.laplace_y.norm().max(1.0));

        let pnu = &proj * &drift.nu;
        let t2 = pg.drift_tangent_norm * pg.drift_tangent_norm;
        rep.drift_projection = rep.drift_projection.max(rel(pnu.norm_squared(), t2));

        let jets: Vec<ScalarJet> = probes.iter().map(|p| p.jet(u)).collect();
        let grads: Vec<DVector<f64>> = jets.iter().map(|j| pg.ambient_gradient(&j.gradient)).collect();
        for (a, ja) in jets.iter().enumerate() {
            for (b, jb) in jets.iter().enumerate().skip(a) {
                let lhs = grads[a].dot(&grads[b]);
                let rhs = pg.grad_inner(&ja.gradient, &jb.gradient);
                rep.polarization = rep.polarization.max(rel(lhs, rhs));
            }
            let cs_lhs = grads[a].dot(&pnu);
            let cs_rhs = pg.grad_inner(&ja.gradient, &ja.gradient).max(0.0).sqrt() * pg.drift_tangent_norm;
            let slack = (cs_lhs - cs_rhs).max(0.0) / cs_rhs.abs().max(1.0);
            // Equality cases sit at rounding level; anything above 1e-12 is a real violation.
            rep.cauchy_schwarz = rep.cauchy_schwarz.max(if slack > 1e-12 { slack } else { 0.0 });
        }
    }
    Ok(rep)
}

/// max over samples of |H - nu_0^N| with H = (1/n)(Delta y^1, ..., Delta y^{n+p}).
pub fn translator_residual<I: Immersion + ?Sized>(imm: &I, drift: &DriftSpec, samples: &[Vec<f64>]) -> Result<f64> {
    if !drift.unit {
        return Err(Error::InvalidInput("translator residual needs a unit drift".into()));
    }
    let n = imm.intrinsic_dim() as f64;
    let mut worst: f64 = 0.0;
    for u in samples {
        let pg = point_geometry(imm, drift, u)?;
        let h = &pg.laplace_y / n;
        let normal = &drift.nu - pg.tangent_projector() * &drift.nu;
        worst = worst.max((h - normal).norm());
    }
    Ok(worst)
}

/// Uniform closed lattice with `counts[d]` intervals per coordinate.
pub fn lattice(lo: &[f64], hi: &[f64], counts: &[usize]) -> Vec<Vec<f64>> {
    let dim = lo.len();
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; dim];
    loop {
        out.push(
            (0..dim)
                .map(|d| {
                    if idx[d] == counts[d] {
                        hi[d]
                    } else {
                        lo[d] + (hi[d] - lo[d]) * idx[d] as f64 / counts[d] as f64
                    }
                })
                .collect(),
        );
        let mut d = dim;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] <= counts[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

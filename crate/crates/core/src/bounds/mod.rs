//! Geometric constants and machine checks of the universal eigenvalue
//! inequalities for the clamped problem of L_nu^2.
//!
//! Every right-hand side has the shape
//! 4 sqrt(K (K + n/2 Lambda_1^{1/2})) with
//! K = Lambda_1^{1/2} + 4 C~ Lambda_1^{1/4} + 4 C~^2 + C
//! or the sharper-in-C variant 6 sqrt((s + C2)((n/3 + 1) s + C2)), s = Lambda_1^{1/2}.
//! The infimum over isometric immersions in the constants is replaced by
//! the maximum over samples of the given immersion, which only enlarges
//! the right-hand sides.

mod trial;

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{point_geometry, translator_residual, DriftSpec, Immersion};

pub use trial::{
    general_formula_check, gram_schmidt_trial_functions, GeneralFormulaEntry, GeneralFormulaReport, TrialFunctions,
    DELTA_GRID,
};

/// A check passes when margin >= -REPORT_EPSILON * RHS.
pub const REPORT_EPSILON: f64 = 1e-8;
/// Largest translator residual accepted by [`translator_gate`].
pub const TRANSLATOR_TOLERANCE: f64 = 1e-9;
/// Pointwise tolerance for the variant hypotheses (H = 0, |X| = 1, ...).
pub const VARIANT_TOLERANCE: f64 = 1e-9;

/// Constants of the inequalities, maximized over a sample of the closed domain.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeometricConstants {
    pub n: usize,
    pub ambient_dim: usize,
    /// (1/4) max n^2 H^2
    pub c1_hat: f64,
    /// (1/4) max |nu^T|
    pub c1_tilde: f64,
    /// (1/4) max (n^2 H^2 + |nu^T|^2), the pointwise combination that
    /// 4 c1_tilde^2 + c1_hat bounds from above.
    pub c1_combined: f64,
    /// (1/6) max (n^2 H^2 + 3 |nu^T|^2)
    pub c2_hat: f64,
    /// (1/4) max |nu^T| for minimal immersions.
    pub c3: f64,
    /// ((1/4) max n^2 (|H_S|^2 + 1), (1/4) max |nu^T|) when the sample lies
    /// on the unit sphere; H_S is the mean curvature inside the sphere.
    pub c4: Option<(f64, f64)>,
    /// (1/4) max |nu^T| for domains of the unit n-sphere; n^2/4 is added separately.
    pub c5: f64,
    /// Projective-space constants, supplied by the caller; never used in
    /// an eigenvalue check.
    pub c6: Option<ProjectiveConstants>,
    pub max_mean_curvature: f64,
    pub max_drift_tangent: f64,
    /// max |H_S| when on the unit sphere.
    pub max_sphere_mean_curvature: Option<f64>,
    pub samples: usize,
}

/// Sample maxima of the pointwise quantities entering the constants.
pub fn constants<I: Immersion + ?Sized>(
    imm: &I,
    drift: &DriftSpec,
    samples: &[Vec<f64>],
) -> Result<GeometricConstants> {
    let n = imm.intrinsic_dim() as f64;
    let (mut nh2, mut tan, mut comb, mut c2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut hmax = 0.0f64;
    let mut on_sphere = !samples.is_empty();
    let mut hs_max = 0.0f64;
    for u in samples {
        let pg = point_geometry(imm, drift, u)?;
        let h2 = pg.mean_curvature * pg.mean_curvature;
        let t = pg.drift_tangent_norm;
        nh2 = nh2.max(n * n * h2);
        tan = tan.max(t);
        comb = comb.max(n * n * h2 + t * t);
        c2 = c2.max(n * n * h2 + 3.0 * t * t);
        hmax = hmax.max(pg.mean_curvature);
        if (pg.position.norm() - 1.0).abs() > VARIANT_TOLERANCE {
            on_sphere = false;
        }
        // Inside the unit sphere the Euclidean mean curvature vector splits
        // as H = H_S - X.
        hs_max = hs_max.max((&pg.mean_curvature_vector + &pg.position).norm());
    }
    let sphere_h = on_sphere.then_some(hs_max);
    Ok(GeometricConstants {
        n: imm.intrinsic_dim(),
        ambient_dim: imm.ambient_dim(),
        c1_hat: 0.25 * nh2,
        c1_tilde: 0.25 * tan,
        c1_combined: 0.25 * comb,
        c2_hat: c2 / 6.0,
        c3: 0.25 * tan,
        c4: sphere_h.map(|h| (0.25 * n * n * (h * h + 1.0), 0.25 * tan)),
        c5: 0.25 * tan,
        c6: None,
        max_mean_curvature: hmax,
        max_drift_tangent: tan,
        max_sphere_mean_curvature: sphere_h,
        samples: samples.len(),
    })
}

/// Base field of a projective space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    /// Real dimension d_F.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProjectiveConstants {
    pub field: Field,
    pub c6_hat: f64,
    pub c6_tilde: f64,
}

/// C6 = (1/4)(n^2 H^2 + 2n(n + d_F)) and C6~ = (1/4) max |nu^T| for an
/// immersion into FP^m with mean curvature bounded by `max_h`.
pub fn projective_constants(n: usize, field: Field, max_h: f64, max_drift_tangent: f64) -> ProjectiveConstants {
    let nf = n as f64;
    let d = field.real_dim() as f64;
    ProjectiveConstants {
        field,
        c6_hat: 0.25 * (nf * nf * max_h * max_h + 2.0 * nf * (nf + d)),
        c6_tilde: 0.25 * max_drift_tangent,
    }
}

/// Which inequality a report belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TheoremId {
    Thm11,
    Cor11,
    Cor12,
    Cor13,
    Thm51,
    Cor51,
    Cor52,
    Cor53,
    Cor61,
    Cor62,
    Cor63,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::Thm11,
        TheoremId::Cor11,
        TheoremId::Cor12,
        TheoremId::Cor13,
        TheoremId::Thm51,
        TheoremId::Cor51,
        TheoremId::Cor52,
        TheoremId::Cor53,
        TheoremId::Cor61,
        TheoremId::Cor62,
        TheoremId::Cor63,
    ];

    pub fn key(self) -> &'static str {
        match self {
            TheoremId::Thm11 => "thm11",
            TheoremId::Cor11 => "cor11",
            TheoremId::Cor12 => "cor12",
            TheoremId::Cor13 => "cor13",
            TheoremId::Thm51 => "thm51",
            TheoremId::Cor51 => "cor51",
            TheoremId::Cor52 => "cor52",
            TheoremId::Cor53 => "cor53",
            TheoremId::Cor61 => "cor61",
            TheoremId::Cor62 => "cor62",
            TheoremId::Cor63 => "cor63",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        TheoremId::ALL.into_iter().find(|t| t.key() == key)
    }

    /// Whether the check consumes a translator certificate.
    pub fn is_translator(self) -> bool {
        matches!(self, TheoremId::Thm51 | TheoremId::Cor51 | TheoremId::Cor52 | TheoremId::Cor53)
    }
}

/// Outcome of one inequality check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub n: usize,
    /// Lambda_1 .. Lambda_{n+1}.
    pub eigenvalues: Vec<f64>,
    /// (C, C~) as entered into the right-hand side.
    pub constant: f64,
    pub constant_tilde: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl BoundReport {
    fn new(theorem: TheoremId, n: usize, eig: &[f64], c: f64, ct: f64, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        BoundReport {
            theorem,
            n,
            eigenvalues: eig[..=n].to_vec(),
            constant: c,
            constant_tilde: ct,
            lhs,
            rhs,
            margin,
            pass: margin >= -REPORT_EPSILON * rhs.abs(),
        }
    }

    /// margin / RHS.
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.rhs.abs()
    }
}

fn require(eig: &[f64], n: usize) -> Result<()> {
    if eig.len() < n + 1 {
        return Err(Error::InsufficientSpectrum { needed: n + 1, available: eig.len() });
    }
    if n == 0 {
        return Err(Error::InvalidInput("intrinsic dimension must be positive".into()));
    }
    Ok(())
}

/// sum_{i=1}^n (Lambda_{i+1} - Lambda_1)^{1/2}
pub fn gap_sum(eig: &[f64], n: usize) -> f64 {
    (1..=n).map(|i| (eig[i] - eig[0]).max(0.0).sqrt()).sum()
}

/// sum_{i=1}^n {(Lambda_{i+1} - Lambda_1)^{1/2} - Lambda_1^{1/2}}
pub fn shifted_gap_sum(eig: &[f64], n: usize) -> f64 {
    gap_sum(eig, n) - n as f64 * eig[0].sqrt()
}

/// K = Lambda^{1/2} + 4 C~ Lambda^{1/4} + 4 C~^2 + C.
pub fn k_term(l1: f64, c: f64, ct: f64) -> f64 {
    l1.sqrt() + 4.0 * ct * l1.sqrt().sqrt() + 4.0 * ct * ct + c
}

/// 4 sqrt(K (K + n/2 Lambda^{1/2})).
pub fn quadratic_rhs(l1: f64, n: usize, c: f64, ct: f64) -> f64 {
    let k = k_term(l1, c, ct);
    4.0 * (k * (k + 0.5 * n as f64 * l1.sqrt())).sqrt()
}

/// 6 sqrt((s + C2)((n/3 + 1) s + C2)).
pub fn six_rhs(l1: f64, n: usize, c2: f64) -> f64 {
    let s = l1.sqrt();
    6.0 * ((s + c2) * ((n as f64 / 3.0 + 1.0) * s + c2)).sqrt()
}

/// delta = sqrt(K / (K + n/2 Lambda^{1/2})), the minimizer of
/// 4 (delta/2 + 1/(2 delta)) K + n delta Lambda^{1/2}.
pub fn optimal_delta(l1: f64, n: usize, c: f64, ct: f64) -> f64 {
    let k = k_term(l1, c, ct);
    (k / (k + 0.5 * n as f64 * l1.sqrt())).sqrt()
}

pub fn thm11_check(eig: &[f64], k: &GeometricConstants, n: usize) -> Result<BoundReport> {
    require(eig, n)?;
    let rhs = quadratic_rhs(eig[0], n, k.c1_hat, k.c1_tilde);
    Ok(BoundReport::new(TheoremId::Thm11, n, eig, k.c1_hat, k.c1_tilde, gap_sum(eig, n), rhs))
}

pub fn cor11_check(eig: &[f64], k: &GeometricConstants, n: usize) -> Result<BoundReport> {
    require(eig, n)?;
    let rhs = 4.0 * k_term(eig[0], k.c1_hat, k.c1_tilde);
    Ok(BoundReport::new(TheoremId::Cor11, n, eig, k.c1_hat, k.c1_tilde, shifted_gap_sum(eig, n), rhs))
}

pub fn cor12_check(eig: &[f64], k: &GeometricConstants, n: usize) -> Result<BoundReport> {
    require(eig, n)?;
    let rhs = six_rhs(eig[0], n, k.c2_hat);
    Ok(BoundReport::new(TheoremId::Cor12, n, eig, k.c2_hat, 0.0, gap_sum(eig, n), rhs))
}

pub fn cor13_check(eig: &[f64], k: &GeometricConstants, n: usize) -> Result<BoundReport> {
    require(eig, n)?;
    let rhs = 6.0 * (eig[0].sqrt() + k.c2_hat);
    Ok(BoundReport::new(TheoremId::Cor13, n, eig, k.c2_hat, 0.0, shifted_gap_sum(eig, n), rhs))
}

/// Proof that an immersion/drift pair passed the translator gate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TranslatorCertificate {
    residual: f64,
    samples: usize,
}

impl TranslatorCertificate {
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn samples(&self) -> usize {
        self.samples
    }
}

/// Certifies H = nu_0^N to [`TRANSLATOR_TOLERANCE`] on the samples, with a unit drift.
pub fn translator_gate<I: Immersion + ?Sized>(
    imm: &I,
    drift: &DriftSpec,
    samples: &[Vec<f64>],
) -> Result<TranslatorCertificate> {
    if !drift.unit {
        return Err(Error::NotATranslator { residual: f64::INFINITY });
    }
    let residual = translator_residual(imm, drift, samples)?;
    if !(residual <= TRANSLATOR_TOLERANCE) {
        return Err(Error::NotATranslator { residual });
    }
    Ok(TranslatorCertificate { residual, samples: samples.len() })
}

fn translator_k(l1: f64, n: usize) -> f64 {
    let nf = n as f64;
    l1.sqrt() + l1.sqrt().sqrt() + nf * nf / 4.0
}

pub fn thm51_check(eig: &[f64], n: usize, _gate: &TranslatorCertificate) -> Result<BoundReport> {
    require(eig, n)?;
    let k = translator_k(eig[0], n);
    let rhs = 4.0 * (k * (k + 0.5 * n as f64 * eig[0].sqrt())).sqrt();
    Ok(BoundReport::new(TheoremId::Thm51, n, eig, 0.25 * (n * n) as f64, 0.25, gap_sum(eig, n), rhs))
}

pub fn cor51_check(eig: &[f64], n: usize, _gate: &TranslatorCertificate) -> Result<BoundReport> {
    require(eig, n)?;
    let rhs = 4.0 * translator_k(eig[0], n);
    Ok(BoundReport::new(TheoremId::Cor51, n, eig, 0.25 * (n * n) as f64, 0.25, shifted_gap_sum(eig, n), rhs))
}

pub fn cor52_check(eig: &[f64], n: usize, _gate: &TranslatorCertificate) -> Result<BoundReport> {
    require(eig, n)?;
    let c2 = (n * n) as f64 / 6.0;
    Ok(BoundReport::new(TheoremId::Cor52, n, eig, c2, 0.0, gap_sum(eig, n), six_rhs(eig[0], n, c2)))
}

pub fn cor53_check(eig: &[f64], n: usize, _gate: &TranslatorCertificate) -> Result<BoundReport> {
    require(eig, n)?;
    let c2 = (n * n) as f64 / 6.0;
    let rhs = 6.0 * (eig[0].sqrt() + c2);
    Ok(BoundReport::new(TheoremId::Cor53, n, eig, c2, 0.0, shifted_gap_sum(eig, n), rhs))
}

/// Special geometric settings of the quadratic inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Variant {
    /// Minimal immersion into Euclidean space: H = 0.
    Minimal,
    /// Immersion into the unit sphere S^{n+p-1}.
    Sphere,
    /// A domain of the unit sphere S^n itself.
    UnitSphere,
}

impl Variant {
    pub fn theorem(self) -> TheoremId {
        match self {
            Variant::Minimal => TheoremId::Cor61,
            Variant::Sphere => TheoremId::Cor62,
            Variant::UnitSphere => TheoremId::Cor63,
        }
    }
}

pub fn cor6x_check(eig: &[f64], k: &GeometricConstants, n: usize, variant: Variant) -> Result<BoundReport> {
    require(eig, n)?;
    let nf = n as f64;
    let (c, ct) = match variant {
        Variant::Minimal => {
            if k.max_mean_curvature > VARIANT_TOLERANCE {
                return Err(Error::VariantMismatch("minimal variant needs vanishing mean curvature"));
            }
            (0.0, k.c3)
        }
        Variant::Sphere => k.c4.ok_or(Error::VariantMismatch("sphere variant needs |X| = 1 on the domain"))?,
        Variant::UnitSphere => {
            let hs = k
                .max_sphere_mean_curvature
                .ok_or(Error::VariantMismatch("unit-sphere variant needs |X| = 1 on the domain"))?;
            if k.ambient_dim != n + 1 || hs > VARIANT_TOLERANCE {
                return Err(Error::VariantMismatch("unit-sphere variant needs a domain of S^n in R^{n+1}"));
            }
            (nf * nf / 4.0, k.c5)
        }
    };
    let rhs = quadratic_rhs(eig[0], n, c, ct);
    Ok(BoundReport::new(variant.theorem(), n, eig, c, ct, gap_sum(eig, n), rhs))
}

#[cfg(test)]
mod tests;

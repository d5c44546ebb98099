use core::fmt;

/// Everything that can go wrong between a chart and a bound report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The induced metric is not positive definite, or is too badly
    /// conditioned to trust (a coordinate pole, a folded chart).
    SingularMetric { det: f64, condition: f64 },
    /// Clamping removed every degree of freedom.
    EmptyInterior,
    /// The mass matrix failed its Cholesky factorization.
    IndefiniteMass,
    /// Residual certification failed. Carries what was computed anyway.
    NoConvergence { achieved: f64, eigenvalues: alloc::vec::Vec<f64> },
    /// Fewer eigenpairs were supplied than the check consumes.
    InsufficientSpectrum { needed: usize, available: usize },
    /// More eigenpairs requested than free DOFs exist.
    TooManyEigenpairs { requested: usize, free_dofs: usize },
    ZeroVector,
    /// Translator gate failed: max |H - nu_0^N| over the samples.
    NotATranslator { residual: f64 },
    /// Geometry does not satisfy the hypotheses of the requested variant.
    VariantMismatch(&'static str),
    /// Malformed mesh, domain, or geometry parameters.
    InvalidInput(alloc::string::String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularMetric { det, condition } => write!(
                f,
                "singular metric (det = {det:e}, condition number = {condition:e})"
            ),
            Error::EmptyInterior => write!(f, "clamped boundary conditions leave no free DOFs"),
            Error::IndefiniteMass => write!(f, "mass matrix is not positive definite"),
            Error::NoConvergence { achieved, .. } => {
                write!(f, "eigensolver did not converge (worst residual {achieved:e})")
            }
            Error::InsufficientSpectrum { needed, available } => write!(
                f,
                "check needs {needed} eigenvalues but only {available} were computed"
            ),
            Error::TooManyEigenpairs { requested, free_dofs } => write!(
                f,
                "requested {requested} eigenpairs but the clamped space has {free_dofs} DOFs"
            ),
            Error::ZeroVector => write!(f, "Rayleigh quotient of a zero vector"),
            Error::NotATranslator { residual } => write!(
                f,
                "geometry is not a translating soliton (residual {residual:e})"
            ),
            Error::VariantMismatch(why) => write!(f, "variant mismatch: {why}"),
            Error::InvalidInput(why) => write!(f, "invalid input: {why}"),
        }
    }
}

impl core::error::Error for Error {}

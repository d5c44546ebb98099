//! Conforming C1 discretization of the clamped problem for L_nu^2.
//!
//! The weak form is a(u, v) = int (L_nu u)(L_nu v) e^w dv over the closure
//! of compactly supported smooth functions in H^2, discretized with Hermite
//! elements so that discrete eigenvalues bound the exact ones from above.

mod domain;
mod factor;
mod forms;
mod hermite;
mod mesh;

pub use domain::{DomainSpec, FaceCondition};
pub use factor::EnergyFactor;
pub use forms::{
    asymmetry, assemble, eigenfunction_functionals, lnu_apply, self_adjointness_check, AssembledForms, Functionals,
};
pub use hermite::{hermite_1d, hermite_index};
pub use mesh::{BasisValues, MeshC1, QuadPoint, DEFAULT_QUADRATURE, MIN_QUADRATURE};

#[cfg(test)]
mod tests;

//! Clamped plate spectra of the drift Laplacian L_nu = Delta + <nu, grad .>
//! on immersed manifolds, and machine checks of universal eigenvalue
//! inequalities for L_nu^2.
//!
//! The crate is `no_std` and only needs `alloc`. IO, configuration and the
//! command line live in the companion `driftplate-lab` crate.
#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod bounds;
pub mod eigensolve;
pub mod error;
pub mod geometry;
pub mod oracles;
pub mod quadrature;

pub use error::{Error, Result};

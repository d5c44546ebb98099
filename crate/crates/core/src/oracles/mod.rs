//! Reference spectra computed without the finite element path: the
//! clamped-beam frequency equation, and finite differences in the gauge
//! where the drift turns into a constant shift. Each oracle carries its
//! own band Cholesky and small Jacobi eigensolver.

mod beam;
mod fd;
mod linalg;
mod richardson;

pub use beam::{beam_reference, beam_root, MAX_BEAM_COUNT};
pub use fd::{
    conjugation_oracle, fd_plate_oracle, interval_fd_eigenvalues, plate_fd_eigenvalues, INTERVAL_LEVELS, PLATE_LEVELS,
};
pub use richardson::{
    extrapolated_limit, nested_ratios, observed_order, observed_orders, richardson_corner, Order, CONVERGED_CHANGE,
};

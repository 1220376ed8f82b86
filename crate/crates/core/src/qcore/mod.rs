//! Dense complex linear algebra and entropy primitives for small qubit
//! registers.

pub mod eigen;
pub mod entropy;
pub mod layout;
pub mod matrix;
pub mod ops;
pub mod state;

pub use eigen::{eigh, eigvals_hermitian, EigenDecomposition};
pub use entropy::{binary_entropy, spectrum_entropy, von_neumann_entropy};
pub use layout::{Receiver, RegisterLayout, Role};
pub use matrix::Matrix;
pub use ops::tensor;
pub use state::{partial_trace, DensityOperator, StateVector};

use crate::error::Result;
use crate::scalar::Real;

/// Applies a unitary to `targets` of a density operator.
pub fn apply_local_unitary<R: Real>(
    rho: &DensityOperator<R>,
    targets: &[usize],
    u: &Matrix<R>,
) -> Result<DensityOperator<R>> {
    rho.apply_local_unitary(targets, u)
}

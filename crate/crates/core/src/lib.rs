//! Upper bounds on the LOCC dense-coding capacity of multiqubit states shared
//! by N senders and two receivers, with and without noise on the senders'
//! channels, and the generalized geometric measure (GGM) of the shared state.
//!
//! The numeric core is generic over [`Real`] (`f64` or `f32`); the aliases
//! below fix the scalar to `f64`, which every experiment uses.
//!
//! Qubit 0 is the most significant bit of basis indices and all entropies
//! are in bits.

// `!(x >= 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channels;
pub mod error;
pub mod experiment;
pub mod ggm;
pub mod qcore;
pub mod scalar;
pub mod states;

pub use capacity::{
    covariant_chi, ensemble_chi, global_capacity, locc_bound_noiseless, min_output_entropy,
    noisy_locc_bound, BoundReport, EncodingUnitaryParams, Ensemble, GlobalCapacity, OptConfig,
    Parameterization,
};
pub use channels::{
    apply_channel, check_covariance, kraus_for, pauli_basis, twirl, ChannelSpec, KrausSet,
};
pub use error::{Error, Result};
pub use ggm::{gghz_ggm_at_capacity, ggm, theorem2_conditions, BipartitionScan, Theorem2Flags};
pub use qcore::{
    binary_entropy, eigvals_hermitian, partial_trace, tensor, von_neumann_entropy, DensityOperator,
    Matrix, Receiver, RegisterLayout, Role, StateVector,
};
pub use scalar::{Real, C};
pub use states::{
    haar_random_pure, load_state, make_gghz, make_ghz, save_state, GghzParams, RngSeed,
};

pub type ComplexMatrix = Matrix<f64>;
pub type DensityOp = DensityOperator<f64>;
pub type PureState = StateVector<f64>;
pub type Channel = ChannelSpec<f64>;
pub type Report = BoundReport<f64>;

pub type ComplexMatrix32 = Matrix<f32>;
pub type DensityOp32 = DensityOperator<f32>;
pub type PureState32 = StateVector<f32>;

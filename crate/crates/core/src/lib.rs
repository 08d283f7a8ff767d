//! Noncommutative coherence of qubits and non-Hadamard phase estimation.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`, which is what the sweeps and
//! tolerances are tuned for.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherence;
pub mod distance;
pub mod error;
pub mod hermitian;
pub mod optimize;
pub mod qpea;
pub mod scalar;
pub mod spectral;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use coherence::{
    density_from_bloch, jordan_half, nc_coherence, nc_distance_at, nc_operator_pair, pure_rel_ent_coherence,
    rel_ent_coherence, trace_dist_coherence, ConventionalCoherence, Distance,
};
pub use distance::{relative_entropy, trace_distance, von_neumann_entropy};
pub use error::{Error, Result};
pub use optimize::{grid_refine, linspace, Goal, GridRefine};
pub use qpea::{
    circuit_amplitudes, circuit_oracle, default_delta, derivative_argmax, derivative_argmax_on, popcount, prob_curve,
    success_prob_derivative, success_prob_product, success_prob_sum, theta_argmax, theta_argmax_on, theta_argmin,
    theta_argmin_on,
};
pub use scalar::Real;
pub use spectral::{eig_herm, spectral_map, spectral_map_with, SpectralFn};

pub type HermitianOperator = hermitian::HermitianOperator<f64>;
pub type SpectralDecomposition = spectral::SpectralDecomposition<f64>;
pub type ExtendedReal = distance::ExtendedReal<f64>;
pub type BlochState = coherence::BlochState<f64>;
pub type IncoherentQubit = coherence::IncoherentQubit<f64>;
pub type NcConfig = coherence::NcConfig<f64>;
pub type NcResult = coherence::NcResult<f64>;
pub type QpeaParams = qpea::QpeaParams<f64>;
pub type ProbCurve = qpea::ProbCurve<f64>;

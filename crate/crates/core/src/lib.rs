//! Log-singularity analysis of complementary quantum channel pairs.
//!
//! An isometry `J: H_a -> H_b ⊗ H_c` defines a channel `B` and its complement
//! `C`. The crate computes the entropy bias `Δ = S(B(ρ)) - S(C(ρ))`, the rates
//! at which output eigenvalues leave zero along one-parameter input families,
//! certificates for positive coherent information built from those rates, and
//! the non-additivity threshold for amplitude damping paired with a qutrit
//! channel.

pub mod channels;
pub mod coherent;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod optimize;
pub mod random;
pub mod singularity;
pub mod state;

pub use channels::{
    build_amplitude_damping, build_erasure, build_generalized_erasure, build_pedagogic,
    build_qubit_family, build_qutrit, channel_outputs, minimal_output_dims, tensor_pair, Isometry,
};
pub use entropy::{entropy_bias, output_spectra_pure, von_neumann_entropy, BiasValue};
pub use error::{Error, Result};
pub use exec::Exec;
pub use state::DensityOperator;

/// Eigenvalues at or below this are treated as zero when counting rank.
pub const RANK_TOL: f64 = 1e-10;
/// Eigenvalues at or below this contribute nothing to an entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
/// Allowed negativity / non-Hermiticity / trace defect of a density operator.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of `J†J` from the identity.
pub const ISOMETRY_TOL: f64 = 1e-10;
/// Minimum gap between two emergence rates before one is called stronger.
pub const RATE_MARGIN: f64 = 1e-9;

/// Tool name and version embedded in every written artifact.
pub const TOOL_VERSION: &str = concat!("logsing ", env!("CARGO_PKG_VERSION"));

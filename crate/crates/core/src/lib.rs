//! Two-sided quaternion Fourier transform on sampled 2D quaternion-valued signals,
//! with numerical labs for its Plancherel, derivative and eigenfunction identities,
//! the Heisenberg inequality with covariance term, and the Hardy decay trichotomy.

pub mod cli;
pub mod error;
pub mod format;
pub mod grid;
pub mod hardy;
pub mod hermite;
pub mod quaternion;
pub mod signals;
pub mod transform;
pub mod uncertainty;

pub use error::{QftError, Result};
pub use grid::{gaussian, l2_norm, sample, Axis, Grid2, GridMode, QSignal, QSpectrum};
pub use quaternion::{exp_pure, PolarForm, Quaternion};
pub use transform::{
    derivative_spectrum, iqdft, pointwise_module, qdft_direct, qdft_fast, spectrum_l2_norm,
    SpectralMultiplierOrder,
};

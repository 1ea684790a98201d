//! Exact integer/rational matrix algebra with certified real spectra.
//!
//! This is the arithmetic bedrock of the lab: arbitrary-precision matrices,
//! exact characteristic polynomials, irreducibility over ℚ, commutation
//! checks, Sturm-certified root isolation, and jointly refined eigenframes
//! for commuting families.

mod frame;
mod int_matrix;
mod poly;
mod spectrum;

pub use frame::{real_spectrum_and_frame, refine_once, FrameOptions, JointEigenframe};
pub use int_matrix::IntMatrix;
pub use poly::CharPoly;
pub use spectrum::{IsolatedRoot, RealSpectrum};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },
    #[error("irreducibility test supports degree <= 4, got {degree}")]
    UnsupportedDegree { degree: usize },
    #[error("spectrum is not simple and real: {reason}")]
    NotRealSplit { reason: String },
    #[error("generators {first} and {second} do not commute")]
    NotCommuting { first: usize, second: usize },
    #[error("empty generator family")]
    EmptyFamily,
    #[error("eigenframe is numerically singular")]
    FrameSingular,
    #[error("eigenvalue pairing ambiguous for generator {generator}")]
    PairingAmbiguous { generator: usize },
    #[error("frame residual {residual:e} exceeds tolerance {tolerance:e}")]
    FrameResidual { residual: f64, tolerance: f64 },
}


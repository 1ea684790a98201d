//! Numerical ergodic-theory estimators: Birkhoff averages, QR cocycle
//! spectra, local (dynamical-ball) entropy, partition entropy rates,
//! entropy inequality verdicts, measure shear probes, and subexponential
//! growth detection.

mod birkhoff;
mod entropy;
mod growth;
mod lyapunov;
pub mod maps;
mod shear;

pub use birkhoff::birkhoff_average;
pub use entropy::{
    brin_katok_entropy, entropy_inequality_report, partition_entropy_rate, BrinKatokOptions,
    BrinKatokReport, EntropyMethod, EntropyReport, PartitionRateReport, RadiusFit,
};
pub use growth::{subexp_growth_probe, GrowthVerdict};
pub use lyapunov::{qr_oseledec, top_lyapunov_estimate, Cocycle, OseledecSpectrum, TopLyapunov};
pub use maps::{
    bernoulli_doubling_orbit, lebesgue_orbit, orbit_from, torus_distance, Continuation,
    OrbitSample, TorusMap,
};
pub use shear::{shear_probe, ShearMeasureSpec, ShearVerdict};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmpiricalError {
    #[error("input too short: need at least {needed}, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("cocycle became singular at step {step}")]
    SingularCocycle { step: usize },
    #[error("norms must be positive and finite")]
    NonPositiveNorm,
    #[error("window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: f64, hi: f64 },
    #[error("only {found} atoms in the window, need {needed}")]
    InsufficientAtoms { found: usize, needed: usize },
    #[error("no radius in the schedule produced enough ball counts")]
    NoUsableRadii,
    #[error("itinerary words of depth {depth} over {cells} cells overflow the word encoder")]
    WordTooLong { depth: usize, cells: usize },
}

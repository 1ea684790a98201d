//! # cartanlab
//!
//! A desk-scale laboratory for higher-rank dynamics on tori and on
//! `SL(n,ℝ)/Γ`:
//!
//! - exact integer matrix algebra with certified real spectra and joint
//!   eigenframes ([`exact`]);
//! - Lyapunov exponent functionals, kernel/chamber combinatorics, coarse
//!   proportionality classes, and the higher-rank sign-selection tricks
//!   ([`functionals`], [`chambers`]);
//! - ℤᵏ actions by toral automorphisms, exact orbits, Pesin entropy values,
//!   and the ×a×b circle dynamics ([`toral`], [`furstenberg`]);
//! - the algebraic suspension with its interpolation matrices and twisted
//!   lattices ([`suspension`]);
//! - `SL(n,ℝ)` root data, bracket and conjugation identities, Lie closures,
//!   KAK decompositions, resonance bookkeeping, and the two-stage averaging
//!   schedule on `SL(3,ℝ)` ([`sl`]);
//! - empirical estimators: Birkhoff averages, QR cocycle spectra, dynamical
//!   ball entropy, partition entropy rates, measure shear probes, and
//!   subexponential growth detection ([`empirical`]).
//!
//! The numeric kernels are generic over the scalar type through
//! [`scalar::Real`]; the aliases below fix the `f64` defaults that all
//! stated tolerances are calibrated for.

pub mod chambers;
pub mod empirical;
pub mod exact;
pub mod functionals;
pub mod furstenberg;
pub mod linalg;
pub mod samples;
pub mod scalar;
pub mod sl;
pub mod suspension;
pub mod svg;
pub mod toral;

/// Default scalar for all tolerance-calibrated work.
pub type Scalar = f64;
/// Dense square matrix over the default scalar.
pub type Matrix = linalg::SquareMatrix<Scalar>;
/// Linear functional over the default scalar.
pub type Functional = functionals::LinearFunctional<Scalar>;
/// Functional family over the default scalar.
pub type Family = functionals::FunctionalFamily<Scalar>;
/// Joint eigenframe over the default scalar.
pub type Eigenframe = exact::JointEigenframe<Scalar>;

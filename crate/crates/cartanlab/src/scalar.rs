//! Floating-point scalar abstraction for the numeric kernels.
//!
//! The exact lane (integer matrices, characteristic polynomials, root
//! isolation) works over arbitrary-precision integers and rationals and is
//! not generic. Everything downstream of the certified spectra — frames,
//! functionals, chambers, suspensions, cocycle estimators — is generic over
//! a [`Real`] scalar so the same kernels run at `f32` or `f64`. Concrete
//! `f64` aliases live at the crate root; all default tolerances are tuned
//! for `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::NumCast
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used to inject tolerance constants.
    fn of(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("finite f64 converts")
    }

    /// Lossy conversion to `f64`, used for reporting.
    fn as_f64(self) -> f64 {
        num_traits::NumCast::from(self).expect("scalar fits in f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

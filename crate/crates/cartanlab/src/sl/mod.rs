//! Root data of `SL(n,ℝ)`: the functionals `β^{i,j}(t) = tᵢ − tⱼ` on the
//! Cartan subgroup of positive diagonal matrices, their one-parameter
//! unipotent subgroups, the conjugation dilation identity, bracket
//! classification, Lie-subalgebra closures, KAK decomposition, resonance
//! bookkeeping, and the two-stage averaging schedule on `SL(3,ℝ)`.

mod bracket;
mod closure;
mod kak;
mod schedule;

pub use bracket::{group_commutator_rational, root_bracket, BracketClass};
pub use closure::{lie_closure, ClosureSeed, LieSubalgebraBasis};
pub use kak::{kak_decompose, random_unimodular, KakDecomposition};
pub use schedule::{
    averaging_schedule_sl3, resonance_classify, AveragingSchedule, RootResonance, ScheduleElements,
    ScheduleStage,
};

use serde::Serialize;
use thiserror::Error;

use crate::linalg::SquareMatrix;
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum SlError {
    #[error("root indices must differ and lie in 1..={n}, got ({i}, {j})")]
    BadRoot { n: usize, i: usize, j: usize },
    #[error("coordinates must sum to zero, |sum| = {sum:e}")]
    TraceNotZero { sum: f64 },
    #[error("determinant {det} is not within {tol:e} of 1")]
    NotUnimodular { det: f64, tol: f64 },
    #[error("matrix is numerically singular (smallest singular value {sigma:e})")]
    NearSingular { sigma: f64 },
    #[error("functional vanishes on the Cartan subgroup")]
    ZeroFunctional,
    #[error("empty closure seed")]
    EmptySeed,
}

/// Element of the Cartan subgroup in log-diagonal coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CartanElement<R: Real> {
    pub t: Vec<R>,
}

impl<R: Real> CartanElement<R> {
    pub fn new(t: Vec<R>) -> Result<Self, SlError> {
        let sum: R = t.iter().copied().sum();
        if sum.abs() > R::of(1e-12) {
            return Err(SlError::TraceNotZero { sum: sum.as_f64() });
        }
        Ok(Self { t })
    }

    /// Log coordinates of `diag(entries)`, entries positive with product 1.
    pub fn from_diagonal(entries: &[R]) -> Result<Self, SlError> {
        Self::new(entries.iter().map(|&x| x.ln()).collect())
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    /// The matrix `diag(e^{t₁}, …, e^{tₙ})`.
    pub fn exp(&self) -> SquareMatrix<R> {
        SquareMatrix::diagonal(&self.t.iter().map(|&x| x.exp()).collect::<Vec<_>>())
    }

    pub fn inverse(&self) -> Self {
        Self { t: self.t.iter().map(|&x| -x).collect() }
    }
}

/// Root system of `SL(n,ℝ)`: ordered pairs `(i, j)`, `i ≠ j`, 1-based.
#[derive(Debug, Clone, Serialize)]
pub struct RootDatum {
    pub n: usize,
}

pub type RootLabel = (usize, usize);

impl RootDatum {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        Self { n }
    }

    /// All `n(n−1)` roots in lexicographic order.
    pub fn roots(&self) -> Vec<RootLabel> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1));
        for i in 1..=self.n {
            for j in 1..=self.n {
                if i != j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn check_root(&self, (i, j): RootLabel) -> Result<(), SlError> {
        if i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(SlError::BadRoot { n: self.n, i, j });
        }
        Ok(())
    }

    /// `β^{i,j}(a) = tᵢ − tⱼ`.
    pub fn root_value<R: Real>(&self, root: RootLabel, a: &CartanElement<R>) -> Result<R, SlError> {
        self.check_root(root)?;
        let sum: R = a.t.iter().copied().sum();
        if sum.abs() > R::of(1e-12) {
            return Err(SlError::TraceNotZero { sum: sum.as_f64() });
        }
        Ok(a.t[root.0 - 1] - a.t[root.1 - 1])
    }

    /// `u^{i,j}(v) = Id + v·E_{ij}`.
    pub fn unipotent<R: Real>(&self, root: RootLabel, v: R) -> Result<SquareMatrix<R>, SlError> {
        self.check_root(root)?;
        let mut m = SquareMatrix::identity(self.n);
        m[(root.0 - 1, root.1 - 1)] = v;
        Ok(m)
    }

    /// `‖s·u^{i,j}(v)·s⁻¹ − u^{i,j}(e^{β^{i,j}(a)}·v)‖`, the defect of the
    /// conjugation dilation identity (zero up to rounding).
    pub fn conjugation_residual<R: Real>(
        &self,
        a: &CartanElement<R>,
        root: RootLabel,
        v: R,
    ) -> Result<R, SlError> {
        self.check_root(root)?;
        let u = self.unipotent(root, v)?;
        let s = a.exp();
        let s_inv = a.inverse().exp();
        let conjugated = s.mul(&u).mul(&s_inv);
        let beta = self.root_value(root, a)?;
        let expected = self.unipotent(root, beta.exp() * v)?;
        Ok(conjugated.sub(&expected).max_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn root_values_and_antisymmetry() {
        let datum = RootDatum::new(3);
        let a = CartanElement::new(vec![1.0, 0.0, -1.0]).unwrap();
        assert_eq!(datum.root_value((1, 2), &a).unwrap(), 1.0);
        assert_eq!(datum.root_value((2, 1), &a).unwrap(), -1.0);
        assert!(datum.root_value((1, 1), &a).is_err());
        assert_eq!(datum.roots().len(), 6);
        assert!(CartanElement::new(vec![1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn antisymmetry_is_exact_on_random_elements() {
        let datum = RootDatum::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut t: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mean = t.iter().sum::<f64>() / 4.0;
            t.iter_mut().for_each(|x| *x -= mean);
            let a = CartanElement::new(t).unwrap();
            for (i, j) in datum.roots() {
                let forward = datum.root_value((i, j), &a).unwrap();
                let backward = datum.root_value((j, i), &a).unwrap();
                assert_eq!(forward, -backward);
            }
        }
    }

    #[test]
    fn unipotents_form_one_parameter_groups() {
        let datum = RootDatum::new(3);
        let u = datum.unipotent((1, 2), 0.5f64).unwrap();
        assert_eq!(u[(0, 1)], 0.5);
        assert!(datum
            .unipotent((1, 2), 0.0f64)
            .unwrap()
            .sub(&SquareMatrix::identity(3))
            .max_norm()
            == 0.0);
        let u2 = datum.unipotent((1, 2), 2.0f64).unwrap();
        let u3 = datum.unipotent((1, 2), 3.0f64).unwrap();
        let u5 = datum.unipotent((1, 2), 5.0f64).unwrap();
        assert!(u2.mul(&u3).sub(&u5).max_norm() == 0.0);
    }

    #[test]
    fn conjugation_dilates_the_parameter() {
        let datum = RootDatum::new(3);
        let zero = CartanElement::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(datum.conjugation_residual(&zero, (1, 2), 1.0).unwrap(), 0.0);

        // diag(2, 1, 1/2) doubles the (1,2) parameter.
        let a = CartanElement::new(vec![2f64.ln(), 0.0, -(2f64.ln())]).unwrap();
        let u = datum.unipotent((1, 2), 1.0f64).unwrap();
        let s = a.exp();
        let conj = s.mul(&u).mul(&a.inverse().exp());
        assert!((conj[(0, 1)] - 2.0).abs() < 1e-12);
        assert!(datum.conjugation_residual(&a, (1, 2), 1.0).unwrap() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [3usize, 4] {
            let datum = RootDatum::new(n);
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
                let mean = t.iter().sum::<f64>() / n as f64;
                t.iter_mut().for_each(|x| *x -= mean);
                let a = CartanElement::new(t).unwrap();
                let v = rng.gen_range(-2.0..2.0);
                for root in datum.roots() {
                    worst = worst.max(datum.conjugation_residual(&a, root, v).unwrap());
                }
            }
            assert!(worst < 1e-11, "worst residual {worst} for n={n}");
        }
    }
}

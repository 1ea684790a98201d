//! Cocycle exponents by running QR renormalization.
//!
//! The product of the cocycle matrices is never formed: each step applies
//! the next matrix to the running orthogonal frame and re-factors, so
//! exponents up to |λ| ≈ 700 nats per step stay inside double range. The
//! exponent sums are exactly the accumulated logs of the R diagonal, whose
//! total matches the accumulated log-determinant step by step.

use serde::Serialize;

use crate::linalg::SquareMatrix;
use crate::scalar::Real;

use super::EmpiricalError;

/// Matrix cocycle along an orbit; constant cocycles stay O(1) in memory.
#[derive(Debug, Clone)]
pub enum Cocycle<R: Real> {
    Constant { matrix: SquareMatrix<R>, length: usize },
    Sequence { matrices: Vec<SquareMatrix<R>> },
}

impl<R: Real> Cocycle<R> {
    pub fn len(&self) -> usize {
        match self {
            Cocycle::Constant { length, .. } => *length,
            Cocycle::Sequence { matrices } => matrices.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            Cocycle::Constant { matrix, .. } => matrix.dim(),
            Cocycle::Sequence { matrices } => matrices.first().map(|m| m.dim()).unwrap_or(0),
        }
    }

    fn at(&self, k: usize) -> &SquareMatrix<R> {
        match self {
            Cocycle::Constant { matrix, .. } => matrix,
            Cocycle::Sequence { matrices } => &matrices[k],
        }
    }
}

/// Top exponent estimate with its subadditive checkpoint sequence.
#[derive(Debug, Clone, Serialize)]
pub struct TopLyapunov<R: Real> {
    pub estimate: R,
    /// `(n, (1/n)·log‖…‖)` at powers of two: the subadditive sequence.
    pub checkpoints: Vec<(usize, R)>,
}

/// Averaged top exponent `(1/n)·log‖A_n ⋯ A_1‖`.
///
/// The running product is renormalized scalar-wise every step (the rescale
/// factors accumulate in a log), so no entry ever overflows and the norm
/// semantics stay exact. Re-factoring the product itself would rotate the
/// leading singular direction out of alignment with the remaining cocycle
/// and bleed a constant factor per refactor, so only the estimator of the
/// full spectrum runs a QR cascade. Checkpoints at powers of two give the
/// subadditive sequence, non-increasing for stationary cocycles.
pub fn top_lyapunov_estimate<R: Real>(cocycle: &Cocycle<R>) -> Result<TopLyapunov<R>, EmpiricalError> {
    if cocycle.len() < 2 {
        return Err(EmpiricalError::TooShort { needed: 2, got: cocycle.len() });
    }
    let d = cocycle.dim();
    let mut product = SquareMatrix::<R>::identity(d);
    let mut log_scale = R::zero();
    let mut checkpoints = Vec::new();
    let mut next_checkpoint = 1;
    for k in 0..cocycle.len() {
        product = cocycle.at(k).mul(&product);
        let scale = product.max_norm();
        if scale <= R::zero() || !scale.is_finite() {
            return Err(EmpiricalError::SingularCocycle { step: k });
        }
        product = product.scale(R::one() / scale);
        log_scale += scale.ln();
        if k + 1 == next_checkpoint || k + 1 == cocycle.len() {
            let log_norm = log_scale + product.operator_norm().ln();
            checkpoints.push((k + 1, log_norm / R::of((k + 1) as f64)));
            if k + 1 == next_checkpoint {
                next_checkpoint *= 2;
            }
        }
    }
    let estimate = checkpoints.last().expect("nonempty cocycle").1;
    Ok(TopLyapunov { estimate, checkpoints })
}

/// Full Oseledec-style spectrum of the cocycle.
#[derive(Debug, Clone, Serialize)]
pub struct OseledecSpectrum<R: Real> {
    /// Exponents in descending order, nats per step.
    pub exponents: Vec<R>,
    /// Time-averaged log |det|, which the exponents must sum to.
    pub log_det_average: R,
}

impl<R: Real> OseledecSpectrum<R> {
    pub fn exponent_sum(&self) -> R {
        self.exponents.iter().copied().sum()
    }
}

/// Exponents as averaged logs of the running QR diagonal.
pub fn qr_oseledec<R: Real>(cocycle: &Cocycle<R>) -> Result<OseledecSpectrum<R>, EmpiricalError> {
    if cocycle.len() < cocycle.dim() {
        return Err(EmpiricalError::TooShort { needed: cocycle.dim(), got: cocycle.len() });
    }
    let spectrum = qr_spectrum(cocycle)?;
    let n = R::of(cocycle.len() as f64);
    let mut exponents: Vec<R> = spectrum.log_sums.iter().map(|&s| s / n).collect();
    exponents.sort_by(|a, b| b.partial_cmp(a).expect("finite exponents"));
    Ok(OseledecSpectrum { exponents, log_det_average: spectrum.log_det_sum / n })
}

struct QrAccumulation<R: Real> {
    log_sums: Vec<R>,
    log_det_sum: R,
}

fn qr_spectrum<R: Real>(cocycle: &Cocycle<R>) -> Result<QrAccumulation<R>, EmpiricalError> {
    let d = cocycle.dim();
    let mut q = SquareMatrix::<R>::identity(d);
    let mut log_sums = vec![R::zero(); d];
    let mut log_det_sum = R::zero();
    for k in 0..cocycle.len() {
        let z = cocycle.at(k).mul(&q);
        let breakdown_tol = z.max_norm() * R::of(1e-13);
        let (qq, r) = z.qr().map_err(|_| EmpiricalError::SingularCocycle { step: k })?;
        q = qq;
        for i in 0..d {
            let rii = r[(i, i)];
            if rii <= breakdown_tol || !rii.is_finite() {
                return Err(EmpiricalError::SingularCocycle { step: k });
            }
            log_sums[i] += rii.ln();
        }
        log_det_sum += (0..d).map(|i| r[(i, i)].ln()).sum::<R>();
    }
    Ok(QrAccumulation { log_sums, log_det_sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constant(matrix: SquareMatrix<f64>, length: usize) -> Cocycle<f64> {
        Cocycle::Constant { matrix, length }
    }

    #[test]
    fn constant_cocycle_recovers_the_top_root() {
        let a = samples::t3_first().to_float::<f64>();
        let top = top_lyapunov_estimate(&constant(a, 10_000)).unwrap();
        assert!((top.estimate - 5.048917f64.ln()).abs() < 1e-3, "{}", top.estimate);
        // Checkpoints decrease toward the limit (subadditivity).
        let later = top.checkpoints.last().unwrap().1;
        let earlier = top.checkpoints[2].1;
        assert!(earlier >= later - 1e-9);
    }

    #[test]
    fn identity_and_rotation_cocycles_have_zero_exponents() {
        let id = constant(SquareMatrix::identity(3), 500);
        assert!(top_lyapunov_estimate(&id).unwrap().estimate.abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rotations: Vec<SquareMatrix<f64>> = (0..2_000)
            .map(|_| {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                SquareMatrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]])
            })
            .collect();
        let c = Cocycle::Sequence { matrices: rotations };
        assert!(top_lyapunov_estimate(&c).unwrap().estimate.abs() < 1e-3);
        let spectrum = qr_oseledec(&c).unwrap();
        assert!(spectrum.exponents.iter().all(|e| e.abs() < 1e-3));
    }

    #[test]
    fn full_spectrum_of_the_t3_generator() {
        let a = samples::t3_first().to_float::<f64>();
        let s = qr_oseledec(&constant(a, 10_000)).unwrap();
        let expected = [5.048917f64.ln(), 0.643104f64.ln(), 0.307979f64.ln()];
        for (got, want) in s.exponents.iter().zip(expected) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
        assert!(s.exponent_sum().abs() < 1e-6);
        assert!((s.exponent_sum() - s.log_det_average).abs() < 1e-9);
    }

    #[test]
    fn triangular_cocycle_is_exact() {
        let m = SquareMatrix::diagonal(&[2.0, 0.5]);
        let s = qr_oseledec(&constant(m, 50)).unwrap();
        assert!((s.exponents[0] - 2f64.ln()).abs() < 1e-12);
        assert!((s.exponents[1] + 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn inverse_cocycle_negates_and_reverses_the_spectrum() {
        let a = samples::t3_first().to_float::<f64>();
        let a_inv = a.inverse().unwrap();
        let fwd = qr_oseledec(&constant(a, 5_000)).unwrap();
        let bwd = qr_oseledec(&constant(a_inv, 5_000)).unwrap();
        for (f, b) in fwd.exponents.iter().zip(bwd.exponents.iter().rev()) {
            assert!((f + b).abs() < 2e-3, "{f} vs {b}");
        }
    }

    #[test]
    fn singular_cocycle_is_an_error() {
        let m = SquareMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(
            qr_oseledec(&constant(m, 10)),
            Err(EmpiricalError::SingularCocycle { .. })
        ));
    }
}

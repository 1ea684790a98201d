//! Subexponential growth detection for derivative-norm sequences.

use serde::Serialize;

use super::EmpiricalError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthVerdict {
    /// Fitted exponential rate over the tail half, nats per step.
    pub rate: f64,
    pub subexponential: bool,
    pub threshold: f64,
}

/// Least-squares slope of `log ‖Df^n‖` against `n` over the tail half of
/// the sequence, compared to the threshold `epsilon`.
pub fn subexp_growth_probe(norms: &[f64], epsilon: f64) -> Result<GrowthVerdict, EmpiricalError> {
    if norms.len() < 10 {
        return Err(EmpiricalError::TooShort { needed: 10, got: norms.len() });
    }
    if norms.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
        return Err(EmpiricalError::NonPositiveNorm);
    }
    let start = norms.len() / 2;
    let tail: Vec<(f64, f64)> = norms
        .iter()
        .enumerate()
        .skip(start)
        .map(|(n, &x)| (n as f64, x.ln()))
        .collect();
    let n = tail.len() as f64;
    let sx: f64 = tail.iter().map(|p| p.0).sum();
    let sy: f64 = tail.iter().map(|p| p.1).sum();
    let sxx: f64 = tail.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = tail.iter().map(|p| p.0 * p.1).sum();
    let rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(GrowthVerdict { rate, subexponential: rate <= epsilon, threshold: epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SquareMatrix;
    use crate::samples;

    #[test]
    fn geometric_growth_is_flagged() {
        let norms: Vec<f64> = (0..40).map(|n| 2f64.powi(n)).collect();
        let v = subexp_growth_probe(&norms, 0.1).unwrap();
        assert!(!v.subexponential);
        assert!((v.rate - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn polynomial_growth_is_subexponential() {
        let norms: Vec<f64> = (1..=100).map(|n| (n * n) as f64).collect();
        let v = subexp_growth_probe(&norms, 0.1).unwrap();
        assert!(v.subexponential, "rate {}", v.rate);
    }

    #[test]
    fn automorphism_norms_recover_the_top_exponent() {
        let a: SquareMatrix<f64> = samples::cat_map().to_float();
        let mut power = SquareMatrix::identity(2);
        let norms: Vec<f64> = (0..60)
            .map(|_| {
                power = power.mul(&a);
                power.operator_norm()
            })
            .collect();
        let v = subexp_growth_probe(&norms, 0.1).unwrap();
        let target = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(!v.subexponential);
        assert!((v.rate - target).abs() < 1e-6, "rate {}", v.rate);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(matches!(
            subexp_growth_probe(&[1.0; 5], 0.1),
            Err(EmpiricalError::TooShort { .. })
        ));
        let mut norms = vec![1.0; 20];
        norms[7] = 0.0;
        assert!(matches!(
            subexp_growth_probe(&norms, 0.1),
            Err(EmpiricalError::NonPositiveNorm)
        ));
    }
}

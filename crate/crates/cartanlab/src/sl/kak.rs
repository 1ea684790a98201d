//! KAK (Cartan) decomposition `g = k₁ a k₂` with `k₁, k₂ ∈ SO(n)` and `a`
//! positive diagonal sorted descending.
//!
//! Built on the singular value decomposition: the symmetric eigenproblem of
//! `gᵀg` gives the right factor and the singular values; negative
//! determinant signs are folded into matched columns of both orthogonal
//! factors, which leaves the product unchanged and `a` positive.

use crate::linalg::SquareMatrix;
use crate::scalar::Real;

use super::SlError;

#[derive(Debug, Clone)]
pub struct KakDecomposition<R: Real> {
    pub k1: SquareMatrix<R>,
    /// Diagonal of `a`, positive, sorted descending; product is `det g`.
    pub a: Vec<R>,
    pub k2: SquareMatrix<R>,
    /// `‖k₁ a k₂ − g‖`, entrywise max.
    pub residual: R,
}

pub fn kak_decompose<R: Real>(g: &SquareMatrix<R>) -> Result<KakDecomposition<R>, SlError> {
    let n = g.dim();
    let det = g.det();
    if (det - R::one()).abs().as_f64() > 1e-8 {
        return Err(SlError::NotUnimodular { det: det.as_f64(), tol: 1e-8 });
    }
    let gram = g.transpose().mul(g);
    let (vals, v) = gram.symmetric_eigen();
    let sigma: Vec<R> = vals.iter().map(|&x| x.max(R::zero()).sqrt()).collect();
    let smallest = sigma.last().copied().unwrap_or(R::zero());
    if smallest.as_f64() < 1e-10 {
        return Err(SlError::NearSingular { sigma: smallest.as_f64() });
    }
    // u = g v Σ⁻¹, then one orthonormalization pass to clean rounding.
    let mut u = g.mul(&v);
    for j in 0..n {
        let col: Vec<R> = u.column(j).iter().map(|&x| x / sigma[j]).collect();
        u.set_column(j, &col);
    }
    let (u, _) = u.qr().map_err(|_| SlError::NearSingular { sigma: smallest.as_f64() })?;
    let mut k2 = v.transpose();
    let mut k1 = u;
    // Fold sign defects into matching column/row pairs: K1·D·Σ·D·K2 with
    // D² = Id leaves the product invariant and keeps a positive.
    if k1.det() < R::zero() {
        let last = n - 1;
        for i in 0..n {
            k1[(i, last)] = -k1[(i, last)];
            k2[(last, i)] = -k2[(last, i)];
        }
    }
    let reconstruction = k1.mul(&SquareMatrix::diagonal(&sigma)).mul(&k2);
    let residual = reconstruction.sub(g).max_norm();
    Ok(KakDecomposition { k1, a: sigma, k2, residual })
}

/// Seeded random sample of SL(n,ℝ): a product of unit shears and a
/// determinant-one diagonal.
pub fn random_unimodular<R: Real>(
    n: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> SquareMatrix<R> {
    use rand::Rng;
    let mut m = SquareMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut shear = SquareMatrix::identity(n);
                shear[(i, j)] = R::of(rng.gen_range(-0.8..0.8));
                m = m.mul(&shear);
            }
        }
    }
    let mut logs: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.7..0.7)).collect();
    let mean = logs.iter().sum::<f64>() / n as f64;
    logs.iter_mut().for_each(|x| *x -= mean);
    let diag = SquareMatrix::diagonal(&logs.iter().map(|&x| R::of(x.exp())).collect::<Vec<_>>());
    m.mul(&diag)
}

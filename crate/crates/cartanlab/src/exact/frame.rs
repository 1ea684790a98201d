//! Joint eigenframes of commuting families with certified spectra.
//!
//! Commuting matrices with simple real spectra share eigenvectors. The
//! frame is seeded by inverse iteration at the certified root midpoints of
//! the first generator, then refined jointly: each pass runs one inverse
//! iteration step against the generator currently showing the worst
//! diagonalization residual, so near-degenerate pairings get resolved by
//! whichever generator separates them best.

use crate::linalg::{normalize, SquareMatrix};
use crate::scalar::Real;

use super::{ExactError, IntMatrix, RealSpectrum};

/// Joint eigenframe: columns of `q` are shared eigenvectors.
#[derive(Debug, Clone)]
pub struct JointEigenframe<R: Real> {
    pub q: SquareMatrix<R>,
    pub qinv: SquareMatrix<R>,
    /// Per-generator max-norm of `Q⁻¹MQ` minus its diagonal.
    pub residuals: Vec<R>,
    /// `pairing[g][j]` = index into generator `g`'s sorted spectrum for
    /// eigenframe column `j`.
    pub pairing: Vec<Vec<usize>>,
    /// `eigenvalues[g][j]` = eigenvalue of generator `g` on column `j`.
    pub eigenvalues: Vec<Vec<R>>,
}

#[derive(Debug, Clone, Copy)]
pub struct FrameOptions {
    /// Residual demanded of the refined frame (`1e-8` suits f64).
    pub residual_tol: f64,
    pub max_refine_passes: usize,
}

impl Default for FrameOptions {
    fn default() -> Self {
        Self { residual_tol: 1e-8, max_refine_passes: 8 }
    }
}

/// Certified spectra plus one shared eigenframe for a commuting family.
pub fn real_spectrum_and_frame<R: Real>(
    generators: &[IntMatrix],
    options: FrameOptions,
) -> Result<(Vec<RealSpectrum>, JointEigenframe<R>), ExactError> {
    if generators.is_empty() {
        return Err(ExactError::EmptyFamily);
    }
    let dim = generators[0].dim();
    for g in generators {
        if g.dim() != dim {
            return Err(ExactError::DimensionMismatch { left: dim, right: g.dim() });
        }
    }
    for i in 0..generators.len() {
        for j in (i + 1)..generators.len() {
            if !generators[i].commutes_with(&generators[j])? {
                return Err(ExactError::NotCommuting { first: i, second: j });
            }
        }
    }
    let spectra: Vec<RealSpectrum> = generators
        .iter()
        .map(|g| RealSpectrum::isolate(&super::CharPoly::of_matrix(g)))
        .collect::<Result<_, _>>()?;

    let floats: Vec<SquareMatrix<R>> = generators.iter().map(|g| g.to_float()).collect();
    let mut q = SquareMatrix::<R>::zeros(dim);
    for (j, root) in spectra[0].roots.iter().enumerate() {
        let v = inverse_iteration(&floats[0], R::of(root.midpoint), 4);
        q.set_column(j, &v);
    }
    let mut frame = assemble(&floats, &spectra, q)?;
    let mut passes = 0;
    while frame.max_residual().as_f64() > options.residual_tol
        && passes < options.max_refine_passes
    {
        frame = refine_frame(&floats, &spectra, &frame)?;
        passes += 1;
    }
    if frame.max_residual().as_f64() > options.residual_tol {
        return Err(ExactError::FrameResidual {
            residual: frame.max_residual().as_f64(),
            tolerance: options.residual_tol,
        });
    }
    Ok((spectra, frame))
}

/// One extra refinement pass; exposed so callers can verify that the
/// residual does not increase under further polishing.
pub fn refine_once<R: Real>(
    generators: &[IntMatrix],
    spectra: &[RealSpectrum],
    frame: &JointEigenframe<R>,
) -> Result<JointEigenframe<R>, ExactError> {
    let floats: Vec<SquareMatrix<R>> = generators.iter().map(|g| g.to_float()).collect();
    refine_frame(&floats, spectra, frame)
}

impl<R: Real> JointEigenframe<R> {
    pub fn max_residual(&self) -> R {
        self.residuals.iter().fold(R::zero(), |acc, &r| acc.max(r))
    }

    /// Eigenvector column `j`, normalized.
    pub fn eigenvector(&self, j: usize) -> Vec<R> {
        self.q.column(j)
    }
}

fn inverse_iteration<R: Real>(m: &SquareMatrix<R>, shift: R, steps: usize) -> Vec<R> {
    let d = m.dim();
    // Exactly singular shifts are what inverse iteration wants; back off by
    // a few ulps if the LU factorization refuses.
    let mut shifted = m.clone();
    for i in 0..d {
        shifted[(i, i)] -= shift;
    }
    let mut v: Vec<R> = (0..d).map(|i| R::of(1.0 + 0.01 * i as f64)).collect();
    normalize(&mut v);
    for _ in 0..steps {
        let solved = match shifted.solve(&v) {
            Ok(x) => x,
            Err(_) => {
                let mut nudged = m.clone();
                let eps = shift.abs().max(R::one()) * R::of(1e-12);
                for i in 0..d {
                    nudged[(i, i)] -= shift + eps;
                }
                match nudged.solve(&v) {
                    Ok(x) => x,
                    Err(_) => break,
                }
            }
        };
        v = solved;
        normalize(&mut v);
    }
    canonical_sign(&mut v);
    v
}

fn canonical_sign<R: Real>(v: &mut [R]) {
    if let Some(&lead) = v.iter().find(|x| x.abs() > R::of(1e-14)) {
        if lead < R::zero() {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Eigenvalue of `m` on direction `v`, read off the dominant component.
fn eigenvalue_on<R: Real>(m: &SquareMatrix<R>, v: &[R]) -> R {
    let mv = m.mul_vec(v);
    let mut idx = 0;
    let mut best = R::zero();
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    mv[idx] / v[idx]
}

fn assemble<R: Real>(
    floats: &[SquareMatrix<R>],
    spectra: &[RealSpectrum],
    q: SquareMatrix<R>,
) -> Result<JointEigenframe<R>, ExactError> {
    let dim = q.dim();
    let qinv = q.inverse().map_err(|_| ExactError::FrameSingular)?;
    let mut pairing = Vec::with_capacity(floats.len());
    let mut eigenvalues: Vec<Vec<R>> = Vec::with_capacity(floats.len());
    for (g, m) in floats.iter().enumerate() {
        let mut pairs = Vec::with_capacity(dim);
        for j in 0..dim {
            let v = q.column(j);
            let ev = eigenvalue_on(m, &v);
            pairs.push(spectra[g].nearest_root(ev.as_f64()));
        }
        let mut seen = vec![false; dim];
        for &p in &pairs {
            if seen[p] {
                return Err(ExactError::PairingAmbiguous { generator: g });
            }
            seen[p] = true;
        }
        eigenvalues
            .push(pairs.iter().map(|&p| R::of(spectra[g].roots[p].midpoint)).collect());
        pairing.push(pairs);
    }
    let mut residuals = Vec::with_capacity(floats.len());
    for (g, m) in floats.iter().enumerate() {
        let diagonalized = qinv.mul(m).mul(&q);
        let mut worst = R::zero();
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { eigenvalues[g][i] } else { R::zero() };
                worst = worst.max((diagonalized[(i, j)] - expected).abs());
            }
        }
        residuals.push(worst);
    }
    Ok(JointEigenframe { q, qinv, residuals, pairing, eigenvalues })
}

fn refine_frame<R: Real>(
    floats: &[SquareMatrix<R>],
    spectra: &[RealSpectrum],
    frame: &JointEigenframe<R>,
) -> Result<JointEigenframe<R>, ExactError> {
    // Iterate against the generator with the worst residual; its spectrum
    // is the one still mixing the columns.
    let worst = frame
        .residuals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite residuals"))
        .map(|(g, _)| g)
        .unwrap_or(0);
    let mut q = frame.q.clone();
    for j in 0..q.dim() {
        let shift = frame.eigenvalues[worst][j];
        let mut v = q.column(j);
        let mut shifted = floats[worst].clone();
        for i in 0..shifted.dim() {
            shifted[(i, i)] -= shift;
        }
        if let Ok(next) = shifted.solve(&v) {
            v = next;
            normalize(&mut v);
            canonical_sign(&mut v);
            q.set_column(j, &v);
        }
    }
    let refined = assemble(floats, spectra, q)?;
    // Polishing at the float noise floor can jitter; keep the better frame.
    if refined.max_residual() <= frame.max_residual() {
        Ok(refined)
    } else {
        Ok(frame.clone())
    }
}

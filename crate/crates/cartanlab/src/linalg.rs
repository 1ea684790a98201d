//! Small dense matrices and the factorizations the lab actually needs.
//!
//! Everything here is sized for d ≤ 8: row-major `Vec` storage, partial-pivot
//! LU for solves and inverses, modified Gram–Schmidt QR with a positive
//! diagonal, and a cyclic Jacobi eigensolver for symmetric matrices (the
//! engine behind the singular-value decomposition used by KAK). No
//! allocation tricks, no blocking — clarity wins at this size.

use crate::scalar::Real;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular to working precision (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("QR breakdown: column {col} has zero norm")]
    QrBreakdown { col: usize },
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<R: Real> {
    dim: usize,
    data: Vec<R>,
}

impl<R: Real> SquareMatrix<R> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![R::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<R>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self { dim, data: rows.iter().flatten().copied().collect() }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(entries: &[R]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[R]) {
        for i in 0..self.dim {
            self[(i, j)] = col[i];
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product needs equal dimensions");
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self[(i, k)];
                if a == R::zero() {
                    continue;
                }
                for j in 0..self.dim {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, c: R) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] * c)
    }

    /// Entrywise max-norm.
    pub fn max_norm(&self) -> R {
        self.data.iter().fold(R::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> R {
        self.data.iter().map(|&x| x * x).sum::<R>().sqrt()
    }

    /// Frobenius inner product ⟨self, other⟩.
    pub fn frobenius_dot(&self, other: &Self) -> R {
        self.data.iter().zip(&other.data).map(|(&a, &b)| a * b).sum()
    }

    /// Matrix commutator `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> R {
        match Lu::factor(self) {
            Ok(lu) => lu.det(),
            Err(_) => R::zero(),
        }
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let lu = Lu::factor(self)?;
        let mut inv = Self::zeros(self.dim);
        for j in 0..self.dim {
            let mut e = vec![R::zero(); self.dim];
            e[j] = R::one();
            let col = lu.solve(&e);
            inv.set_column(j, &col);
        }
        Ok(inv)
    }

    pub fn solve(&self, rhs: &[R]) -> Result<Vec<R>, LinalgError> {
        Ok(Lu::factor(self)?.solve(rhs))
    }

    /// Operator 2-norm, estimated by power iteration on `AᵀA`.
    pub fn operator_norm(&self) -> R {
        let ata = self.transpose().mul(self);
        let mut v = vec![R::one(); self.dim];
        normalize(&mut v);
        let mut sigma2 = R::zero();
        for _ in 0..100 {
            let w = ata.mul_vec(&v);
            let n = norm(&w);
            if n == R::zero() {
                return R::zero();
            }
            v = w;
            normalize(&mut v);
            let next = dot(&v, &ata.mul_vec(&v));
            if (next - sigma2).abs() <= R::of(1e-14) * next.abs() {
                sigma2 = next;
                break;
            }
            sigma2 = next;
        }
        sigma2.max(R::zero()).sqrt()
    }

    /// QR factorization by modified Gram–Schmidt; `R` has non-negative diagonal.
    pub fn qr(&self) -> Result<(Self, Self), LinalgError> {
        let d = self.dim;
        let mut q = Self::zeros(d);
        let mut r = Self::zeros(d);
        let mut cols: Vec<Vec<R>> = (0..d).map(|j| self.column(j)).collect();
        for j in 0..d {
            for i in 0..j {
                let qi = q.column(i);
                let proj = dot(&qi, &cols[j]);
                r[(i, j)] = proj;
                for k in 0..d {
                    cols[j][k] = cols[j][k] - proj * qi[k];
                }
            }
            let nrm = norm(&cols[j]);
            if nrm == R::zero() {
                return Err(LinalgError::QrBreakdown { col: j });
            }
            r[(j, j)] = nrm;
            for k in 0..d {
                cols[j][k] = cols[j][k] / nrm;
            }
            q.set_column(j, &cols[j]);
        }
        Ok((q, r))
    }

    /// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
    ///
    /// Returns `(eigenvalues, V)` with `self = V diag(eigenvalues) Vᵀ`,
    /// eigenvalues sorted descending and `V` orthogonal.
    pub fn symmetric_eigen(&self) -> (Vec<R>, Self) {
        let d = self.dim;
        let mut a = self.clone();
        let mut v = Self::identity(d);
        let tol = R::of(1e-30);
        for _sweep in 0..60 {
            let mut off = R::zero();
            for p in 0..d {
                for q in (p + 1)..d {
                    off += a[(p, q)] * a[(p, q)];
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = a[(p, q)];
                    if apq.abs() <= R::of(1e-300) {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (R::of(2.0) * apq);
                    let t = {
                        let s = if theta >= R::zero() { R::one() } else { -R::one() };
                        s / (theta.abs() + (theta * theta + R::one()).sqrt())
                    };
                    let c = R::one() / (t * t + R::one()).sqrt();
                    let s = t * c;
                    for k in 0..d {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..d {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..d {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).expect("finite eigenvalues"));
        let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
        let mut vs = Self::zeros(d);
        for (newj, &oldj) in order.iter().enumerate() {
            vs.set_column(newj, &v.column(oldj));
        }
        (eigenvalues, vs)
    }
}

impl<R: Real> std::ops::Index<(usize, usize)> for SquareMatrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.dim + j]
    }
}

impl<R: Real> std::ops::IndexMut<(usize, usize)> for SquareMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.dim + j]
    }
}

/// LU factorization with partial pivoting.
struct Lu<R: Real> {
    dim: usize,
    lu: SquareMatrix<R>,
    perm: Vec<usize>,
    sign: R,
}

impl<R: Real> Lu<R> {
    fn factor(m: &SquareMatrix<R>) -> Result<Self, LinalgError> {
        let d = m.dim;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut sign = R::one();
        for k in 0..d {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in (k + 1)..d {
                if lu[(i, k)].abs() > best {
                    best = lu[(i, k)].abs();
                    p = i;
                }
            }
            if best == R::zero() {
                return Err(LinalgError::Singular { pivot: 0.0 });
            }
            if p != k {
                for j in 0..d {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..d {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in (k + 1)..d {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Ok(Self { dim: d, lu, perm, sign })
    }

    fn det(&self) -> R {
        let mut det = self.sign;
        for i in 0..self.dim {
            det = det * self.lu[(i, i)];
        }
        det
    }

    fn solve(&self, rhs: &[R]) -> Vec<R> {
        let d = self.dim;
        let mut y = vec![R::zero(); d];
        for i in 0..d {
            let mut acc = rhs[self.perm[i]];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..d).rev() {
            let mut acc = y[i];
            for j in (i + 1)..d {
                acc = acc - self.lu[(i, j)] * y[j];
            }
            y[i] = acc / self.lu[(i, i)];
        }
        y
    }
}

pub fn dot<R: Real>(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm<R: Real>(v: &[R]) -> R {
    dot(v, v).sqrt()
}

pub fn normalize<R: Real>(v: &mut [R]) {
    let n = norm(v);
    if n > R::zero() {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SquareMatrix<f64> {
        SquareMatrix::from_rows(&[vec![3.0, 2.0, 1.0], vec![2.0, 2.0, 1.0], vec![1.0, 1.0, 1.0]])
    }

    #[test]
    fn inverse_roundtrip() {
        let m = sample();
        let inv = m.inverse().unwrap();
        let residual = m.mul(&inv).sub(&SquareMatrix::identity(3)).max_norm();
        assert!(residual < 1e-12, "residual {residual}");
    }

    #[test]
    fn det_of_unimodular_sample_is_one() {
        assert!((sample().det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qr_reconstructs_with_positive_diagonal() {
        let m = sample();
        let (q, r) = m.qr().unwrap();
        let residual = q.mul(&r).sub(&m).max_norm();
        assert!(residual < 1e-12);
        for i in 0..3 {
            assert!(r[(i, i)] > 0.0);
        }
        let qtq = q.transpose().mul(&q).sub(&SquareMatrix::identity(3)).max_norm();
        assert!(qtq < 1e-12);
    }

    #[test]
    fn jacobi_recovers_symmetric_spectrum() {
        let m: SquareMatrix<f64> = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let (vals, v) = m.symmetric_eigen();
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        let recon = v
            .mul(&SquareMatrix::diagonal(&vals))
            .mul(&v.transpose())
            .sub(&m)
            .max_norm();
        assert!(recon < 1e-12);
    }

    #[test]
    fn generic_kernels_run_at_f32() {
        let m: SquareMatrix<f32> = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).sub(&SquareMatrix::identity(2)).max_norm() < 1e-5);
    }

    #[test]
    fn operator_norm_of_rotation_is_one() {
        let t = std::f64::consts::FRAC_PI_4;
        let rot = SquareMatrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]);
        assert!((rot.operator_norm() - 1.0).abs() < 1e-10);
    }
}

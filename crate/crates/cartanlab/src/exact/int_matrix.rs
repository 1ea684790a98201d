//! Exact square integer matrices: the generators of toral automorphisms.
//!
//! Entries are arbitrary-precision integers, so powers like `A^20` and the
//! adjugate inverses of unimodular matrices stay exact. JSON ingestion uses
//! the schema `{"dim": d, "entries": [[..], ..]}`; entries that fit in an
//! `i64` round-trip as JSON numbers, larger ones as decimal strings.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ExactError;
use crate::linalg::SquareMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self {
            dim,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self { dim, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.dim)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.dim != other.dim {
            return Err(ExactError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entry(k, j);
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Exact equality test of `self·other` and `other·self`.
    pub fn commutes_with(&self, other: &Self) -> Result<bool, ExactError> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let d = self.dim;
        if d == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> =
            (0..d).map(|i| (0..d).map(|j| self.entry(i, j).clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d - 1 {
            if m[k][k].is_zero() {
                // Pivot search keeps the elimination fraction-free.
                match (k + 1..d).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = &num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[d - 1][d - 1].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// First minor `M_{ij}`: determinant of the matrix with row `i` and
    /// column `j` removed.
    fn minor(&self, i: usize, j: usize) -> BigInt {
        let d = self.dim;
        let rows: Vec<Vec<BigInt>> = (0..d)
            .filter(|&r| r != i)
            .map(|r| (0..d).filter(|&c| c != j).map(|c| self.entry(r, c).clone()).collect())
            .collect();
        IntMatrix::from_bigint_rows(rows).det()
    }

    /// Adjugate, `adj(M)·M = det(M)·Id` exactly.
    pub fn adjugate(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let cof = self.minor(j, i);
                entries[i * d + j] = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        Self { dim: d, entries }
    }

    /// Exact inverse; requires `|det| = 1`.
    pub fn unimodular_inverse(&self) -> Result<Self, ExactError> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(ExactError::NotUnimodular { det: det.to_string() });
        }
        let adj = self.adjugate();
        if det.is_one() {
            Ok(adj)
        } else {
            Ok(Self { dim: adj.dim, entries: adj.entries.into_iter().map(|x| -x).collect() })
        }
    }

    /// Exact integer power; negative exponents go through the adjugate
    /// inverse and therefore require unimodularity.
    pub fn pow(&self, exponent: i64) -> Result<Self, ExactError> {
        let base = if exponent < 0 { self.unimodular_inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.dim);
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.entry(i, i).clone()).sum()
    }

    /// Float image of the matrix.
    pub fn to_float<R: Real>(&self) -> SquareMatrix<R> {
        SquareMatrix::from_fn(self.dim, |i, j| {
            R::of(self.entry(i, j).to_f64().expect("entry fits in f64"))
        })
    }

    pub fn mul_rational_vec(
        &self,
        v: &[num_rational::BigRational],
    ) -> Vec<num_rational::BigRational> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| num_rational::BigRational::from(self.entry(i, j).clone()) * &v[j])
                    .sum()
            })
            .collect()
    }
}

/// JSON wire form: integers that fit in `i64` stay numbers, the rest are
/// decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct WireMatrix {
    dim: usize,
    entries: Vec<Vec<WireInt>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let e = self.entry(i, j);
                        match e.to_i64() {
                            Some(small) => WireInt::Small(small),
                            None => WireInt::Big(e.to_string()),
                        }
                    })
                    .collect()
            })
            .collect();
        WireMatrix { dim: self.dim, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = WireMatrix::deserialize(deserializer)?;
        if wire.entries.len() != wire.dim || wire.entries.iter().any(|r| r.len() != wire.dim) {
            return Err(D::Error::custom(format!(
                "entries must be a {dim}x{dim} array matching field `dim`",
                dim = wire.dim
            )));
        }
        let mut rows = Vec::with_capacity(wire.dim);
        for row in wire.entries {
            let mut out = Vec::with_capacity(wire.dim);
            for e in row {
                out.push(match e {
                    WireInt::Small(x) => BigInt::from(x),
                    WireInt::Big(s) => s
                        .parse::<BigInt>()
                        .map_err(|_| D::Error::custom(format!("invalid integer entry `{s}`")))?,
                });
            }
            rows.push(out);
        }
        Ok(IntMatrix::from_bigint_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{t3_first, t3_second};

    #[test]
    fn product_of_commuting_pair() {
        let expected = IntMatrix::from_rows(&[vec![9, 7, 4], vec![7, 6, 3], vec![4, 3, 2]]);
        assert_eq!(t3_first().mul(&t3_second()).unwrap(), expected);
    }

    #[test]
    fn elementary_shears_do_not_commute() {
        let e12 = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let e21 = IntMatrix::from_rows(&[vec![1, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert!(!e12.commutes_with(&e21).unwrap());
        assert!(e12.commutes_with(&IntMatrix::identity(3)).unwrap());
    }

    #[test]
    fn adjugate_inverse_is_exact() {
        let a = t3_first();
        let inv = a.unimodular_inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(a.pow(-1).unwrap(), inv);
        assert!(a.pow(3).unwrap().mul(&a.pow(-3).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn determinants_are_exact() {
        assert_eq!(t3_first().det(), BigInt::from(1));
        assert_eq!(t3_second().det(), BigInt::from(1));
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.det(), BigInt::from(0));
    }

    #[test]
    fn json_roundtrip_keeps_big_entries() {
        let big = t3_first().pow(30).unwrap();
        let json = serde_json::to_string(&big).unwrap();
        let back: IntMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(big, back);
    }

    #[test]
    fn json_rejects_ragged_entries() {
        let err = serde_json::from_str::<IntMatrix>(r#"{"dim":2,"entries":[[1,0],[1]]}"#);
        assert!(err.is_err());
    }
}

//! Exact monic characteristic polynomials and rational irreducibility.
//!
//! The characteristic polynomial is `det(λI − M)`, computed by the
//! Faddeev–LeVerrier recurrence; every division in the recurrence is exact
//! over the integers. Irreducibility over ℚ is decided exactly for degrees
//! up to 4: by Gauss's lemma a monic integer polynomial factors over ℚ iff
//! it factors into monic integer polynomials, so rational-root and quadratic
//! splitting tests suffice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactError, IntMatrix};

/// Monic integer polynomial, `coeffs[k]` multiplying `λ^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(coeffs.last().map(|c| c.is_one()).unwrap_or(false), "polynomial must be monic");
        Self { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// `det(λI − M)`, exact.
    ///
    /// Faddeev–LeVerrier: with `N_1 = M`, `c_{d-1} = -tr(M)` and
    /// `N_{k+1} = M (N_k + c_{d-k} I)`, each `c_{d-k-1} = -tr(N_{k+1})/(k+1)`
    /// is an integer, so the checked division never truncates.
    pub fn of_matrix(m: &IntMatrix) -> Self {
        let d = m.dim();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut n = m.clone();
        for k in 1..=d {
            let c = -n.trace() / BigInt::from(k);
            coeffs[d - k] = c.clone();
            if k < d {
                let shifted = shift_diagonal(&n, &c);
                n = m.mul(&shifted).expect("dimensions agree");
            }
        }
        Self { coeffs }
    }

    /// Exact evaluation at an integer matrix (Cayley–Hamilton checks).
    pub fn evaluate_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let d = m.dim();
        let mut acc = scale_identity(d, &self.coeffs[self.degree()]);
        for k in (0..self.degree()).rev() {
            acc = m.mul(&acc).expect("dimensions agree");
            acc = add_scaled_identity(&acc, &self.coeffs[k]);
        }
        acc
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Sign of `p(a/b)` using only integer arithmetic.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let a = x.numer();
        let b = x.denom();
        let d = self.degree();
        let mut acc = BigInt::zero();
        // Σ c_k a^k b^{d−k} by Horner in a, then one power of b per level.
        for k in (0..=d).rev() {
            acc = acc * a + &self.coeffs[k] * b.pow((d - k) as u32);
        }
        match acc.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        }
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        (1..self.coeffs.len()).map(|k| &self.coeffs[k] * BigInt::from(k)).collect()
    }

    /// Cauchy root bound: every real root lies in `(-B, B)` for
    /// `B = 1 + max_k |c_k|`.
    pub fn cauchy_bound(&self) -> BigRational {
        let max = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        BigRational::from(max + BigInt::one())
    }

    /// Evaluate at an `f64`, for Newton polish of certified midpoints.
    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| {
            acc * x + num_traits::ToPrimitive::to_f64(c).expect("coefficient fits in f64")
        })
    }

    pub fn derivative_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for k in (1..self.coeffs.len()).rev() {
            acc = acc * x
                + num_traits::ToPrimitive::to_f64(&self.coeffs[k]).expect("fits in f64")
                    * k as f64;
        }
        acc
    }

    /// Irreducibility over ℚ, supported through degree 4.
    pub fn is_irreducible_over_q(&self) -> Result<bool, ExactError> {
        let d = self.degree();
        match d {
            0 => Ok(false),
            1 => Ok(true),
            2 | 3 => Ok(!self.has_integer_root()),
            4 => Ok(!self.has_integer_root() && !self.has_monic_quadratic_factor()),
            _ => Err(ExactError::UnsupportedDegree { degree: d }),
        }
    }

    /// Monic integer polynomials only have integer rational roots, each
    /// dividing the constant term.
    fn has_integer_root(&self) -> bool {
        if self.constant_term().is_zero() {
            return true;
        }
        divisors(&self.constant_term().abs())
            .iter()
            .any(|r| self.sign_at(&BigRational::from(r.clone())) == 0
                || self.sign_at(&BigRational::from(-r.clone())) == 0)
    }

    /// Quartic splitting test: `(x² + ax + b)(x² + cx + d)` with integer
    /// coefficients, enumerated over divisor pairs `b·d = c₀`.
    fn has_monic_quadratic_factor(&self) -> bool {
        let c0 = &self.coeffs[0];
        let c1 = &self.coeffs[1];
        let c2 = &self.coeffs[2];
        let c3 = &self.coeffs[3];
        debug_assert!(!c0.is_zero(), "zero constant term is caught by the root test");
        let mut candidates = Vec::new();
        for b in divisors(&c0.abs()) {
            for sb in [b.clone(), -b] {
                let d = c0 / &sb;
                candidates.push((sb, d));
            }
        }
        for (b, d) in candidates {
            // a + c = c3 and ac = c2 − b − d, so a, c solve
            // z² − c3 z + (c2 − b − d) = 0.
            let prod = c2 - &b - &d;
            let disc = c3 * c3 - BigInt::from(4) * &prod;
            if disc.is_negative() {
                continue;
            }
            let root = disc.sqrt();
            if &root * &root != disc {
                continue;
            }
            for s in [root.clone(), -root] {
                let two = BigInt::from(2);
                let num = c3 + &s;
                if (&num).mod_floor(&two) != BigInt::zero() {
                    continue;
                }
                let a = num / &two;
                let c = c3 - &a;
                if &a * &d + &b * &c == *c1 {
                    return true;
                }
            }
        }
        false
    }
}

impl std::fmt::Display for CharPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn shift_diagonal(m: &IntMatrix, c: &BigInt) -> IntMatrix {
    let d = m.dim();
    IntMatrix::from_bigint_rows(
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            m.entry(i, j) + c
                        } else {
                            m.entry(i, j).clone()
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

fn scale_identity(dim: usize, c: &BigInt) -> IntMatrix {
    IntMatrix::from_bigint_rows(
        (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { c.clone() } else { BigInt::zero() })
                    .collect()
            })
            .collect(),
    )
}

fn add_scaled_identity(m: &IntMatrix, c: &BigInt) -> IntMatrix {
    shift_diagonal(m, c)
}

/// Positive divisors of `n > 0`.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= *n {
        if n.mod_floor(&k).is_zero() {
            out.push(k.clone());
            let q = n / &k;
            if q != k {
                out.push(q);
            }
        }
        k += BigInt::one();
    }
    out.sort();
    out
}

//! Exact group commutators of root subgroups.
//!
//! The commutator `u^{i,j}(s) u^{k,l}(t) u^{i,j}(−s) u^{k,l}(−t)` is
//! computed over exact rationals, then classified: either the subgroups
//! commute, or the commutator lands in a third root subgroup with
//! bilinear parameter (`[U^{i,j}, U^{j,l}] ⊆ U^{i,l}`), or the pair is
//! opposite (`l = i` and `k = j`) and the commutator leaves the unipotent
//! picture toward the Cartan direction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{RootDatum, RootLabel, SlError};

/// Outcome of the commutator classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BracketClass {
    /// Commutator is the identity.
    Commute,
    /// Commutator is `u^{pair}(param)` for the given parameters.
    Root {
        pair: RootLabel,
        #[serde(serialize_with = "rational_as_string")]
        param: BigRational,
    },
    /// Opposite roots: the commutator has nontrivial diagonal part.
    CartanDirection,
}

fn rational_as_string<S: serde::Serializer>(
    x: &BigRational,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&x.to_string())
}

type RatMatrix = Vec<Vec<BigRational>>;

fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

fn unipotent(n: usize, (i, j): RootLabel, v: &BigRational) -> RatMatrix {
    let mut m = identity(n);
    m[i - 1][j - 1] = v.clone();
    m
}

fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                let add = &a[i][k] * &b[k][j];
                out[i][j] = &out[i][j] + add;
            }
        }
    }
    out
}

/// Exact commutator `u^{r1}(s) u^{r2}(t) u^{r1}(−s) u^{r2}(−t)`.
pub fn group_commutator_rational(
    n: usize,
    r1: RootLabel,
    s: &BigRational,
    r2: RootLabel,
    t: &BigRational,
) -> RatMatrix {
    let u1 = unipotent(n, r1, s);
    let u2 = unipotent(n, r2, t);
    let u1_inv = unipotent(n, r1, &-s.clone());
    let u2_inv = unipotent(n, r2, &-t.clone());
    mul(&mul(&u1, &u2), &mul(&u1_inv, &u2_inv))
}

fn classify(n: usize, m: &RatMatrix) -> BracketClass {
    let id = identity(n);
    if *m == id {
        return BracketClass::Commute;
    }
    for i in 0..n {
        if m[i][i] != BigRational::one() {
            return BracketClass::CartanDirection;
        }
    }
    let mut off: Option<(RootLabel, BigRational)> = None;
    for i in 0..n {
        for j in 0..n {
            if i != j && !m[i][j].is_zero() {
                if off.is_some() {
                    return BracketClass::CartanDirection;
                }
                off = Some(((i + 1, j + 1), m[i][j].clone()));
            }
        }
    }
    match off {
        Some((pair, param)) => BracketClass::Root { pair, param },
        None => BracketClass::Commute,
    }
}

/// Classify the commutator of two root subgroups by evaluating the group
/// commutator exactly at generic rational parameters.
pub fn root_bracket(datum: &RootDatum, r1: RootLabel, r2: RootLabel) -> Result<BracketClass, SlError> {
    datum.check_root(r1)?;
    datum.check_root(r2)?;
    let s = BigRational::new(BigInt::from(5), BigInt::from(7));
    let t = BigRational::new(BigInt::from(3), BigInt::from(2));
    let m = group_commutator_rational(datum.n, r1, &s, r2, &t);
    Ok(classify(datum.n, &m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn chained_roots_bracket_into_the_composite() {
        let datum = RootDatum::new(3);
        match root_bracket(&datum, (1, 2), (2, 3)).unwrap() {
            BracketClass::Root { pair, param } => {
                assert_eq!(pair, (1, 3));
                assert_eq!(param, rat(5, 7) * rat(3, 2));
            }
            other => panic!("expected a root, got {other:?}"),
        }
    }

    #[test]
    fn bilinearity_of_the_composite_parameter() {
        // Exact over a grid of rational parameter pairs.
        for (sp, sq) in [(1i64, 2i64), (3, 5), (-4, 7), (9, 2)] {
            for (tp, tq) in [(2i64, 3i64), (-1, 4), (5, 6), (7, 1)] {
                let s = rat(sp, sq);
                let t = rat(tp, tq);
                let m = group_commutator_rational(3, (1, 2), &s, (2, 3), &t);
                match classify(3, &m) {
                    BracketClass::Root { pair, param } => {
                        assert_eq!(pair, (1, 3));
                        assert_eq!(param, &s * &t);
                    }
                    other => panic!("expected root class, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn disjoint_and_equal_roots_commute() {
        let datum = RootDatum::new(3);
        assert_eq!(root_bracket(&datum, (1, 2), (3, 2)).unwrap(), BracketClass::Commute);
        assert_eq!(root_bracket(&datum, (1, 2), (1, 2)).unwrap(), BracketClass::Commute);
        assert_eq!(root_bracket(&datum, (1, 2), (1, 3)).unwrap(), BracketClass::Commute);
    }

    #[test]
    fn opposite_roots_leave_the_unipotent_picture() {
        let datum = RootDatum::new(3);
        assert_eq!(
            root_bracket(&datum, (1, 2), (2, 1)).unwrap(),
            BracketClass::CartanDirection
        );
    }

    #[test]
    fn reversed_chain_lands_in_the_transposed_composite() {
        // (i,j) then (k,i): the commutator lies in U^{k,j}.
        let datum = RootDatum::new(3);
        match root_bracket(&datum, (1, 2), (3, 1)).unwrap() {
            BracketClass::Root { pair, param } => {
                assert_eq!(pair, (3, 2));
                assert_eq!(param, -(rat(5, 7) * rat(3, 2)));
            }
            other => panic!("expected a root, got {other:?}"),
        }
    }
}

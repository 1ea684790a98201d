//! Built-in sample systems used by the CLI, the docs, and the test suites.

use crate::exact::IntMatrix;

/// First generator of the standard commuting pair on T³.
pub fn t3_first() -> IntMatrix {
    IntMatrix::from_rows(&[vec![3, 2, 1], vec![2, 2, 1], vec![1, 1, 1]])
}

/// Second generator of the standard commuting pair on T³.
pub fn t3_second() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, 1, 1], vec![1, 2, 0], vec![1, 0, 1]])
}

/// The commuting pair generating the rank-2 action on T³.
pub fn t3_pair() -> Vec<IntMatrix> {
    vec![t3_first(), t3_second()]
}

/// The 2×2 hyperbolic generator `[[2,1],[1,1]]`.
pub fn cat_map() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]])
}

/// Hyperbolic partner for the product construction on T⁴: `[[2,3],[3,5]]`.
pub fn t4_product_second() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, 3], vec![3, 5]])
}

/// The product pair `(M × Id, Id × N)` acting on T⁴. Its Lyapunov data
/// contains two negatively proportional pairs, which is exactly what the
/// sign-perturbation machinery must reject.
pub fn t4_product_pair() -> Vec<IntMatrix> {
    let block = |upper_left: &IntMatrix, lower_right: &IntMatrix| {
        IntMatrix::from_bigint_rows(
            (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            if i < 2 && j < 2 {
                                upper_left.entry(i, j).clone()
                            } else if i >= 2 && j >= 2 {
                                lower_right.entry(i - 2, j - 2).clone()
                            } else {
                                num_bigint::BigInt::from(0)
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    };
    let id = IntMatrix::identity(2);
    vec![block(&cat_map(), &id), block(&id, &t4_product_second())]
}

/// A rank-3 family on T⁴ in general position.
///
/// The three generators are multiplication operators by the units
/// `3+2√2`, `7+4√3`, and `5+2√6` on the basis `(1, √2, √3, √6)` of the
/// real quartic field they generate, combined pairwise so each product has
/// four distinct positive eigenvalues and an irreducible quartic
/// characteristic polynomial.
pub fn t4_general_position() -> Vec<IntMatrix> {
    let m1 = IntMatrix::from_rows(&[
        vec![3, 4, 0, 0],
        vec![2, 3, 0, 0],
        vec![0, 0, 3, 4],
        vec![0, 0, 2, 3],
    ]);
    let m2 = IntMatrix::from_rows(&[
        vec![7, 0, 12, 0],
        vec![0, 7, 0, 12],
        vec![4, 0, 7, 0],
        vec![0, 4, 0, 7],
    ]);
    let m3 = IntMatrix::from_rows(&[
        vec![5, 0, 0, 12],
        vec![0, 5, 6, 0],
        vec![0, 4, 5, 0],
        vec![2, 0, 0, 5],
    ]);
    vec![
        m1.mul(&m3).expect("same dimension"),
        m2.mul(&m3).expect("same dimension"),
        m1.mul(&m2).expect("same dimension"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t4_general_position_generators_commute_and_are_unimodular() {
        let gens = t4_general_position();
        for g in &gens {
            assert!(g.is_unimodular());
        }
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                assert!(gens[i].commutes_with(&gens[j]).unwrap());
            }
        }
    }
}

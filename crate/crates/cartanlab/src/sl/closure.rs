//! Lie-subalgebra closure inside `sl(n, ℝ)`.
//!
//! Starting from root vectors (and optionally the Cartan subalgebra), the
//! closure iterates brackets and orthonormalizes against the running basis
//! until the dimension stabilizes. Brackets of elementary matrices are
//! exact; the rank tolerance only absorbs accumulated float noise.

use crate::linalg::SquareMatrix;
use crate::scalar::Real;

use super::{RootDatum, RootLabel, SlError};

/// Rank tolerance for accepting a new independent direction.
const RANK_TOL: f64 = 1e-8;

/// Orthonormal basis (Frobenius inner product) of the generated subalgebra.
#[derive(Debug, Clone)]
pub struct LieSubalgebraBasis<R: Real> {
    pub basis: Vec<SquareMatrix<R>>,
    pub dim: usize,
}

/// Seed of a closure: root labels, optionally the full Cartan subalgebra.
#[derive(Debug, Clone, Default)]
pub struct ClosureSeed {
    pub roots: Vec<RootLabel>,
    pub include_cartan: bool,
}

impl ClosureSeed {
    pub fn roots(roots: &[RootLabel]) -> Self {
        Self { roots: roots.to_vec(), include_cartan: false }
    }

    pub fn roots_with_cartan(roots: &[RootLabel]) -> Self {
        Self { roots: roots.to_vec(), include_cartan: true }
    }
}

impl<R: Real> LieSubalgebraBasis<R> {
    /// Largest norm of a bracket of basis elements after projecting out the
    /// span; closed subalgebras give values at rounding level.
    pub fn bracket_closure_defect(&self) -> R {
        let mut worst = R::zero();
        for a in &self.basis {
            for b in &self.basis {
                let mut h = a.commutator(b);
                for e in &self.basis {
                    let c = h.frobenius_dot(e);
                    h = h.sub(&e.scale(c));
                }
                worst = worst.max(h.frobenius_norm());
            }
        }
        worst
    }
}

/// Iterated bracket closure of the seeded subspace.
pub fn lie_closure<R: Real>(
    datum: &RootDatum,
    seed: &ClosureSeed,
) -> Result<LieSubalgebraBasis<R>, SlError> {
    if seed.roots.is_empty() && !seed.include_cartan {
        return Err(SlError::EmptySeed);
    }
    let n = datum.n;
    let mut basis: Vec<SquareMatrix<R>> = Vec::new();
    let push = |basis: &mut Vec<SquareMatrix<R>>, candidate: SquareMatrix<R>| -> bool {
        let mut v = candidate;
        for e in basis.iter() {
            let c = v.frobenius_dot(e);
            v = v.sub(&e.scale(c));
        }
        let nrm = v.frobenius_norm();
        if nrm.as_f64() > RANK_TOL {
            basis.push(v.scale(R::one() / nrm));
            true
        } else {
            false
        }
    };

    for &(i, j) in &seed.roots {
        datum.check_root((i, j))?;
        let mut e = SquareMatrix::zeros(n);
        e[(i - 1, j - 1)] = R::one();
        push(&mut basis, e);
    }
    if seed.include_cartan {
        for i in 0..n - 1 {
            let mut h = SquareMatrix::zeros(n);
            h[(i, i)] = R::one();
            h[(i + 1, i + 1)] = -R::one();
            push(&mut basis, h);
        }
    }

    loop {
        let current = basis.len();
        let snapshot = basis.clone();
        let mut grew = false;
        for a in 0..current {
            for b in (a + 1)..current {
                let bracket = snapshot[a].commutator(&snapshot[b]);
                if push(&mut basis, bracket) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let dim = basis.len();
    Ok(LieSubalgebraBasis { basis, dim })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_root_is_one_dimensional() {
        let datum = RootDatum::new(3);
        let c = lie_closure::<f64>(&datum, &ClosureSeed::roots(&[(1, 2)])).unwrap();
        assert_eq!(c.dim, 1);
        assert!(c.bracket_closure_defect() < 1e-8);
    }

    #[test]
    fn opposite_pair_generates_an_embedded_sl2() {
        let datum = RootDatum::new(3);
        let c = lie_closure::<f64>(&datum, &ClosureSeed::roots(&[(1, 2), (2, 1)])).unwrap();
        assert_eq!(c.dim, 3);
        assert!(c.bracket_closure_defect() < 1e-8);
    }

    #[test]
    fn all_roots_generate_the_full_algebra() {
        let datum = RootDatum::new(3);
        let c = lie_closure::<f64>(&datum, &ClosureSeed::roots(&datum.roots())).unwrap();
        assert_eq!(c.dim, 8);
        assert!(c.bracket_closure_defect() < 1e-8);

        let datum4 = RootDatum::new(4);
        let c4 = lie_closure::<f64>(&datum4, &ClosureSeed::roots(&datum4.roots())).unwrap();
        assert_eq!(c4.dim, 15);
    }

    #[test]
    fn upper_and_lower_triangulars_generate_everything() {
        // Unstable plus stable horospherical subalgebras of a generic
        // element span the whole algebra under brackets.
        let datum = RootDatum::new(3);
        let uppers: Vec<_> = datum.roots().into_iter().filter(|&(i, j)| i < j).collect();
        let lowers: Vec<_> = datum.roots().into_iter().filter(|&(i, j)| i > j).collect();
        let seed: Vec<_> = uppers.into_iter().chain(lowers).collect();
        let c = lie_closure::<f64>(&datum, &ClosureSeed::roots(&seed)).unwrap();
        assert_eq!(c.dim, 8);
    }

    #[test]
    fn closure_is_monotone_in_the_seed() {
        let datum = RootDatum::new(3);
        let seeds: [&[super::RootLabel]; 4] = [
            &[(1, 2)],
            &[(1, 2), (2, 3)],
            &[(1, 2), (2, 3), (2, 1)],
            &[(1, 2), (2, 3), (2, 1), (3, 2)],
        ];
        let mut last = 0;
        for s in seeds {
            let c = lie_closure::<f64>(&datum, &ClosureSeed::roots(s)).unwrap();
            assert!(c.dim >= last, "dim dropped from {last} to {}", c.dim);
            last = c.dim;
        }
        assert_eq!(last, 8);
    }

    #[test]
    fn parabolic_block_has_codimension_n_minus_one() {
        // Stabilizer of a line: all roots except those leaving the last row.
        let datum = RootDatum::new(3);
        let seed: Vec<_> = datum
            .roots()
            .into_iter()
            .filter(|&(i, j)| !(i == datum.n && j < datum.n))
            .collect();
        let c = lie_closure::<f64>(&datum, &ClosureSeed::roots_with_cartan(&seed)).unwrap();
        assert_eq!(c.dim, datum.n * datum.n - datum.n);
        assert_eq!((datum.n * datum.n - 1) - c.dim, datum.n - 1);
    }

    #[test]
    fn empty_seed_is_rejected() {
        let datum = RootDatum::new(3);
        assert!(lie_closure::<f64>(&datum, &ClosureSeed::default()).is_err());
    }
}

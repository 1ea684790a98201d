//! Lyapunov exponent functionals as dual vectors on the acting group.
//!
//! A rank-k action with a joint eigenframe produces one linear functional
//! per eigendirection: its coefficients are the logs of the paired
//! eigenvalues, in nats per unit step of each generator. On top of the
//! family sit the selection tricks the rigidity arguments run on: kernel
//! elements, separating elements, the sign-preserving perturbation off a
//! kernel, coarse proportionality classes, and stable/unstable splittings.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{JointEigenframe, RealSpectrum};
use crate::linalg::norm;
use crate::scalar::Real;

/// Shared relative tolerance for proportionality of directions.
pub const PROPORTIONALITY_TOL: f64 = 1e-9;
/// Evaluations below this (relative) count as "on the kernel".
pub const KERNEL_TOL: f64 = 1e-12;
/// Neutral-sign tolerance for splittings.
pub const NEUTRAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum FunctionalError {
    #[error("zero functional where a nonzero one is required")]
    ZeroFunctional,
    #[error("eigenvalue {value} of generator {generator} is not positive; no log-coefficient")]
    NonPositiveEigenvalue { generator: usize, value: f64 },
    #[error("functionals are proportional; no separating element exists")]
    NoSeparator,
    #[error("negatively proportional pairs obstruct the perturbation: {pairs:?}")]
    SymplecticObstruction { pairs: Vec<(usize, usize)> },
    #[error("operation requires acting rank {expected}, family has rank {actual}")]
    RankUnsupported { expected: usize, actual: usize },
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("sign-preserving perturbation search failed to certify")]
    PerturbationSearchFailed,
}

/// Linear functional on the acting group ℝᵏ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearFunctional<R: Real> {
    pub coeffs: Vec<R>,
    pub label: String,
}

impl<R: Real> LinearFunctional<R> {
    pub fn new(coeffs: Vec<R>, label: impl Into<String>) -> Self {
        Self { coeffs, label: label.into() }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn evaluate(&self, v: &[R]) -> R {
        self.coeffs.iter().zip(v).map(|(&c, &x)| c * x).sum()
    }

    pub fn norm(&self) -> R {
        norm(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.norm() <= R::of(1e-300)
    }

    fn unit_direction(&self) -> Option<Vec<R>> {
        let n = self.norm();
        if n <= R::of(1e-300) {
            return None;
        }
        Some(self.coeffs.iter().map(|&c| c / n).collect())
    }
}

/// Sign of one proportionality relation between two functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Proportionality {
    Positive,
    Negative,
    None,
}

/// Proportionality of two functionals under the shared relative tolerance.
pub fn proportionality<R: Real>(
    a: &LinearFunctional<R>,
    b: &LinearFunctional<R>,
) -> Proportionality {
    let (Some(u), Some(v)) = (a.unit_direction(), b.unit_direction()) else {
        return Proportionality::None;
    };
    let tol = R::of(PROPORTIONALITY_TOL);
    let near = |lhs: &[R], sign: R| {
        lhs.iter()
            .zip(&v)
            .fold(R::zero(), |acc, (&x, &y)| acc.max((x - sign * y).abs()))
            <= tol
    };
    if near(&u, R::one()) {
        Proportionality::Positive
    } else if near(&u, -R::one()) {
        Proportionality::Negative
    } else {
        Proportionality::None
    }
}

/// Family of Lyapunov functionals with multiplicities.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionalFamily<R: Real> {
    pub functionals: Vec<LinearFunctional<R>>,
    pub multiplicities: Vec<usize>,
    /// Set when every generator is unimodular, in which case the
    /// multiplicity-weighted coefficient sum must vanish.
    pub det_one: bool,
}

impl<R: Real> FunctionalFamily<R> {
    pub fn new(functionals: Vec<LinearFunctional<R>>, multiplicities: Vec<usize>, det_one: bool) -> Self {
        assert_eq!(functionals.len(), multiplicities.len());
        Self { functionals, multiplicities, det_one }
    }

    pub fn rank(&self) -> usize {
        self.functionals.first().map(|f| f.rank()).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    /// Σ_j m^j λ^j as a coefficient vector.
    pub fn weighted_coefficient_sum(&self) -> Vec<R> {
        let k = self.rank();
        let mut acc = vec![R::zero(); k];
        for (f, &m) in self.functionals.iter().zip(&self.multiplicities) {
            for (a, &c) in acc.iter_mut().zip(&f.coeffs) {
                *a += c * R::of(m as f64);
            }
        }
        acc
    }

    /// Max-norm of the weighted coefficient sum.
    pub fn zero_sum_defect(&self) -> R {
        self.weighted_coefficient_sum()
            .iter()
            .fold(R::zero(), |acc, &x| acc.max(x.abs()))
    }
}

/// Build the family of Lyapunov functionals carried by a joint eigenframe:
/// λ^j = (log χ^j_{gen₁}, …, log χ^j_{gen_k}).
pub fn functionals_from_action<R: Real>(
    frame: &JointEigenframe<R>,
    spectra: &[RealSpectrum],
    unimodular: bool,
) -> Result<FunctionalFamily<R>, FunctionalError> {
    let d = frame.q.dim();
    let k = spectra.len();
    let mut functionals = Vec::with_capacity(d);
    for j in 0..d {
        let mut coeffs = Vec::with_capacity(k);
        for g in 0..k {
            let ev = frame.eigenvalues[g][j];
            if ev <= R::zero() {
                return Err(FunctionalError::NonPositiveEigenvalue {
                    generator: g,
                    value: ev.as_f64(),
                });
            }
            coeffs.push(ev.ln());
        }
        functionals.push(LinearFunctional::new(coeffs, format!("lambda{}", j + 1)));
    }
    Ok(FunctionalFamily::new(functionals, vec![1; d], unimodular))
}

/// A nonzero unit vector in `ker λ`, rank 2 only.
pub fn kernel_element<R: Real>(f: &LinearFunctional<R>) -> Result<Vec<R>, FunctionalError> {
    if f.rank() != 2 {
        return Err(FunctionalError::RankUnsupported { expected: 2, actual: f.rank() });
    }
    if f.is_zero() {
        return Err(FunctionalError::ZeroFunctional);
    }
    let n = f.norm();
    let s0 = vec![-f.coeffs[1] / n, f.coeffs[0] / n];
    debug_assert!(f.evaluate(&s0).abs() <= R::of(KERNEL_TOL) * f.norm());
    Ok(s0)
}

/// A vector killed by `beta` on which `lambda` is strictly positive.
pub fn separating_element<R: Real>(
    beta: &LinearFunctional<R>,
    lambda: &LinearFunctional<R>,
) -> Result<Vec<R>, FunctionalError> {
    if proportionality(beta, lambda) != Proportionality::None {
        return Err(FunctionalError::NoSeparator);
    }
    let s0 = kernel_element(beta)?;
    let value = lambda.evaluate(&s0);
    if value.abs() <= R::of(KERNEL_TOL) * lambda.norm() {
        // Kernel direction annihilates lambda too: proportional after all.
        return Err(FunctionalError::NoSeparator);
    }
    Ok(if value > R::zero() { s0 } else { s0.iter().map(|&x| -x).collect() })
}

/// Certificate for the sign-preserving perturbation off `ker λ^i`.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationCertificate<R: Real> {
    /// The kernel element the search started from.
    pub base: Vec<R>,
    /// The perturbed element: λ^i < 0 here, all other signs preserved.
    pub perturbed: Vec<R>,
    /// Rotation angle that certified, radians.
    pub angle: R,
    /// Evaluations λ^j(perturbed), in family order.
    pub values: Vec<R>,
}

/// Perturb a kernel element of `λ^i` to the negative side of `λ^i` without
/// flipping the sign of any other functional.
///
/// Fails with the list of offending index pairs when some `λ^j` is
/// negatively proportional to `λ^i`: for such a pair the sign of `λ^j`
/// necessarily jumps from zero to positive, and no perturbation works.
/// Functionals positively proportional to `λ^i` ride along with it (they
/// form one coarse class) and are required to go negative with it.
pub fn pipart_perturbation<R: Real>(
    family: &FunctionalFamily<R>,
    i: usize,
) -> Result<PerturbationCertificate<R>, FunctionalError> {
    let fi = &family.functionals[i];
    if fi.is_zero() {
        return Err(FunctionalError::ZeroFunctional);
    }
    if fi.rank() != 2 {
        return Err(FunctionalError::RankUnsupported { expected: 2, actual: fi.rank() });
    }
    let negative_pairs: Vec<(usize, usize)> = family
        .functionals
        .iter()
        .enumerate()
        .filter(|(j, fj)| *j != i && proportionality(fi, fj) == Proportionality::Negative)
        .map(|(j, _)| (i, j))
        .collect();
    if !negative_pairs.is_empty() {
        return Err(FunctionalError::SymplecticObstruction { pairs: negative_pairs });
    }
    let s0 = kernel_element(fi)?;
    let base_signs: Vec<i8> = family
        .functionals
        .iter()
        .map(|fj| sign_with_tol(fj.evaluate(&s0), R::of(NEUTRAL_TOL)))
        .collect();
    let rotate = |v: &[R], theta: R| -> Vec<R> {
        let (s, c) = theta.sin_cos();
        vec![c * v[0] - s * v[1], s * v[0] + c * v[1]]
    };
    // Shrinking angular perturbations on the side where λ^i goes negative.
    let mut theta = R::of(0.5);
    for _ in 0..64 {
        for dir in [theta, -theta] {
            let s1 = rotate(&s0, dir);
            let vi = fi.evaluate(&s1);
            if vi >= R::zero() {
                continue;
            }
            let values: Vec<R> =
                family.functionals.iter().map(|fj| fj.evaluate(&s1)).collect();
            let ok = family.functionals.iter().enumerate().all(|(j, fj)| {
                if j == i {
                    return true;
                }
                let sj = sign_with_tol(values[j], R::of(NEUTRAL_TOL));
                match proportionality(fi, fj) {
                    Proportionality::Positive => sj < 0,
                    _ => sj != 0 && sj == base_signs[j],
                }
            });
            if ok {
                return Ok(PerturbationCertificate {
                    base: s0,
                    perturbed: s1,
                    angle: dir,
                    values,
                });
            }
        }
        theta = theta * R::of(0.5);
    }
    Err(FunctionalError::PerturbationSearchFailed)
}

fn sign_with_tol<R: Real>(x: R, tol: R) -> i8 {
    if x > tol {
        1
    } else if x < -tol {
        -1
    } else {
        0
    }
}

/// One positive-proportionality class.
#[derive(Debug, Clone, Serialize)]
pub struct CoarseClass<R: Real> {
    pub member_indices: Vec<usize>,
    pub representative: LinearFunctional<R>,
    /// Set when the class consists of (numerically) zero functionals.
    pub is_zero_class: bool,
}

/// Partition into positive-proportionality classesplus the list of
/// negatively proportional index pairs ("symplectic pairs").
pub fn coarse_classes<R: Real>(
    family: &FunctionalFamily<R>,
) -> (Vec<CoarseClass<R>>, Vec<(usize, usize)>) {
    let n = family.len();
    let mut assigned = vec![usize::MAX; n];
    let mut classes: Vec<CoarseClass<R>> = Vec::new();
    for (j, fj) in family.functionals.iter().enumerate() {
        if fj.is_zero() {
            // Zero functionals pool into a single flagged class.
            if let Some(z) = classes.iter_mut().find(|c| c.is_zero_class) {
                z.member_indices.push(j);
                assigned[j] = usize::MAX - 1;
                continue;
            }
            classes.push(CoarseClass {
                member_indices: vec![j],
                representative: fj.clone(),
                is_zero_class: true,
            });
            assigned[j] = usize::MAX - 1;
            continue;
        }
        let found = classes.iter_mut().enumerate().find(|(_, c)| {
            !c.is_zero_class
                && proportionality(&c.representative, fj) == Proportionality::Positive
        });
        match found {
            Some((idx, class)) => {
                class.member_indices.push(j);
                assigned[j] = idx;
            }
            None => {
                assigned[j] = classes.len();
                classes.push(CoarseClass {
                    member_indices: vec![j],
                    representative: fj.clone(),
                    is_zero_class: false,
                });
            }
        }
    }
    let mut negative_pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if proportionality(&family.functionals[i], &family.functionals[j])
                == Proportionality::Negative
            {
                negative_pairs.push((i, j));
            }
        }
    }
    (classes, negative_pairs)
}

/// Index partition by the sign of `λ^j(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub unstable: Vec<usize>,
    pub stable: Vec<usize>,
    pub neutral: Vec<usize>,
}

/// Stable/unstable/neutral index sets of the element `n`.
pub fn invariant_splitting<R: Real>(
    family: &FunctionalFamily<R>,
    n: &[R],
) -> Result<Splitting, FunctionalError> {
    if norm(n) <= R::of(1e-300) {
        return Err(FunctionalError::ZeroDirection);
    }
    let mut out = Splitting { unstable: vec![], stable: vec![], neutral: vec![] };
    for (j, f) in family.functionals.iter().enumerate() {
        match sign_with_tol(f.evaluate(n), R::of(NEUTRAL_TOL)) {
            1 => out.unstable.push(j),
            -1 => out.stable.push(j),
            _ => out.neutral.push(j),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{real_spectrum_and_frame, FrameOptions};
    use crate::samples;

    fn t3_family() -> FunctionalFamily<f64> {
        let gens = samples::t3_pair();
        let (spectra, frame) =
            real_spectrum_and_frame::<f64>(&gens, FrameOptions::default()).unwrap();
        functionals_from_action(&frame, &spectra, true).unwrap()
    }

    /// The product-action family on T⁴: two symplectic pairs.
    fn t4_product_family() -> FunctionalFamily<f64> {
        let a = (3.0 + 5f64.sqrt()) / 2.0;
        let b = (7.0 + 45f64.sqrt()) / 2.0;
        FunctionalFamily::new(
            vec![
                LinearFunctional::new(vec![a.ln(), 0.0], "a+"),
                LinearFunctional::new(vec![-a.ln(), 0.0], "a-"),
                LinearFunctional::new(vec![0.0, b.ln()], "b+"),
                LinearFunctional::new(vec![0.0, -b.ln()], "b-"),
            ],
            vec![1; 4],
            true,
        )
    }

    #[test]
    fn log_coefficients_of_the_t3_action() {
        let fam = t3_family();
        // Logs of the certified roots 5.048917… and 3.246980…
        assert!((fam.functionals[0].coeffs[0] - 1.6191738320894253).abs() < 1e-9);
        assert!((fam.functionals[0].coeffs[1] - 1.1777252115233594).abs() < 1e-9);
        assert!(fam.zero_sum_defect() < 1e-10);
    }

    #[test]
    fn kernel_element_is_orthogonal_swap() {
        let f: LinearFunctional<f64> = LinearFunctional::new(vec![2.0, -3.0], "f");
        let s0 = kernel_element(&f).unwrap();
        // Proportional to (3, 2).
        assert!((s0[0] * 2.0 - s0[1] * 3.0).abs() < 1e-12);
        assert!(f.evaluate(&s0).abs() < 1e-12 * f.norm());
        let zero: LinearFunctional<f64> = LinearFunctional::new(vec![0.0, 0.0], "z");
        assert_eq!(kernel_element(&zero), Err(FunctionalError::ZeroFunctional));
    }

    #[test]
    fn separating_element_solves_and_rejects() {
        let beta: LinearFunctional<f64> = LinearFunctional::new(vec![1.0, 0.0], "b");
        let lambda = LinearFunctional::new(vec![1.0, 1.0], "l");
        let s0 = separating_element(&beta, &lambda).unwrap();
        assert!(beta.evaluate(&s0).abs() < 1e-12);
        assert!(lambda.evaluate(&s0) > 0.0);

        let shared = LinearFunctional::new(vec![-2.0, 0.0], "s");
        assert_eq!(separating_element(&beta, &shared), Err(FunctionalError::NoSeparator));
    }

    #[test]
    fn perturbation_succeeds_on_the_t3_family() {
        let fam = t3_family();
        for i in 0..3 {
            let cert = pipart_perturbation(&fam, i).unwrap();
            let vi = fam.functionals[i].evaluate(&cert.perturbed);
            assert!(vi < 0.0, "index {i}: {vi}");
            let s0 = kernel_element(&fam.functionals[i]).unwrap();
            for j in 0..3 {
                if j == i {
                    continue;
                }
                let before = fam.functionals[j].evaluate(&s0);
                let after = fam.functionals[j].evaluate(&cert.perturbed);
                assert!(before * after > 0.0, "sign flip at {j}");
            }
        }
    }

    #[test]
    fn perturbation_reports_symplectic_obstructions() {
        let f = LinearFunctional::new(vec![1.0, 2.0], "f");
        let minus = LinearFunctional::new(vec![-0.5, -1.0], "mf");
        let fam = FunctionalFamily::new(vec![f, minus], vec![1, 1], false);
        match pipart_perturbation(&fam, 0) {
            Err(FunctionalError::SymplecticObstruction { pairs }) => {
                assert_eq!(pairs, vec![(0, 1)]);
            }
            other => panic!("expected obstruction, got {other:?}"),
        }

        match pipart_perturbation(&t4_product_family(), 0) {
            Err(FunctionalError::SymplecticObstruction { pairs }) => {
                assert_eq!(pairs, vec![(0, 1)]);
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
    }

    #[test]
    fn coarse_classes_partition_and_flag_pairs() {
        let (classes, pairs) = coarse_classes(&t4_product_family());
        assert_eq!(classes.len(), 4);
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);

        let lam = LinearFunctional::new(vec![1.0, 2.0], "l");
        let twice = LinearFunctional::new(vec![2.0, 4.0], "2l");
        let fam = FunctionalFamily::new(vec![lam, twice], vec![1, 1], false);
        let (classes, pairs) = coarse_classes(&fam);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].member_indices, vec![0, 1]);
        assert!(pairs.is_empty());
    }

    #[test]
    fn splitting_matches_the_claimed_orderings() {
        let fam = t3_family();
        let s = invariant_splitting(&fam, &[1.0, 0.0]).unwrap();
        assert_eq!(s.unstable, vec![0]);
        assert_eq!(s.stable, vec![1, 2]);
        let s = invariant_splitting(&fam, &[0.0, 1.0]).unwrap();
        assert_eq!(s.unstable, vec![0, 2]);
        assert_eq!(s.stable, vec![1]);
        assert!(invariant_splitting(&fam, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn splitting_swaps_under_negation() {
        let fam = t3_family();
        for n in [[1.0, 0.0], [2.0, -3.0], [0.7, 0.31]] {
            let fwd = invariant_splitting(&fam, &n).unwrap();
            let bwd = invariant_splitting(&fam, &[-n[0], -n[1]]).unwrap();
            assert_eq!(fwd.unstable, bwd.stable);
            assert_eq!(fwd.stable, bwd.unstable);
        }
    }
}

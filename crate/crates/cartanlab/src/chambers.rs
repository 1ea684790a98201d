//! Kernel/chamber combinatorics of a functional family.
//!
//! For a rank-2 acting group the kernels are lines through the origin; the
//! chambers are the sectors between consecutive kernel lines, enumerated by
//! an angular sort and labeled by the sign vector of a sector midpoint. For
//! rank 3 a geometric sort no longer applies, so chambers are counted as
//! realizable strict sign vectors: by Gordan's theorem the open cone
//! `{x : σ_j λ^j(x) > 0}` is nonempty exactly when the origin is not a
//! convex combination of the scaled functionals `σ_j λ^j`.

use serde::Serialize;
use thiserror::Error;

use crate::functionals::FunctionalFamily;
use crate::linalg::{norm, normalize, SquareMatrix};
use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum ChamberError {
    #[error("zero functional has no kernel direction")]
    ZeroFunctional,
    #[error("chamber enumeration supports rank 2 and 3, family has rank {rank}")]
    RankUnsupported { rank: usize },
    #[error("no representative found for a feasible sign vector")]
    RepresentativeMissing,
}

/// One open chamber: the common sign vector and an interior point.
#[derive(Debug, Clone, Serialize)]
pub struct Chamber<R: Real> {
    /// `signs[j]` is +1 or −1: the sign of `λ^j` throughout the chamber.
    pub signs: Vec<i8>,
    pub representative: Vec<R>,
}

/// Hyperplane arrangement of the functional kernels, rank 2.
#[derive(Debug, Clone, Serialize)]
pub struct ChamberDiagram<R: Real> {
    /// Distinct kernel lines as unit direction vectors, angle in [0, π).
    pub kernel_directions: Vec<Vec<R>>,
    pub chambers: Vec<Chamber<R>>,
}

impl<R: Real> ChamberDiagram<R> {
    /// Angular enumeration of the chambers of a rank-2 family.
    pub fn build(family: &FunctionalFamily<R>) -> Result<Self, ChamberError> {
        if family.rank() != 2 {
            return Err(ChamberError::RankUnsupported { rank: family.rank() });
        }
        if family.functionals.iter().any(|f| f.is_zero()) {
            return Err(ChamberError::ZeroFunctional);
        }
        // Kernel angles folded into [0, π); distinct lines only.
        let mut angles: Vec<f64> = Vec::new();
        let mut directions: Vec<Vec<R>> = Vec::new();
        for f in &family.functionals {
            let mut dir = vec![-f.coeffs[1], f.coeffs[0]];
            normalize(&mut dir);
            let mut theta = dir[1].as_f64().atan2(dir[0].as_f64());
            if theta < 0.0 {
                theta += std::f64::consts::PI;
            }
            if theta >= std::f64::consts::PI - 1e-15 {
                theta -= std::f64::consts::PI;
            }
            let dup = angles.iter().any(|&a: &f64| {
                let mut d = (a - theta).abs();
                d = d.min(std::f64::consts::PI - d);
                d < 1e-12
            });
            if !dup {
                angles.push(theta);
                if dir[1] < R::zero() || (dir[1] == R::zero() && dir[0] < R::zero()) {
                    dir = vec![-dir[0], -dir[1]];
                }
                directions.push(dir);
            }
        }
        let mut order: Vec<usize> = (0..angles.len()).collect();
        order.sort_by(|&i, &j| angles[i].partial_cmp(&angles[j]).expect("finite angles"));
        let sorted_angles: Vec<f64> = order.iter().map(|&i| angles[i]).collect();
        let directions: Vec<Vec<R>> = order.iter().map(|&i| directions[i].clone()).collect();

        // The 2L boundary rays in [0, 2π), sector midpoints between them.
        let mut rays: Vec<f64> = sorted_angles
            .iter()
            .flat_map(|&a| [a, a + std::f64::consts::PI])
            .collect();
        rays.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mut chambers = Vec::new();
        for w in 0..rays.len() {
            let lo = rays[w];
            let hi = if w + 1 < rays.len() { rays[w + 1] } else { rays[0] + 2.0 * std::f64::consts::PI };
            let mid = 0.5 * (lo + hi);
            let p = vec![R::of(mid.cos()), R::of(mid.sin())];
            let signs: Vec<i8> = family
                .functionals
                .iter()
                .map(|f| if f.evaluate(&p) > R::zero() { 1 } else { -1 })
                .collect();
            debug_assert!(
                family.functionals.iter().all(|f| f.evaluate(&p).abs() > R::of(1e-14)),
                "sector midpoint fell on a kernel"
            );
            chambers.push(Chamber { signs, representative: p });
        }
        debug_assert_eq!(
            chambers.len(),
            chambers
                .iter()
                .map(|c| c.signs.clone())
                .collect::<std::collections::BTreeSet<_>>()
                .len(),
            "duplicate chamber labels"
        );
        Ok(Self { kernel_directions: directions, chambers })
    }

    pub fn count(&self) -> usize {
        self.chambers.len()
    }

    pub fn has_sign_vector(&self, signs: &[i8]) -> bool {
        self.chambers.iter().any(|c| c.signs == signs)
    }
}

/// Chambers as realizable strict sign vectors, rank 2 or 3.
///
/// Feasibility of each candidate sign vector is decided by Gordan's
/// theorem; representatives are searched among perturbed kernel-edge
/// directions and verified by re-evaluation.
pub fn sign_chambers<R: Real>(
    family: &FunctionalFamily<R>,
) -> Result<Vec<Chamber<R>>, ChamberError> {
    let k = family.rank();
    if k != 2 && k != 3 {
        return Err(ChamberError::RankUnsupported { rank: k });
    }
    if family.functionals.iter().any(|f| f.is_zero()) {
        return Err(ChamberError::ZeroFunctional);
    }
    let m = family.len();
    let rows: Vec<Vec<R>> = family
        .functionals
        .iter()
        .map(|f| {
            let mut v = f.coeffs.clone();
            normalize(&mut v);
            v
        })
        .collect();
    let mut chambers = Vec::new();
    for mask in 0..(1u32 << m) {
        let signs: Vec<i8> =
            (0..m).map(|j| if mask & (1 << j) != 0 { 1 } else { -1 }).collect();
        let scaled: Vec<Vec<R>> = rows
            .iter()
            .zip(&signs)
            .map(|(r, &s)| r.iter().map(|&x| x * R::of(s as f64)).collect())
            .collect();
        if origin_in_convex_hull(&scaled) {
            continue;
        }
        let rep = find_representative(family, &signs)?;
        chambers.push(Chamber { signs, representative: rep });
    }
    Ok(chambers)
}

/// Is the origin a convex combination of the given points? Checked over all
/// subsets of size ≤ dim+1 (Carathéodory) by solving the barycentric system.
fn origin_in_convex_hull<R: Real>(points: &[Vec<R>]) -> bool {
    let dim = points[0].len();
    let n = points.len();
    let tol = R::of(1e-9);
    // Any point at the origin already witnesses containment.
    if points.iter().any(|p| norm(p) <= tol) {
        return true;
    }
    let mut subset = Vec::new();
    subsets_up_to(n, dim + 1, &mut subset, &mut |idx: &[usize]| {
        origin_in_simplex(points, idx, tol)
    })
}

fn subsets_up_to(
    n: usize,
    max_len: usize,
    current: &mut Vec<usize>,
    test: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if current.len() >= 2 && test(current) {
        return true;
    }
    if current.len() == max_len {
        return false;
    }
    let start = current.last().map(|&x| x + 1).unwrap_or(0);
    for next in start..n {
        current.push(next);
        if subsets_up_to(n, max_len, current, test) {
            current.pop();
            return true;
        }
        current.pop();
    }
    false
}

/// Solve Σ w_i p_i = 0, Σ w_i = 1 for the chosen subset; containment iff
/// all weights are ≥ −tol.
fn origin_in_simplex<R: Real>(points: &[Vec<R>], idx: &[usize], tol: R) -> bool {
    let dim = points[0].len();
    let k = idx.len();
    // Rows: each coordinate equation, then the affine constraint.
    let rows = dim + 1;
    if k > rows {
        return false;
    }
    // Least-squares via normal equations of the (rows × k) system.
    let mut a = vec![vec![R::zero(); k]; rows];
    for (col, &pi) in idx.iter().enumerate() {
        for r in 0..dim {
            a[r][col] = points[pi][r];
        }
        a[dim][col] = R::one();
    }
    let mut b = vec![R::zero(); rows];
    b[dim] = R::one();
    let mut ata = SquareMatrix::<R>::zeros(k);
    let mut atb = vec![R::zero(); k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = R::zero();
            for r in 0..rows {
                acc += a[r][i] * a[r][j];
            }
            ata[(i, j)] = acc;
        }
        let mut acc = R::zero();
        for r in 0..rows {
            acc += a[r][i] * b[r];
        }
        atb[i] = acc;
    }
    let Ok(w) = ata.solve(&atb) else { return false };
    // Verify the solve actually satisfies the system (rank-deficient
    // subsets return garbage weights).
    let mut residual = R::zero();
    for r in 0..rows {
        let mut acc = -b[r];
        for (col, &wi) in w.iter().enumerate() {
            acc += a[r][col] * wi;
        }
        residual = residual.max(acc.abs());
    }
    residual <= tol && w.iter().all(|&wi| wi >= -tol)
}

/// Find an interior point of the chamber with the given sign vector.
fn find_representative<R: Real>(
    family: &FunctionalFamily<R>,
    signs: &[i8],
) -> Result<Vec<R>, ChamberError> {
    let k = family.rank();
    let normals: Vec<Vec<R>> = family
        .functionals
        .iter()
        .map(|f| {
            let mut v = f.coeffs.clone();
            normalize(&mut v);
            v
        })
        .collect();
    let margin = |p: &[R]| -> R {
        family
            .functionals
            .iter()
            .zip(signs)
            .map(|(f, &s)| f.evaluate(p) * R::of(s as f64) / f.norm())
            .fold(R::infinity(), |acc, x| acc.min(x))
    };
    let mut candidates: Vec<Vec<R>> = Vec::new();
    // Analytic-center style candidate: sum of inward normals.
    let mut center = vec![R::zero(); k];
    for (nrm, &s) in normals.iter().zip(signs) {
        for (c, &x) in center.iter_mut().zip(nrm) {
            *c += x * R::of(s as f64);
        }
    }
    candidates.push(center);
    if k == 3 {
        // Perturbations around each kernel-intersection edge ray.
        for i in 0..normals.len() {
            for j in (i + 1)..normals.len() {
                let u = cross(&normals[i], &normals[j]);
                if norm(&u) <= R::of(1e-12) {
                    continue;
                }
                for ray_sign in [R::one(), -R::one()] {
                    for (di, dj) in
                        [(R::one(), R::one()), (R::one(), -R::one()), (-R::one(), R::one()), (-R::one(), -R::one())]
                    {
                        for delta in [R::of(1e-2), R::of(1e-4)] {
                            let p: Vec<R> = (0..3)
                                .map(|t| {
                                    ray_sign * u[t]
                                        + delta * (di * normals[i][t] + dj * normals[j][t])
                                })
                                .collect();
                            candidates.push(p);
                        }
                    }
                }
            }
        }
    }
    candidates
        .into_iter()
        .map(|mut p| {
            normalize(&mut p);
            p
        })
        .filter(|p| norm(p) > R::of(0.5))
        .max_by(|a, b| margin(a).partial_cmp(&margin(b)).expect("finite margins"))
        .filter(|p| margin(p) > R::zero())
        .ok_or(ChamberError::RepresentativeMissing)
}

fn cross<R: Real>(a: &[R], b: &[R]) -> Vec<R> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{real_spectrum_and_frame, FrameOptions};
    use crate::functionals::{functionals_from_action, FunctionalFamily, LinearFunctional};
    use crate::samples;

    fn t3_family() -> FunctionalFamily<f64> {
        let gens = samples::t3_pair();
        let (spectra, frame) =
            real_spectrum_and_frame::<f64>(&gens, FrameOptions::default()).unwrap();
        functionals_from_action(&frame, &spectra, true).unwrap()
    }

    #[test]
    fn six_chambers_with_mixed_signs() {
        let diagram = ChamberDiagram::build(&t3_family()).unwrap();
        assert_eq!(diagram.count(), 6);
        assert_eq!(diagram.kernel_directions.len(), 3);
        assert!(!diagram.has_sign_vector(&[1, 1, 1]));
        assert!(!diagram.has_sign_vector(&[-1, -1, -1]));
        // Every representative matches its label on re-evaluation.
        let fam = t3_family();
        for ch in &diagram.chambers {
            for (f, &s) in fam.functionals.iter().zip(&ch.signs) {
                assert!(f.evaluate(&ch.representative) * s as f64 > 0.0);
            }
        }
    }

    #[test]
    fn single_functional_gives_two_chambers() {
        let fam = FunctionalFamily::new(
            vec![LinearFunctional::new(vec![1.0, 2.0], "l")],
            vec![1],
            false,
        );
        let diagram = ChamberDiagram::build(&fam).unwrap();
        assert_eq!(diagram.count(), 2);
    }

    #[test]
    fn zero_functional_is_rejected() {
        let fam = FunctionalFamily::new(
            vec![LinearFunctional::new(vec![0.0, 0.0], "z")],
            vec![1],
            false,
        );
        assert!(matches!(ChamberDiagram::build(&fam), Err(ChamberError::ZeroFunctional)));
    }

    #[test]
    fn sign_chambers_agree_with_angular_enumeration_in_rank_two() {
        let fam = t3_family();
        let geometric = ChamberDiagram::build(&fam).unwrap();
        let combinatorial = sign_chambers(&fam).unwrap();
        assert_eq!(geometric.count(), combinatorial.len());
        for ch in &combinatorial {
            assert!(geometric.has_sign_vector(&ch.signs));
        }
    }

    #[test]
    fn rank_three_general_position_has_fourteen_chambers() {
        let gens = samples::t4_general_position();
        let (spectra, frame) =
            real_spectrum_and_frame::<f64>(&gens, FrameOptions::default()).unwrap();
        let fam = functionals_from_action(&frame, &spectra, true).unwrap();
        let chambers = sign_chambers(&fam).unwrap();
        assert_eq!(chambers.len(), 14);
        for ch in &chambers {
            for (f, &s) in fam.functionals.iter().zip(&ch.signs) {
                assert!(
                    f.evaluate(&ch.representative) * s as f64 > 0.0,
                    "representative escaped its chamber"
                );
            }
        }
    }
}

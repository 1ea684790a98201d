//! The algebraic suspension of a rank-2 toral action.
//!
//! The interpolation matrices `M^t = Q diag(e^{λ^j(t)}) Q⁻¹` extend the
//! integer action to real time: `M^n` recovers the exact element at integer
//! `n`, the cocycle identity `M^{s+t} = M^s M^t` holds by construction, and
//! the twisted lattices `Λ_t = M^t ℤ^d` make the fibers `ℝ^d/Λ_t` into a
//! bundle over T² carrying the interpolating ℝ²-action
//! `s·(t, x+Λ_t) = (s+t, M^s x + Λ_{t+s})`.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{norm, SquareMatrix};
use crate::scalar::Real;
use crate::toral::CartanActionSpec;

#[derive(Debug, Error)]
pub enum SuspensionError {
    #[error("suspension needs a rank-2 base action, got rank {0}")]
    RankUnsupported(usize),
    #[error("frame reconstruction residual {residual:e} exceeds {tolerance:e} for generator {generator}")]
    Reconstruction { generator: usize, residual: f64, tolerance: f64 },
    #[error("interpolation matrix is singular at t = {t:?}")]
    SingularFiber { t: Vec<f64> },
}

/// Dilation beyond which double precision loses the lattice.
const CONDITIONING_LIMIT: f64 = 1e6;

/// Suspension data: diagonalizing frame plus the Lyapunov functionals.
#[derive(Debug, Clone)]
pub struct SuspensionSpec<R: Real> {
    pub base: CartanActionSpec<R>,
}

/// Point of the suspension bundle: base coordinate `t` on T², fiber
/// representative `x` inside the fundamental parallelepiped of `Λ_t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistedPoint<R: Real> {
    pub t: Vec<R>,
    pub x: Vec<R>,
}

/// Non-fatal note that `‖t‖` pushed the dilation past double precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditioningWarning {
    pub max_dilation: f64,
}

impl<R: Real> SuspensionSpec<R> {
    pub fn new(base: CartanActionSpec<R>) -> Result<Self, SuspensionError> {
        if base.rank() != 2 {
            return Err(SuspensionError::RankUnsupported(base.rank()));
        }
        let spec = Self { base };
        // Q diag Q⁻¹ must reproduce each generator to 1e-8.
        for (g, generator) in spec.base.generators.iter().enumerate() {
            let t = unit_vector(g, 2);
            let m = spec.interpolation_matrix(&t);
            let residual = m.sub(&generator.to_float()).max_norm().as_f64();
            if residual > 1e-8 {
                return Err(SuspensionError::Reconstruction {
                    generator: g,
                    residual,
                    tolerance: 1e-8,
                });
            }
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `M^t = Q diag(e^{λ^j(t)}) Q⁻¹`.
    pub fn interpolation_matrix(&self, t: &[R]) -> SquareMatrix<R> {
        let d = self.dim();
        let exps: Vec<R> = (0..d)
            .map(|j| self.base.family.functionals[j].evaluate(t).exp())
            .collect();
        self.base
            .frame
            .q
            .mul(&SquareMatrix::diagonal(&exps))
            .mul(&self.base.frame.qinv)
    }

    /// `det M^t`, evaluated through the diagonal construction
    /// `exp(Σ_j λ^j(t)) · det Q · det Q⁻¹`, which stays accurate where the
    /// composed matrix already dwarfs double precision.
    pub fn interpolation_det(&self, t: &[R]) -> R {
        let d = self.dim();
        let log_sum: R = (0..d)
            .map(|j| self.base.family.functionals[j].evaluate(t))
            .sum();
        log_sum.exp() * self.base.frame.q.det() * self.base.frame.qinv.det()
    }

    /// Largest fiber dilation `e^{max_j |λ^j(t)|}`.
    pub fn max_dilation(&self, t: &[R]) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|j| self.base.family.functionals[j].evaluate(t).abs().as_f64())
            .fold(0.0, f64::max)
            .exp()
    }

    /// Canonical representative of `x` modulo the twisted lattice `Λ_t`,
    /// with `t` reduced modulo ℤ².
    pub fn reduce(
        &self,
        t: &[R],
        x: &[R],
    ) -> Result<(TwistedPoint<R>, Option<ConditioningWarning>), SuspensionError> {
        let warning = (self.max_dilation(t) > CONDITIONING_LIMIT)
            .then(|| ConditioningWarning { max_dilation: self.max_dilation(t) });
        let t_mod: Vec<R> = t.iter().map(|&c| c - c.floor()).collect();
        // Λ_t depends on t mod ℤ² only, so the reduced base point names the
        // same lattice.
        let m = self.interpolation_matrix(&t_mod);
        let coords = m
            .solve(x)
            .map_err(|_| SuspensionError::SingularFiber {
                t: t.iter().map(|&c| c.as_f64()).collect(),
            })?;
        let frac: Vec<R> = coords.iter().map(|&c| c - c.floor()).collect();
        Ok((TwistedPoint { t: t_mod, x: m.mul_vec(&frac) }, warning))
    }

    /// The ℝ²-action `s·(t, x+Λ_t) = (s+t, M^s x + Λ_{t+s})`.
    pub fn act(
        &self,
        s: &[R],
        p: &TwistedPoint<R>,
    ) -> Result<TwistedPoint<R>, SuspensionError> {
        let ms = self.interpolation_matrix(s);
        let moved = ms.mul_vec(&p.x);
        let new_t: Vec<R> = p.t.iter().zip(s).map(|(&a, &b)| a + b).collect();
        Ok(self.reduce(&new_t, &moved)?.0)
    }

    /// Distance between two fiber points over the same base, measured
    /// modulo the twisted lattice.
    pub fn fiber_distance(&self, t: &[R], x1: &[R], x2: &[R]) -> Result<R, SuspensionError> {
        let m = self.interpolation_matrix(t);
        let diff: Vec<R> = x1.iter().zip(x2).map(|(&a, &b)| a - b).collect();
        let coords = m
            .solve(&diff)
            .map_err(|_| SuspensionError::SingularFiber {
                t: t.iter().map(|&c| c.as_f64()).collect(),
            })?;
        let reduced: Vec<R> = coords
            .iter()
            .map(|&c| c - (c + R::of(0.5)).floor())
            .collect();
        Ok(norm(&m.mul_vec(&reduced)))
    }

    /// Residual of the exact dilation law along the j-th eigendirection:
    /// `‖act(s, p + v·e^j) − (act(s, p) + e^{λ^j(s)}·v·e^j)‖` in the fiber.
    pub fn dilation_residual(
        &self,
        s: &[R],
        p: &TwistedPoint<R>,
        j: usize,
        v: R,
    ) -> Result<R, SuspensionError> {
        let e_j = self.base.frame.eigenvector(j);
        let displaced: Vec<R> = p.x.iter().zip(&e_j).map(|(&x, &e)| x + v * e).collect();
        let p2 = self.reduce(&p.t, &displaced)?.0;
        let image = self.act(s, &p2)?;
        let base_image = self.act(s, p)?;
        let factor = self.base.family.functionals[j].evaluate(s).exp();
        let expected: Vec<R> = base_image
            .x
            .iter()
            .zip(&e_j)
            .map(|(&x, &e)| x + factor * v * e)
            .collect();
        self.fiber_distance(&image.t, &image.x, &expected)
    }
}

fn unit_vector<R: Real>(index: usize, len: usize) -> Vec<R> {
    (0..len).map(|i| if i == index { R::one() } else { R::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn suspension() -> SuspensionSpec<f64> {
        SuspensionSpec::new(CartanActionSpec::new(samples::t3_pair()).unwrap()).unwrap()
    }

    #[test]
    fn integer_times_recover_the_exact_elements() {
        let s = suspension();
        let id = s.interpolation_matrix(&[0.0, 0.0]);
        assert!(id.sub(&SquareMatrix::identity(3)).max_norm() < 1e-10);
        let a = s.interpolation_matrix(&[1.0, 0.0]);
        assert!(a.sub(&s.base.generators[0].to_float()).max_norm() < 1e-8);
        let ab = s.interpolation_matrix(&[1.0, 1.0]);
        assert!(ab.sub(&s.base.element(&[1, 1]).unwrap().to_float()).max_norm() < 1e-8);
    }

    #[test]
    fn cocycle_identity_and_unit_determinant() {
        let s = suspension();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let u = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let v = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let lhs = s.interpolation_matrix(&[u[0] + v[0], u[1] + v[1]]);
            let rhs = s.interpolation_matrix(&u).mul(&s.interpolation_matrix(&v));
            assert!(lhs.sub(&rhs).max_norm() < 1e-9);
        }
        for _ in 0..50 {
            // Uniform direction, radius up to 5 in the Euclidean norm.
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let radius = rng.gen_range(0.0..5.0);
            let t = [radius * theta.cos(), radius * theta.sin()];
            let det = s.interpolation_det(&t);
            assert!((det - 1.0).abs() < 1e-9, "det {det} at {t:?}");
        }
    }

    #[test]
    fn reduce_is_lattice_invariant_and_idempotent() {
        let s = suspension();
        let t = [0.3, 0.45];
        let x = [0.2, 0.7, 0.1];
        let (p, warn) = s.reduce(&t, &x).unwrap();
        assert!(warn.is_none());
        let (p2, _) = s.reduce(&p.t, &p.x).unwrap();
        assert!(s.fiber_distance(&t, &p.x, &p2.x).unwrap() < 1e-9);

        // Adding a lattice vector M^t·(1,0,0) must not move the point.
        let m = s.interpolation_matrix(&t);
        let shifted: Vec<f64> = (0..3).map(|i| x[i] + m[(i, 0)]).collect();
        let (p3, _) = s.reduce(&t, &shifted).unwrap();
        assert!(s.fiber_distance(&t, &p.x, &p3.x).unwrap() < 1e-9);

        // t and t + (1,1) name the same twisted torus.
        let (p4, _) = s.reduce(&[t[0] + 1.0, t[1] + 1.0], &x).unwrap();
        assert!(s.fiber_distance(&t, &p.x, &p4.x).unwrap() < 1e-9);
        assert!((p4.t[0] - p.t[0]).abs() < 1e-12);
    }

    #[test]
    fn action_is_a_flow_and_matches_the_exact_integer_action() {
        let s = suspension();
        let (p, _) = s.reduce(&[0.0, 0.0], &[0.21, 0.82, 0.43]).unwrap();
        let same = s.act(&[0.0, 0.0], &p).unwrap();
        assert!(s.fiber_distance(&p.t, &p.x, &same.x).unwrap() < 1e-12);

        // Integer step (1,0) on the zero fiber is the exact automorphism.
        let moved = s.act(&[1.0, 0.0], &p).unwrap();
        let exact = s.base.element(&[1, 0]).unwrap().to_float::<f64>().mul_vec(&p.x);
        let (expected, _) = s.reduce(&[0.0, 0.0], &exact).unwrap();
        assert!(s.fiber_distance(&moved.t, &moved.x, &expected.x).unwrap() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let s1 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let s2 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let lhs = s.act(&s1, &s.act(&s2, &p).unwrap()).unwrap();
            let rhs = s.act(&[s1[0] + s2[0], s1[1] + s2[1]], &p).unwrap();
            assert!(s.fiber_distance(&lhs.t, &lhs.x, &rhs.x).unwrap() < 1e-8);
        }
    }

    #[test]
    fn eigen_displacements_dilate_exactly() {
        let s = suspension();
        let (p, _) = s.reduce(&[0.1, 0.2], &[0.4, 0.15, 0.6]).unwrap();
        assert!(s.dilation_residual(&[0.0, 0.0], &p, 0, 0.3).unwrap() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let step = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            for j in 0..3 {
                let r = s.dilation_residual(&step, &p, j, 0.1).unwrap();
                assert!(r < 1e-9, "residual {r} at j={j} s={step:?}");
            }
        }
    }

    #[test]
    fn kernel_directions_act_isometrically_on_their_leaf() {
        let s = suspension();
        let (p, _) = s.reduce(&[0.0, 0.0], &[0.3, 0.5, 0.7]).unwrap();
        for j in 0..3 {
            let k = crate::functionals::kernel_element(&s.base.family.functionals[j]).unwrap();
            let r = s.dilation_residual(&k, &p, j, 0.5).unwrap();
            assert!(r < 1e-9, "kernel flow must move the leaf isometrically: {r}");
        }
    }

    #[test]
    fn conditioning_warning_fires_for_huge_times() {
        let s = suspension();
        let (_, warn) = s.reduce(&[12.0, 0.0], &[0.1, 0.1, 0.1]).unwrap();
        assert!(warn.is_some());
    }
}

//! Torus maps and orbit sampling models.
//!
//! Long orbits of expanding circle maps cannot be produced by naive float
//! iteration: multiplication by an even factor is exact in binary floating
//! point, so every trajectory collapses onto 0 after one mantissa's worth
//! of steps. Orbits here come from generative models instead:
//!
//! - `×k` maps use the digit model: a base-k digit stream (uniform digits
//!   for Lebesgue sampling, weighted digits for Bernoulli measures) read
//!   through a sliding window, so consecutive points satisfy the map to
//!   well below 10⁻¹⁰;
//! - toral automorphisms iterate in floating point (rounding acts as a
//!   perturbation and the empirical measure stays Lebesgue-like);
//! - explicit starting points combine their exact digit expansion with
//!   either an exact (terminating) tail or a seeded stochastic tail.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::IntMatrix;
use crate::linalg::SquareMatrix;

/// A self-map of the torus.
#[derive(Debug, Clone)]
pub enum TorusMap {
    /// `x ↦ factor·x mod 1` on the circle.
    Times { factor: u64 },
    /// Toral automorphism from an integer matrix.
    Auto { matrix: IntMatrix },
    Identity { dim: usize },
}

impl TorusMap {
    pub fn doubling() -> Self {
        TorusMap::Times { factor: 2 }
    }

    pub fn dim(&self) -> usize {
        match self {
            TorusMap::Times { .. } => 1,
            TorusMap::Auto { matrix } => matrix.dim(),
            TorusMap::Identity { dim } => *dim,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            TorusMap::Times { factor } => format!("times{factor}"),
            TorusMap::Auto { matrix } => format!("auto{}d", matrix.dim()),
            TorusMap::Identity { dim } => format!("identity{dim}d"),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            TorusMap::Times { factor } => vec![(*factor as f64 * x[0]).rem_euclid(1.0)],
            TorusMap::Auto { matrix } => {
                let m: SquareMatrix<f64> = matrix.to_float();
                m.mul_vec(x).into_iter().map(|v| v.rem_euclid(1.0)).collect()
            }
            TorusMap::Identity { .. } => x.to_vec(),
        }
    }
}

/// Distance on the torus: max over coordinates of circular distance.
pub fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = (x - y).abs();
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

/// A finite orbit with its generating map descriptor and seed.
#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub points: Vec<Vec<f64>>,
    pub map_descriptor: String,
    pub seed: u64,
}

impl OrbitSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Worst defect of the one-step map relation along the orbit.
    pub fn max_step_defect(&self, map: &TorusMap) -> f64 {
        self.points
            .windows(2)
            .map(|w| torus_distance(&map.apply(&w[0]), &w[1]))
            .fold(0.0, f64::max)
    }
}

/// Extension policy for an orbit started at an explicit float point.
#[derive(Debug, Clone, Copy)]
pub enum Continuation {
    /// Iterate the true orbit of the (rational) float point.
    Exact,
    /// Extend the digit expansion stochastically: a Lebesgue-typical point
    /// agreeing with the start to full float precision.
    StochasticDigits { seed: u64 },
}

fn digit_window(factor: u64) -> usize {
    (53.0 / (factor as f64).log2()).ceil() as usize + 2
}

/// Point read from a digit window, most significant digit first.
fn point_from_digits(digits: &[u8], factor: u64) -> f64 {
    let inv = 1.0 / factor as f64;
    digits.iter().rev().fold(0.0, |acc, &d| (acc + d as f64) * inv)
}

/// Exact base-`factor` digits of a float in [0,1).
fn exact_digits(x: f64, factor: u64, max_digits: usize) -> Vec<u8> {
    let mut digits = Vec::with_capacity(max_digits);
    let mut r = BigRational::from_float(x.rem_euclid(1.0)).unwrap_or_else(BigRational::zero);
    let f = BigRational::from(BigInt::from(factor));
    for _ in 0..max_digits {
        if r.is_zero() {
            digits.push(0);
            continue;
        }
        r *= &f;
        let d = r.floor();
        digits.push(d.to_integer().to_u8().expect("digit below factor"));
        r -= d;
    }
    digits
}

/// Lebesgue-sampled orbit: digit model for `×k`, float iteration from a
/// seeded start for automorphisms.
pub fn lebesgue_orbit(map: &TorusMap, len: usize, seed: u64) -> OrbitSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match map {
        TorusMap::Times { factor } => {
            let window = digit_window(*factor);
            let digits: Vec<u8> =
                (0..len + window).map(|_| rng.gen_range(0..*factor) as u8).collect();
            digit_orbit(&digits, *factor, len, map, seed)
        }
        TorusMap::Auto { .. } | TorusMap::Identity { .. } => {
            let start: Vec<f64> = (0..map.dim()).map(|_| rng.gen_range(0.0..1.0)).collect();
            float_orbit(map, &start, len, seed)
        }
    }
}

/// Bernoulli(p) sampling of the doubling map: binary digits are 1 with
/// probability `p`.
pub fn bernoulli_doubling_orbit(p: f64, len: usize, seed: u64) -> OrbitSample {
    assert!((0.0..=1.0).contains(&p), "probability out of range");
    let map = TorusMap::doubling();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window = digit_window(2);
    let digits: Vec<u8> =
        (0..len + window).map(|_| u8::from(rng.gen_bool(p))).collect();
    digit_orbit(&digits, 2, len, &map, seed)
}

/// Orbit started at an explicit point, with the chosen tail policy.
pub fn orbit_from(
    map: &TorusMap,
    start: &[f64],
    len: usize,
    continuation: Continuation,
) -> OrbitSample {
    match (map, continuation) {
        (TorusMap::Times { factor }, Continuation::StochasticDigits { seed }) => {
            // The start point pins one window's worth of digits exactly;
            // float precision carries no information beyond it, so the tail
            // models a typical continuation.
            let window = digit_window(*factor);
            let mut digits = exact_digits(start[0], *factor, len + window);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for d in digits.iter_mut().skip(window) {
                *d = rng.gen_range(0..*factor) as u8;
            }
            digit_orbit(&digits, *factor, len, map, seed)
        }
        _ => float_orbit(map, start, len, 0),
    }
}

fn digit_orbit(digits: &[u8], factor: u64, len: usize, map: &TorusMap, seed: u64) -> OrbitSample {
    let window = digit_window(factor);
    let points = (0..len)
        .map(|i| vec![point_from_digits(&digits[i..i + window], factor)])
        .collect();
    OrbitSample { points, map_descriptor: map.descriptor(), seed }
}

fn float_orbit(map: &TorusMap, start: &[f64], len: usize, seed: u64) -> OrbitSample {
    let mut points = Vec::with_capacity(len);
    let mut x: Vec<f64> = start.iter().map(|v| v.rem_euclid(1.0)).collect();
    for _ in 0..len {
        points.push(x.clone());
        x = map.apply(&x);
    }
    OrbitSample { points, map_descriptor: map.descriptor(), seed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn digit_orbits_satisfy_the_map_relation() {
        let map = TorusMap::doubling();
        let orbit = lebesgue_orbit(&map, 5_000, 17);
        assert_eq!(orbit.len(), 5_000);
        assert!(orbit.max_step_defect(&map) < 1e-10);

        let triple = TorusMap::Times { factor: 3 };
        let orbit = lebesgue_orbit(&triple, 5_000, 17);
        assert!(orbit.max_step_defect(&triple) < 1e-10);
    }

    #[test]
    fn digit_orbits_do_not_collapse() {
        let map = TorusMap::doubling();
        let orbit = lebesgue_orbit(&map, 10_000, 3);
        let tail_mean: f64 =
            orbit.points[5_000..].iter().map(|p| p[0]).sum::<f64>() / 5_000.0;
        assert!((tail_mean - 0.5).abs() < 0.05, "collapsed orbit, mean {tail_mean}");
    }

    #[test]
    fn bernoulli_digits_have_the_requested_bias() {
        let orbit = bernoulli_doubling_orbit(0.9, 20_000, 5);
        let mean: f64 = orbit.points.iter().map(|p| p[0]).sum::<f64>() / 20_000.0;
        // Mean of Σ d_k 2^{-k-1} with d ~ Bernoulli(0.9) is 0.9.
        assert!((mean - 0.9).abs() < 0.01, "mean {mean}");
        assert!(orbit.max_step_defect(&TorusMap::doubling()) < 1e-10);
    }

    #[test]
    fn exact_continuation_respects_fixed_points() {
        let map = TorusMap::doubling();
        let orbit = orbit_from(&map, &[0.0], 100, Continuation::Exact);
        assert!(orbit.points.iter().all(|p| p[0] == 0.0));

        let stochastic = orbit_from(&map, &[0.3], 1_000, Continuation::StochasticDigits { seed: 1 });
        assert!((stochastic.points[0][0] - 0.3).abs() < 1e-12);
        assert!(stochastic.max_step_defect(&map) < 1e-10);
    }

    #[test]
    fn automorphism_orbits_stay_on_the_torus() {
        let map = TorusMap::Auto { matrix: samples::cat_map() };
        let orbit = lebesgue_orbit(&map, 1_000, 9);
        assert_eq!(orbit.points[0].len(), 2);
        assert!(orbit
            .points
            .iter()
            .all(|p| p.iter().all(|&c| (0.0..1.0).contains(&c))));
        assert!(orbit.max_step_defect(&map) < 1e-10);
    }
}

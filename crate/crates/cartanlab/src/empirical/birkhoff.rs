//! Birkhoff averages of observables along orbits.

use super::maps::{orbit_from, Continuation, TorusMap};
use super::EmpiricalError;

/// Time average `(1/n) Σ_{i<n} φ(f^i x₀)`.
pub fn birkhoff_average(
    map: &TorusMap,
    observable: impl Fn(&[f64]) -> f64,
    start: &[f64],
    n: usize,
    continuation: Continuation,
) -> Result<f64, EmpiricalError> {
    if n == 0 {
        return Err(EmpiricalError::TooShort { needed: 1, got: 0 });
    }
    let orbit = orbit_from(map, start, n, continuation);
    Ok(orbit.points.iter().map(|p| observable(p)).sum::<f64>() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_map_equidistributes_the_coordinate() {
        let avg = birkhoff_average(
            &TorusMap::doubling(),
            |p| p[0],
            &[2f64.sqrt() - 1.0],
            1_000_000,
            Continuation::StochasticDigits { seed: 0 },
        )
        .unwrap();
        assert!((avg - 0.5).abs() < 0.01, "average {avg}");
    }

    #[test]
    fn constant_observables_average_to_themselves() {
        let avg = birkhoff_average(
            &TorusMap::doubling(),
            |_| 3.25,
            &[0.123],
            1_000,
            Continuation::StochasticDigits { seed: 1 },
        )
        .unwrap();
        assert_eq!(avg, 3.25);
    }

    #[test]
    fn fixed_points_average_to_their_value() {
        let avg = birkhoff_average(
            &TorusMap::doubling(),
            |p| (p[0] * std::f64::consts::TAU).cos(),
            &[0.0],
            10_000,
            Continuation::Exact,
        )
        .unwrap();
        assert_eq!(avg, 1.0);
    }
}

//! Shear probe: which translations carry a measure to a multiple of itself.
//!
//! For atomic measures the test is sharp: the translated support must match
//! exactly on the trimmed window, and the weight ratios must be uniform.
//! Anything else is mutual singularity, not approximation error. Density
//! and Lebesgue measures have closed-form constants.

use serde::Serialize;

use super::EmpiricalError;

/// Locally finite test measure on ℝ.
#[derive(Debug, Clone)]
pub enum ShearMeasureSpec {
    /// Finite list of atoms `(location, weight)`, weights positive.
    Atoms { atoms: Vec<(f64, f64)> },
    /// Atoms at the integers with weight `e^{rate·n}`.
    GeometricAtoms { rate: f64 },
    /// Density `e^{rate·x}` against Lebesgue.
    ExpDensity { rate: f64 },
    Lebesgue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ShearVerdict {
    Proportional { constant: f64 },
    NotProportional,
}

impl ShearVerdict {
    pub fn is_proportional(&self) -> bool {
        matches!(self, ShearVerdict::Proportional { .. })
    }
}

/// Absolute tolerance for matching atom locations.
const SUPPORT_TOL: f64 = 1e-12;
/// Relative tolerance for weight-ratio uniformity.
const RATIO_TOL: f64 = 1e-10;

/// Decide whether translating by `t` maps the measure to a positive
/// multiple of itself when compared on `window`.
pub fn shear_probe(
    spec: &ShearMeasureSpec,
    t: f64,
    window: (f64, f64),
) -> Result<ShearVerdict, EmpiricalError> {
    let (lo, hi) = window;
    if hi <= lo {
        return Err(EmpiricalError::EmptyWindow { lo, hi });
    }
    match spec {
        ShearMeasureSpec::Lebesgue => Ok(ShearVerdict::Proportional { constant: 1.0 }),
        ShearMeasureSpec::ExpDensity { rate } => {
            Ok(ShearVerdict::Proportional { constant: (-rate * t).exp() })
        }
        ShearMeasureSpec::GeometricAtoms { rate } => {
            let atoms: Vec<(f64, f64)> = (lo.floor() as i64..=hi.ceil() as i64)
                .map(|n| (n as f64, (rate * n as f64).exp()))
                .filter(|&(x, _)| x >= lo && x <= hi)
                .collect();
            probe_atoms(&atoms, t, window)
        }
        ShearMeasureSpec::Atoms { atoms } => probe_atoms(atoms, t, window),
    }
}

fn probe_atoms(
    atoms: &[(f64, f64)],
    t: f64,
    (lo, hi): (f64, f64),
) -> Result<ShearVerdict, EmpiricalError> {
    // Compare on the trimmed window where both x and x+t are observable.
    let (wlo, whi) = (lo + t.max(0.0), hi + t.min(0.0));
    let inside: Vec<&(f64, f64)> =
        atoms.iter().filter(|&&(x, _)| x >= wlo && x <= whi).collect();
    if inside.len() < 3 {
        return Err(EmpiricalError::InsufficientAtoms { found: inside.len(), needed: 3 });
    }
    // (T_t)_*ν has an atom of mass w(x) at x+t; proportionality to c·ν
    // needs an atom of ν at x+t with w(x) = c·w(x+t).
    let mut constant: Option<f64> = None;
    for &&(x, w) in &inside {
        let target = x + t;
        if target < lo - SUPPORT_TOL || target > hi + SUPPORT_TOL {
            continue;
        }
        let partner = atoms
            .iter()
            .find(|&&(y, _)| (y - target).abs() <= SUPPORT_TOL);
        let Some(&(_, w_target)) = partner else {
            return Ok(ShearVerdict::NotProportional);
        };
        let c = w / w_target;
        match constant {
            None => constant = Some(c),
            Some(c0) => {
                if (c - c0).abs() > RATIO_TOL * c0.abs() {
                    return Ok(ShearVerdict::NotProportional);
                }
            }
        }
    }
    match constant {
        Some(c) => Ok(ShearVerdict::Proportional { constant: c }),
        None => Ok(ShearVerdict::NotProportional),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric() -> ShearMeasureSpec {
        ShearMeasureSpec::GeometricAtoms { rate: 1.0 }
    }

    #[test]
    fn integer_shifts_of_the_geometric_atoms_are_proportional() {
        let v = shear_probe(&geometric(), 1.0, (-10.0, 10.0)).unwrap();
        match v {
            ShearVerdict::Proportional { constant } => {
                assert!((constant - (-1f64).exp()).abs() < 1e-12);
            }
            _ => panic!("expected proportional"),
        }
        let v2 = shear_probe(&geometric(), -2.0, (-10.0, 10.0)).unwrap();
        match v2 {
            ShearVerdict::Proportional { constant } => {
                assert!((constant - 2f64.exp()).abs() < 1e-10 * 2f64.exp());
            }
            _ => panic!("expected proportional"),
        }
    }

    #[test]
    fn non_integer_shifts_are_mutually_singular() {
        assert_eq!(
            shear_probe(&geometric(), 0.5, (-10.0, 10.0)).unwrap(),
            ShearVerdict::NotProportional
        );
        assert_eq!(
            shear_probe(&geometric(), std::f64::consts::PI, (-10.0, 10.0)).unwrap(),
            ShearVerdict::NotProportional
        );
    }

    #[test]
    fn densities_have_closed_form_constants() {
        for t in [-2.0, 0.3, 1.7] {
            match shear_probe(&ShearMeasureSpec::ExpDensity { rate: 1.0 }, t, (-5.0, 5.0)).unwrap()
            {
                ShearVerdict::Proportional { constant } => {
                    assert!((constant - (-t).exp()).abs() < 1e-12 * (-t).exp().max(1.0));
                }
                _ => panic!("expected proportional"),
            }
        }
        assert_eq!(
            shear_probe(&ShearMeasureSpec::Lebesgue, 0.37, (-5.0, 5.0)).unwrap(),
            ShearVerdict::Proportional { constant: 1.0 }
        );
    }

    #[test]
    fn proportional_shift_set_is_a_group_on_the_window() {
        let window = (-5.0, 5.0);
        let shifts: Vec<i64> = (-5..=5)
            .filter(|&t| {
                shear_probe(&geometric(), t as f64, window)
                    .map(|v| v.is_proportional())
                    .unwrap_or(false)
            })
            .collect();
        assert!(!shifts.is_empty());
        for &a in &shifts {
            for &b in &shifts {
                if (-5..=5).contains(&(a + b)) {
                    assert!(shifts.contains(&(a + b)), "{a}+{b} left the set");
                }
            }
        }
    }

    #[test]
    fn window_sanity() {
        assert!(matches!(
            shear_probe(&geometric(), 1.0, (3.0, 3.0)),
            Err(EmpiricalError::EmptyWindow { .. })
        ));
        assert!(matches!(
            shear_probe(&geometric(), 1.0, (0.1, 0.9)),
            Err(EmpiricalError::InsufficientAtoms { .. })
        ));
    }

    #[test]
    fn perturbed_weights_break_proportionality() {
        let atoms: Vec<(f64, f64)> =
            (-6..=6).map(|n| (n as f64, (n as f64).exp())).collect();
        let mut broken = atoms.clone();
        broken[6].1 *= 1.0 + 1e-6;
        assert_eq!(
            shear_probe(&ShearMeasureSpec::Atoms { atoms: broken }, 1.0, (-5.0, 5.0)).unwrap(),
            ShearVerdict::NotProportional
        );
    }
}

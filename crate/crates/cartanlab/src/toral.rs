//! ℤᵏ actions on tori by commuting unimodular automorphisms.
//!
//! A validated action carries its certified spectra, joint eigenframe, and
//! Lyapunov functional family. Validation itself never errors: each
//! property check lands in a report with diagnostics, so a failing family
//! still produces a full account of what broke.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{
    real_spectrum_and_frame, CharPoly, ExactError, FrameOptions, IntMatrix, JointEigenframe,
    RealSpectrum,
};
use crate::functionals::{functionals_from_action, FunctionalFamily};
use crate::linalg::SquareMatrix;
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum ToralError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("functional construction failed: {0}")]
    Functionals(#[from] crate::functionals::FunctionalError),
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("element length {got} does not match the {expected} generators")]
    ElementLength { got: usize, expected: usize },
    #[error("point dimension {got} does not match torus dimension {expected}")]
    PointDimension { got: usize, expected: usize },
    #[error("orbit denominator {denominator} exceeds the configured cap {cap}")]
    DenominatorOverflow { denominator: String, cap: u64 },
}

/// A ℤᵏ action by commuting toral automorphisms with its derived data.
#[derive(Debug, Clone)]
pub struct CartanActionSpec<R: Real> {
    pub generators: Vec<IntMatrix>,
    pub spectra: Vec<RealSpectrum>,
    pub frame: JointEigenframe<R>,
    pub family: FunctionalFamily<R>,
}

impl<R: Real> CartanActionSpec<R> {
    pub fn new(generators: Vec<IntMatrix>) -> Result<Self, ToralError> {
        Self::with_options(generators, FrameOptions::default())
    }

    pub fn with_options(
        generators: Vec<IntMatrix>,
        options: FrameOptions,
    ) -> Result<Self, ToralError> {
        let (spectra, frame) = real_spectrum_and_frame(&generators, options)?;
        let unimodular = generators.iter().all(|g| g.is_unimodular());
        let family = functionals_from_action(&frame, &spectra, unimodular)?;
        Ok(Self { generators, spectra, frame, family })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// The exact integer matrix of the element `α(n) = Π generatorᵢ^{nᵢ}`.
    pub fn element(&self, n: &[i64]) -> Result<IntMatrix, ToralError> {
        if n.len() != self.rank() {
            return Err(ToralError::ElementLength { got: n.len(), expected: self.rank() });
        }
        let mut acc = IntMatrix::identity(self.dim());
        for (g, &e) in self.generators.iter().zip(n) {
            acc = acc.mul(&g.pow(e)?)?;
        }
        Ok(acc)
    }

    /// Pesin entropy value of `α(n)` for the Lebesgue measure:
    /// Σ_{λ^j(n) > 0} m^j λ^j(n), in nats.
    pub fn lebesgue_entropy(&self, n: &[i64]) -> Result<R, ToralError> {
        if n.iter().all(|&x| x == 0) {
            return Err(ToralError::ZeroElement);
        }
        if n.len() != self.rank() {
            return Err(ToralError::ElementLength { got: n.len(), expected: self.rank() });
        }
        let nv: Vec<R> = n.iter().map(|&x| R::of(x as f64)).collect();
        let mut sum = R::zero();
        for (f, &m) in self.family.functionals.iter().zip(&self.family.multiplicities) {
            let v = f.evaluate(&nv);
            if v > R::zero() {
                sum += v * R::of(m as f64);
            }
        }
        Ok(sum)
    }
}

/// Outcome of the five-point validation of a commuting family.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub det_one: bool,
    pub distinct_real_spectra: bool,
    pub commuting: bool,
    /// No relation `Π generatorᵢ^{nᵢ} = Id` with `0 < max|nᵢ| ≤ relation_bound`,
    /// and the log-eigenvalue matrix has full numerical rank.
    pub genuine: bool,
    pub irreducible_char_polys: bool,
    pub anosov_elements_exist: bool,
    pub relation_bound: i64,
    pub diagnostics: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.det_one
            && self.distinct_real_spectra
            && self.commuting
            && self.genuine
            && self.irreducible_char_polys
            && self.anosov_elements_exist
    }
}

/// Validate a commuting family; all failures become report entries.
pub fn validate_cartan(generators: &[IntMatrix], relation_bound: i64) -> ValidationReport {
    let mut diagnostics = Vec::new();
    let mut report = ValidationReport {
        det_one: true,
        distinct_real_spectra: true,
        commuting: true,
        genuine: true,
        irreducible_char_polys: true,
        anosov_elements_exist: false,
        relation_bound,
        diagnostics: Vec::new(),
    };

    for (i, g) in generators.iter().enumerate() {
        let det = g.det();
        if !det.is_one() {
            report.det_one = false;
            diagnostics.push(format!("generator {i}: det = {det}, expected 1"));
        }
    }

    for i in 0..generators.len() {
        for j in (i + 1)..generators.len() {
            match generators[i].commutes_with(&generators[j]) {
                Ok(true) => {}
                Ok(false) => {
                    report.commuting = false;
                    diagnostics.push(format!("generators {i} and {j} do not commute"));
                }
                Err(e) => {
                    report.commuting = false;
                    diagnostics.push(format!("generators {i} and {j}: {e}"));
                }
            }
        }
    }

    let mut spectra = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        let p = CharPoly::of_matrix(g);
        match p.is_irreducible_over_q() {
            Ok(true) => {}
            Ok(false) => {
                report.irreducible_char_polys = false;
                diagnostics.push(format!("generator {i}: characteristic polynomial {p} factors over Q"));
            }
            Err(e) => {
                report.irreducible_char_polys = false;
                diagnostics.push(format!("generator {i}: {e}"));
            }
        }
        match RealSpectrum::isolate(&p) {
            Ok(s) => {
                if s.midpoints().iter().any(|&r| r <= 0.0) {
                    report.distinct_real_spectra = false;
                    diagnostics.push(format!(
                        "generator {i}: spectrum contains non-positive eigenvalues"
                    ));
                }
                spectra.push(Some(s));
            }
            Err(e) => {
                report.distinct_real_spectra = false;
                diagnostics.push(format!("generator {i}: {e}"));
                spectra.push(None);
            }
        }
    }

    // A generator with positive distinct spectrum is Anosov iff 1 is not an
    // eigenvalue, which the exact polynomial decides.
    for (i, g) in generators.iter().enumerate() {
        if spectra.get(i).map(|s| s.is_some()).unwrap_or(false) {
            let p = CharPoly::of_matrix(g);
            let one = BigRational::one();
            if p.sign_at(&one) != 0 && p.sign_at(&(-one)) != 0 {
                report.anosov_elements_exist = true;
            } else {
                diagnostics.push(format!("generator {i} has an eigenvalue of modulus 1"));
            }
        }
    }

    // Genuineness: exact relation search over the exponent box, then a
    // full-rank certificate on the log-eigenvalue matrix for everything
    // beyond the bound.
    if report.commuting {
        if let Some(relation) = find_relation(generators, relation_bound) {
            report.genuine = false;
            diagnostics.push(format!("relation found: exponents {relation:?} give the identity"));
        }
        if spectra.iter().all(|s| s.is_some()) && !generators.is_empty() {
            match real_spectrum_and_frame::<f64>(generators, FrameOptions::default()) {
                Ok((sp, frame)) => {
                    let sigma = log_matrix_min_singular(&frame, &sp);
                    diagnostics.push(format!(
                        "log-eigenvalue matrix minimal singular value: {sigma:.6e}"
                    ));
                    if sigma < 1e-9 {
                        report.genuine = false;
                        diagnostics.push(
                            "log-eigenvalue matrix is rank-deficient: a relation exists beyond any bound"
                                .to_string(),
                        );
                    }
                }
                Err(e) => diagnostics.push(format!("frame unavailable for rank certificate: {e}")),
            }
        }
    } else {
        report.genuine = false;
        diagnostics.push("genuineness skipped: generators do not commute".to_string());
    }

    report.diagnostics = diagnostics;
    report
}

/// Smallest singular value of the d×k matrix of log eigenvalues.
fn log_matrix_min_singular(frame: &JointEigenframe<f64>, spectra: &[RealSpectrum]) -> f64 {
    let d = frame.q.dim();
    let k = spectra.len();
    let mut gram = SquareMatrix::<f64>::zeros(k);
    for a in 0..k {
        for b in 0..k {
            let mut acc = 0.0;
            for j in 0..d {
                acc += frame.eigenvalues[a][j].ln() * frame.eigenvalues[b][j].ln();
            }
            gram[(a, b)] = acc;
        }
    }
    let (vals, _) = gram.symmetric_eigen();
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Exhaustive search for `Π generatorᵢ^{nᵢ} = Id`, `0 < max|nᵢ| ≤ bound`.
fn find_relation(generators: &[IntMatrix], bound: i64) -> Option<Vec<i64>> {
    let k = generators.len();
    if k == 0 {
        return None;
    }
    // Precomputed powers per generator, exact.
    let powers: Vec<Vec<IntMatrix>> = generators
        .iter()
        .map(|g| {
            (-bound..=bound)
                .map(|e| g.pow(e).expect("unimodular or positive power"))
                .collect()
        })
        .collect();
    let idx = |e: i64| (e + bound) as usize;
    let mut exponents = vec![-bound; k];
    loop {
        if exponents.iter().any(|&e| e != 0) {
            let mut acc = powers[0][idx(exponents[0])].clone();
            for g in 1..k {
                acc = acc.mul(&powers[g][idx(exponents[g])]).expect("same dim");
            }
            if acc.is_identity() {
                return Some(exponents);
            }
        }
        // Odometer increment.
        let mut g = 0;
        loop {
            if g == k {
                return None;
            }
            exponents[g] += 1;
            if exponents[g] <= bound {
                break;
            }
            exponents[g] = -bound;
            g += 1;
        }
    }
}

/// Point on the torus, exact-rational or float, coordinates in [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub enum TorusPoint {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl TorusPoint {
    pub fn exact_from_ratios(ratios: &[(i64, i64)]) -> Self {
        TorusPoint::Exact(
            ratios
                .iter()
                .map(|&(p, q)| reduce_mod_one(BigRational::new(BigInt::from(p), BigInt::from(q))))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        match self {
            TorusPoint::Exact(v) => v.len(),
            TorusPoint::Float(v) => v.len(),
        }
    }
}

fn reduce_mod_one(x: BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

/// Orbit of a point under one toral automorphism.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub points: Vec<TorusPoint>,
    /// `(preperiod, period)` when exact iteration detected a cycle.
    pub cycle: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitOptions {
    /// Exact-mode guard: error out if a denominator exceeds this.
    pub denominator_cap: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self { denominator_cap: 1_000_000 }
    }
}

/// Iterate `x ↦ Mx mod 1`. Exact mode detects eventual periodicity; float
/// mode just records the trajectory.
pub fn orbit(
    map: &IntMatrix,
    start: &TorusPoint,
    steps: usize,
    options: OrbitOptions,
) -> Result<Orbit, ToralError> {
    if start.dim() != map.dim() {
        return Err(ToralError::PointDimension { got: start.dim(), expected: map.dim() });
    }
    match start {
        TorusPoint::Exact(coords) => {
            let cap = BigInt::from(options.denominator_cap);
            let mut seen: std::collections::HashMap<Vec<BigRational>, usize> =
                std::collections::HashMap::new();
            let mut points = Vec::with_capacity(steps + 1);
            let mut current = coords.clone();
            let mut cycle = None;
            for step in 0..=steps {
                for c in &current {
                    if c.denom() > &cap {
                        return Err(ToralError::DenominatorOverflow {
                            denominator: c.denom().to_string(),
                            cap: options.denominator_cap,
                        });
                    }
                }
                if let Some(&first) = seen.get(&current) {
                    cycle = Some((first, step - first));
                    break;
                }
                seen.insert(current.clone(), step);
                points.push(TorusPoint::Exact(current.clone()));
                if step == steps {
                    break;
                }
                current = map
                    .mul_rational_vec(&current)
                    .into_iter()
                    .map(reduce_mod_one)
                    .collect();
            }
            Ok(Orbit { points, cycle })
        }
        TorusPoint::Float(coords) => {
            let m = map.to_float::<f64>();
            let mut points = Vec::with_capacity(steps + 1);
            let mut current = coords.clone();
            points.push(TorusPoint::Float(current.clone()));
            for _ in 0..steps {
                current = m.mul_vec(&current).into_iter().map(|x| x.rem_euclid(1.0)).collect();
                points.push(TorusPoint::Float(current.clone()));
            }
            Ok(Orbit { points, cycle: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use num_traits::Zero;

    fn t3_spec() -> CartanActionSpec<f64> {
        CartanActionSpec::new(samples::t3_pair()).unwrap()
    }

    #[test]
    fn validation_passes_on_the_t3_pair() {
        let report = validate_cartan(&samples::t3_pair(), 20);
        assert!(report.pass(), "diagnostics: {:?}", report.diagnostics);
    }

    #[test]
    fn duplicated_generator_fails_genuineness() {
        let m = samples::cat_map();
        let report = validate_cartan(&[m.clone(), m], 5);
        assert!(!report.genuine);
        assert!(report.diagnostics.iter().any(|d| d.contains("relation found")));
    }

    #[test]
    fn reducible_block_generator_fails_irreducibility() {
        let block = IntMatrix::from_rows(&[
            vec![2, 1, 0],
            vec![1, 1, 0],
            vec![0, 0, 1],
        ]);
        let report = validate_cartan(&[block], 5);
        assert!(!report.irreducible_char_polys);
        // Spectrum {2.618, 1, 0.382} is simple and real, but the eigenvalue
        // 1 kills hyperbolicity.
        assert!(report.distinct_real_spectra);
        assert!(!report.anosov_elements_exist);
    }

    #[test]
    fn element_arithmetic_is_exact() {
        let spec = t3_spec();
        let ab = spec.element(&[1, 1]).unwrap();
        assert_eq!(
            ab,
            IntMatrix::from_rows(&[vec![9, 7, 4], vec![7, 6, 3], vec![4, 3, 2]])
        );
        assert!(spec.element(&[0, 0]).unwrap().is_identity());
        let a_inv = spec.element(&[-1, 0]).unwrap();
        assert!(a_inv.mul(&spec.generators[0]).unwrap().is_identity());
    }

    #[test]
    fn element_is_a_homomorphism() {
        let spec = t3_spec();
        for (m, n) in [([1, 2], [2, -1]), ([-3, 1], [1, 1]), ([0, 2], [-2, 0])] {
            let lhs = spec.element(&[m[0] + n[0], m[1] + n[1]]).unwrap();
            let rhs = spec.element(&m).unwrap().mul(&spec.element(&n).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn entropy_values_match_the_isolated_roots() {
        let spec = t3_spec();
        let h10 = spec.lebesgue_entropy(&[1, 0]).unwrap();
        assert!((h10 - 5.048917f64.ln()).abs() < 1e-4);
        let h01 = spec.lebesgue_entropy(&[0, 1]).unwrap();
        assert!((h01 - 1.6193).abs() < 1e-3);
        assert!(spec.lebesgue_entropy(&[0, 0]).is_err());

        let cat = CartanActionSpec::<f64>::new(vec![samples::cat_map()]).unwrap();
        let h = cat.lebesgue_entropy(&[1]).unwrap();
        assert!((h - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn entropy_is_symmetric_under_inversion() {
        let spec = t3_spec();
        for n in [[1, 0], [0, 1], [2, -3], [5, 7]] {
            let fwd = spec.lebesgue_entropy(&n).unwrap();
            let bwd = spec.lebesgue_entropy(&[-n[0], -n[1]]).unwrap();
            assert!((fwd - bwd).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_orbit_detects_cycles_and_keeps_denominators() {
        let spec = t3_spec();
        let a = &spec.generators[0];
        let fixed = TorusPoint::exact_from_ratios(&[(0, 1), (0, 1), (0, 1)]);
        let o = orbit(a, &fixed, 10, OrbitOptions::default()).unwrap();
        assert_eq!(o.cycle, Some((0, 1)));

        let fifth = TorusPoint::exact_from_ratios(&[(1, 5), (0, 1), (0, 1)]);
        let o = orbit(a, &fifth, 200, OrbitOptions::default()).unwrap();
        assert!(o.cycle.is_some());
        for p in &o.points {
            if let TorusPoint::Exact(coords) = p {
                for c in coords {
                    assert!(
                        BigInt::from(5) % c.denom() == BigInt::zero(),
                        "denominator {} must divide 5",
                        c.denom()
                    );
                }
            }
        }
    }

    #[test]
    fn float_orbit_has_the_requested_shape() {
        let spec = t3_spec();
        let o = orbit(
            &spec.generators[0],
            &TorusPoint::Float(vec![0.1234, 0.777, 0.3]),
            100,
            OrbitOptions::default(),
        )
        .unwrap();
        assert_eq!(o.points.len(), 101);
        for p in &o.points {
            if let TorusPoint::Float(coords) = p {
                assert!(coords.iter().all(|&x| (0.0..1.0).contains(&x)));
            }
        }
    }
}

//! Entropy estimators: dynamical-ball (local) entropy and partition
//! refinement rates, plus the inequality verdicts against the exact
//! multiplicity-weighted sum of positive exponents.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::functionals::FunctionalFamily;
use crate::scalar::Real;

use super::maps::{torus_distance, OrbitSample, TorusMap};
use super::EmpiricalError;

/// Which estimator produced an entropy figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EntropyMethod {
    #[serde(rename = "brin-katok")]
    BrinKatok,
    #[serde(rename = "partition-rate")]
    PartitionRate,
    #[serde(rename = "external")]
    External,
}

/// Entropy estimate with its inequality verdicts for one acting element.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub estimate: f64,
    pub method: EntropyMethod,
    pub sum_positive_exponents: f64,
    /// `estimate ≤ sum + slack`.
    pub margulis_ruelle_ok: bool,
    /// `|estimate − sum| ≤ slack`.
    pub pesin_equality: bool,
    pub slack: f64,
}

/// Compare an entropy estimate with Σ_{λ^j(n)>0} m^j λ^j(n).
pub fn entropy_inequality_report<R: Real>(
    estimate: f64,
    method: EntropyMethod,
    family: &FunctionalFamily<R>,
    n: &[R],
) -> EntropyReport {
    let mut sum = 0.0;
    for (f, &m) in family.functionals.iter().zip(&family.multiplicities) {
        let v = f.evaluate(n).as_f64();
        if v > 0.0 {
            sum += v * m as f64;
        }
    }
    let slack = f64::max(0.05 * sum, 0.02);
    let margulis_ruelle_ok = estimate <= sum + slack;
    let pesin_equality = (estimate - sum).abs() <= slack;
    EntropyReport {
        estimate,
        method,
        sum_positive_exponents: sum,
        margulis_ruelle_ok,
        pesin_equality,
        slack,
    }
}

/// Options for the dynamical-ball estimator.
#[derive(Debug, Clone)]
pub struct BrinKatokOptions {
    pub radii: Vec<f64>,
    /// Longest shadow window.
    pub n_max: usize,
    /// Minimum ball count for a usable data point.
    pub min_count: usize,
    /// Number of orbit positions used as ball centers.
    pub centers: usize,
}

impl Default for BrinKatokOptions {
    fn default() -> Self {
        Self { radii: vec![0.1, 0.05, 0.02, 0.01], n_max: 20, min_count: 30, centers: 8 }
    }
}

/// Slope fit for one radius.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusFit {
    pub radius: f64,
    /// Decay slope of −log μ(B_n(x, r)) in n, averaged over centers.
    pub slope: f64,
    /// Number of centers contributing a fit.
    pub centers_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrinKatokReport {
    pub estimate: f64,
    pub per_radius: Vec<RadiusFit>,
    pub warnings: Vec<String>,
    pub orbit_length: usize,
}

/// Local entropy from the decay rate of dynamical-ball masses along one
/// long orbit: μ(B_n(x,r)) is estimated by the fraction of orbit points
/// that r-shadow x for n steps, its log-linear decay in n is fitted per
/// radius, and radii are combined from the fine end of the schedule.
pub fn brin_katok_entropy(
    orbit: &OrbitSample,
    options: &BrinKatokOptions,
) -> Result<BrinKatokReport, EmpiricalError> {
    let m = orbit.len();
    if m < 10_000 {
        return Err(EmpiricalError::TooShort { needed: 10_000, got: m });
    }
    let n_max = options.n_max.min(m / 2);
    let usable = m - n_max;
    let centers: Vec<usize> =
        (0..options.centers).map(|c| (c * usable) / options.centers + n_max / 2).collect();

    let mut warnings = Vec::new();
    let mut per_radius = Vec::new();
    for &radius in &options.radii {
        // Shadow-length census per center, parallel over centers with an
        // index-ordered merge.
        let fits: Vec<Option<f64>> = centers
            .par_iter()
            .map(|&c| center_slope(orbit, c, radius, n_max, usable, options.min_count))
            .collect();
        let valid: Vec<f64> = fits.iter().flatten().copied().collect();
        if valid.is_empty() {
            warnings.push(format!(
                "radius {radius}: ball counts fell below {} before a slope could be fitted; widen the radius",
                options.min_count
            ));
            continue;
        }
        let slope = valid.iter().sum::<f64>() / valid.len() as f64;
        per_radius.push(RadiusFit { radius, slope, centers_used: valid.len() });
    }
    if per_radius.is_empty() {
        return Err(EmpiricalError::NoUsableRadii);
    }
    // Prefer the finest radii that still produced fits.
    let mut sorted = per_radius.clone();
    sorted.sort_by(|a, b| a.radius.partial_cmp(&b.radius).expect("finite radii"));
    let finest: Vec<f64> = sorted.iter().take(2).map(|f| f.slope).collect();
    let estimate = finest.iter().sum::<f64>() / finest.len() as f64;
    let slopes: Vec<f64> = per_radius.iter().map(|f| f.slope).collect();
    let spread = slopes.iter().cloned().fold(f64::MIN, f64::max)
        - slopes.iter().cloned().fold(f64::MAX, f64::min);
    if per_radius.len() >= 2 && spread > 0.3 * estimate.abs().max(0.1) {
        warnings.push(format!(
            "radius trend is wide (spread {spread:.4}); inspect per_radius rather than the single estimate"
        ));
    }
    Ok(BrinKatokReport { estimate, per_radius, warnings, orbit_length: m })
}

fn center_slope(
    orbit: &OrbitSample,
    center: usize,
    radius: f64,
    n_max: usize,
    usable: usize,
    min_count: usize,
) -> Option<f64> {
    let points = &orbit.points;
    // counts[n] = #{i : the window of length n+1 at i shadows the center}.
    let mut counts = vec![0usize; n_max];
    for i in 0..usable {
        let mut len = 0;
        while len < n_max && torus_distance(&points[i + len], &points[center + len]) < radius {
            len += 1;
        }
        for c in counts.iter_mut().take(len) {
            *c += 1;
        }
    }
    // The first window length carries the ball-shape transient (the square
    // ball morphs into the invariant parallelepiped); the decay law holds
    // from the second length on.
    let usable_points: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .take_while(|&(_, &c)| c >= min_count)
        .skip(1)
        .map(|(n, &c)| ((n + 1) as f64, -((c as f64 / usable as f64).ln())))
        .collect();
    if usable_points.len() < 3 {
        return None;
    }
    Some(least_squares_slope(&usable_points))
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Report of the partition refinement rate.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionRateReport {
    /// Bias-corrected block entropies H(depth), nats.
    pub block_entropies: Vec<f64>,
    /// Differences H(d) − H(d−1).
    pub differences: Vec<f64>,
    /// Distinct words seen at each depth.
    pub distinct_words: Vec<usize>,
    /// Stabilized difference: the entropy rate estimate.
    pub stabilized: f64,
    pub samples: usize,
}

/// Entropy rate of `map` relative to the coordinate-box partition with
/// `cells_per_dim` cells per coordinate: block entropies of itineraries up
/// to `depth`, Miller–Madow corrected, with the stabilized difference taken
/// over unsaturated depths (distinct words ≪ samples).
pub fn partition_entropy_rate(
    map: &TorusMap,
    cells_per_dim: usize,
    depth: usize,
    samples: usize,
    seed: u64,
) -> Result<PartitionRateReport, EmpiricalError> {
    if depth < 2 {
        return Err(EmpiricalError::TooShort { needed: 2, got: depth });
    }
    let dim = map.dim();
    let base = (cells_per_dim as u128).pow(dim as u32);
    // Word must fit in the u128 accumulator.
    if (depth as f64) * (base as f64).log2() > 120.0 {
        return Err(EmpiricalError::WordTooLong { depth, cells: cells_per_dim });
    }
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut words: BTreeMap<u128, usize> = BTreeMap::new();
    for _ in 0..samples {
        let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mut word: u128 = 0;
        for _ in 0..depth {
            let mut cell: u128 = 0;
            for &c in &x {
                let idx = ((c * cells_per_dim as f64) as usize).min(cells_per_dim - 1);
                cell = cell * cells_per_dim as u128 + idx as u128;
            }
            word = word * base + cell;
            x = map.apply(&x);
        }
        *words.entry(word).or_insert(0) += 1;
    }

    let mut block_entropies = Vec::with_capacity(depth);
    let mut distinct_words = Vec::with_capacity(depth);
    let mut level: BTreeMap<u128, usize> = words;
    let mut per_depth: Vec<(f64, usize)> = Vec::new();
    for _ in 0..depth {
        per_depth.push((corrected_entropy(&level, samples), level.len()));
        let mut coarser: BTreeMap<u128, usize> = BTreeMap::new();
        for (&w, &c) in &level {
            *coarser.entry(w / base).or_insert(0) += c;
        }
        level = coarser;
    }
    per_depth.reverse();
    for (h, k) in per_depth {
        block_entropies.push(h);
        distinct_words.push(k);
    }

    let differences: Vec<f64> = block_entropies
        .iter()
        .enumerate()
        .map(|(i, &h)| if i == 0 { h } else { h - block_entropies[i - 1] })
        .collect();
    // Saturated depths (too many words for the sample size) underestimate
    // the difference; average the last few clean ones.
    let unsaturated: Vec<usize> =
        (0..depth).filter(|&d| distinct_words[d] * 50 <= samples).collect();
    let chosen: Vec<usize> = if unsaturated.is_empty() {
        vec![0]
    } else {
        unsaturated.iter().rev().take(3).copied().collect()
    };
    let stabilized =
        chosen.iter().map(|&d| differences[d]).sum::<f64>() / chosen.len() as f64;
    Ok(PartitionRateReport { block_entropies, differences, distinct_words, stabilized, samples })
}

/// Plug-in entropy with the Miller–Madow bias correction.
fn corrected_entropy(counts: &BTreeMap<u128, usize>, samples: usize) -> f64 {
    let m = samples as f64;
    let h: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / m;
            -p * p.ln()
        })
        .sum();
    h + (counts.len() as f64 - 1.0) / (2.0 * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::empirical::maps::{bernoulli_doubling_orbit, lebesgue_orbit, orbit_from, Continuation};
    use crate::functionals::LinearFunctional;
    use crate::samples;

    #[test]
    fn doubling_map_local_entropy_is_log_two() {
        let orbit = lebesgue_orbit(&TorusMap::doubling(), 100_000, 12);
        let report = brin_katok_entropy(&orbit, &BrinKatokOptions::default()).unwrap();
        let target = 2f64.ln();
        assert!(
            (report.estimate - target).abs() < 0.05 * target,
            "estimate {} target {target}",
            report.estimate
        );
    }

    #[test]
    fn periodic_orbit_has_zero_local_entropy() {
        let orbit = orbit_from(&TorusMap::doubling(), &[0.0], 20_000, Continuation::Exact);
        let report = brin_katok_entropy(&orbit, &BrinKatokOptions::default()).unwrap();
        assert!(report.estimate.abs() < 1e-3, "estimate {}", report.estimate);
    }

    #[test]
    fn cat_map_local_entropy_matches_the_top_exponent() {
        let map = TorusMap::Auto { matrix: samples::cat_map() };
        let orbit = lebesgue_orbit(&map, 100_000, 4);
        let report = brin_katok_entropy(&orbit, &BrinKatokOptions::default()).unwrap();
        let target = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(
            (report.estimate - target).abs() < 0.1 * target,
            "estimate {} target {target}",
            report.estimate
        );
    }

    #[test]
    fn partition_rate_recovers_bernoulli_entropies() {
        let doubling = partition_entropy_rate(&TorusMap::doubling(), 2, 20, 200_000, 7).unwrap();
        assert!(
            (doubling.stabilized - 2f64.ln()).abs() < 0.02 * 2f64.ln(),
            "stabilized {}",
            doubling.stabilized
        );

        let tripling =
            partition_entropy_rate(&TorusMap::Times { factor: 3 }, 3, 20, 200_000, 7).unwrap();
        assert!(
            (tripling.stabilized - 3f64.ln()).abs() < 0.02 * 3f64.ln(),
            "stabilized {}",
            tripling.stabilized
        );
    }

    #[test]
    fn identity_map_has_zero_rate() {
        let r = partition_entropy_rate(&TorusMap::Identity { dim: 1 }, 2, 10, 50_000, 3).unwrap();
        assert!(r.stabilized.abs() < 1e-6, "stabilized {}", r.stabilized);
    }

    #[test]
    fn difference_sequence_is_monotone_up_to_noise() {
        let r = partition_entropy_rate(&TorusMap::doubling(), 2, 16, 100_000, 5).unwrap();
        for w in r.differences.windows(2) {
            assert!(w[1] <= w[0] + 1e-2, "conditional entropy increased: {w:?}");
        }
    }

    #[test]
    fn inequality_verdicts() {
        let cat = LinearFunctional::new(vec![((3.0 + 5f64.sqrt()) / 2.0).ln()], "top");
        let neg = LinearFunctional::new(vec![((3.0 - 5f64.sqrt()) / 2.0).ln()], "bottom");
        let family = FunctionalFamily::new(vec![cat, neg], vec![1, 1], true);

        let lebesgue = entropy_inequality_report(0.96, EntropyMethod::External, &family, &[1.0]);
        assert!(lebesgue.pesin_equality && lebesgue.margulis_ruelle_ok);

        let atomic = entropy_inequality_report(0.0, EntropyMethod::External, &family, &[1.0]);
        assert!(atomic.margulis_ruelle_ok && !atomic.pesin_equality);

        let inflated = entropy_inequality_report(2.0, EntropyMethod::External, &family, &[1.0]);
        assert!(!inflated.margulis_ruelle_ok);
    }

    #[test]
    fn bernoulli_sampling_shows_strict_inequality() {
        let p = 0.9f64;
        let orbit = bernoulli_doubling_orbit(p, 100_000, 2);
        let report = brin_katok_entropy(&orbit, &BrinKatokOptions::default()).unwrap();
        let expected = -(p * p.ln() + (1.0 - p) * (1.0 - p).ln());
        assert!(
            (report.estimate - expected).abs() < 0.2 * expected,
            "estimate {} expected {expected}",
            report.estimate
        );
        assert!(report.estimate < 2f64.ln() - 0.02);
    }
}

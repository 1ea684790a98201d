//! Certified real spectra by Sturm isolation and rational bisection.
//!
//! Each root of the characteristic polynomial gets an isolating rational
//! interval certified by a sign change at its endpoints, refined by
//! bisection to width ≤ 10⁻¹², then polished with a single float Newton
//! step for the reported midpoint. Repeated or complex roots are rejected:
//! the toral generators we accept must split with distinct real eigenvalues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CharPoly, ExactError};

/// Target isolating-interval width, 10⁻¹².
fn target_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

/// One isolated simple real root.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Newton-polished float midpoint, guaranteed inside `[lo, hi]`.
    pub midpoint: f64,
}

impl IsolatedRoot {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Certified real spectrum, roots sorted descending.
#[derive(Debug, Clone)]
pub struct RealSpectrum {
    pub roots: Vec<IsolatedRoot>,
    pub multiplicities: Vec<usize>,
}

impl RealSpectrum {
    /// Isolate all roots of `p`; errors unless `p` has `degree` distinct
    /// real roots.
    pub fn isolate(p: &CharPoly) -> Result<Self, ExactError> {
        let d = p.degree();
        let chain = sturm_chain(p);
        if chain.first().map(|c| polynomial_degree(c)) != Some(d) {
            return Err(ExactError::NotRealSplit {
                reason: "repeated roots: polynomial is not squarefree".into(),
            });
        }
        let bound = p.cauchy_bound();
        let lo = -bound.clone();
        let hi = bound;
        let total = count_roots(&chain, &lo, &hi);
        if total != d {
            return Err(ExactError::NotRealSplit {
                reason: format!("{total} real roots, expected {d}: complex spectrum"),
            });
        }
        let mut intervals = Vec::new();
        isolate_rec(&chain, lo, hi, &mut intervals);
        debug_assert_eq!(intervals.len(), d);
        let mut roots: Vec<IsolatedRoot> =
            intervals.into_iter().map(|(a, b)| refine(p, a, b)).collect();
        roots.sort_by(|x, y| y.midpoint.partial_cmp(&x.midpoint).expect("finite midpoints"));
        let multiplicities = vec![1; roots.len()];
        Ok(Self { roots, multiplicities })
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.midpoint).collect()
    }

    /// Product of midpoints; for a unimodular generator this must land
    /// within 10⁻⁹ of ±1.
    pub fn midpoint_product(&self) -> f64 {
        self.roots.iter().map(|r| r.midpoint).product()
    }

    /// Index of the root whose midpoint is closest to `value`.
    pub fn nearest_root(&self, value: f64) -> usize {
        let mut best = 0;
        let mut gap = f64::INFINITY;
        for (i, r) in self.roots.iter().enumerate() {
            let d = (r.midpoint - value).abs();
            if d < gap {
                gap = d;
                best = i;
            }
        }
        best
    }
}

type RatPoly = Vec<BigRational>;

fn polynomial_degree(p: &RatPoly) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn eval(p: &RatPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn rat_poly(p: &CharPoly) -> RatPoly {
    p.coeffs().iter().map(|c| BigRational::from(c.clone())).collect()
}

fn trim(mut p: RatPoly) -> RatPoly {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn neg_rem(num: &RatPoly, den: &RatPoly) -> RatPoly {
    let mut rem = num.clone();
    let dd = polynomial_degree(den);
    let lead = den[dd].clone();
    while polynomial_degree(&rem) >= dd && rem.iter().any(|c| !c.is_zero()) {
        let rd = polynomial_degree(&rem);
        if rd < dd {
            break;
        }
        let factor = &rem[rd] / &lead;
        if factor.is_zero() {
            break;
        }
        let shift = rd - dd;
        for k in 0..=dd {
            let sub = &factor * &den[k];
            rem[shift + k] = &rem[shift + k] - sub;
        }
        rem[rd] = BigRational::zero();
        rem = trim(rem);
        if polynomial_degree(&rem) == 0 {
            break;
        }
    }
    rem.into_iter().map(|c| -c).collect()
}

/// Sturm chain of `p`; empty leading chain signals a repeated root.
fn sturm_chain(p: &CharPoly) -> Vec<RatPoly> {
    let p0 = rat_poly(p);
    let p1: RatPoly = p.derivative().into_iter().map(BigRational::from).collect();
    let mut chain = vec![p0, trim(p1)];
    loop {
        let n = chain.len();
        let prev = &chain[n - 2];
        let last = &chain[n - 1];
        if polynomial_degree(last) == 0 && last.iter().all(|c| c.is_zero()) {
            // gcd(p, p') is nonconstant: repeated root. Signal by returning
            // a chain whose head lost degree.
            return vec![vec![BigRational::zero()]];
        }
        if polynomial_degree(last) == 0 {
            return chain;
        }
        let next = trim(neg_rem(prev, last));
        if next.iter().all(|c| c.is_zero()) {
            return vec![vec![BigRational::zero()]];
        }
        chain.push(next);
    }
}

fn sign_variations(chain: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(lo, hi]`.
fn count_roots(chain: &[RatPoly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_variations(chain, lo) - sign_variations(chain, hi)
}

fn isolate_rec(
    chain: &[RatPoly],
    lo: BigRational,
    hi: BigRational,
    out: &mut Vec<(BigRational, BigRational)>,
) {
    let n = count_roots(chain, &lo, &hi);
    match n {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mid = (&lo + &hi) / BigRational::from(BigInt::from(2));
            isolate_rec(chain, lo, mid.clone(), out);
            isolate_rec(chain, mid, hi, out);
        }
    }
}

/// Bisect a sign-change interval to the target width, then polish the float
/// midpoint with one Newton step (clamped back into the interval).
fn refine(p: &CharPoly, mut lo: BigRational, mut hi: BigRational) -> IsolatedRoot {
    // Sturm isolates over half-open intervals (lo, hi]. A zero sign at hi
    // means the root is exactly hi; a zero sign at lo is a neighboring
    // root, stepped over by nudging inward.
    if p.sign_at(&hi) == 0 {
        let half_width = target_width() / BigRational::from(BigInt::from(2));
        let exact = hi.to_f64().expect("root fits in f64");
        return IsolatedRoot { lo: &hi - &half_width, hi: &hi + &half_width, midpoint: exact };
    }
    let mut slo = p.sign_at(&lo);
    let shi = p.sign_at(&hi);
    if slo == 0 {
        let mut step = (&hi - &lo) / BigRational::from(BigInt::from(4));
        let two = BigRational::from(BigInt::from(2));
        loop {
            let candidate = &lo + &step;
            let s = p.sign_at(&candidate);
            if s != 0 && s != shi {
                lo = candidate;
                slo = s;
                break;
            }
            step = step / &two;
        }
    }
    debug_assert_ne!(slo, shi, "isolating interval must bracket a sign change");
    let width = target_width();
    let two = BigRational::from(BigInt::from(2));
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        let smid = p.sign_at(&mid);
        if smid == 0 {
            // Rational root hit exactly; shrink symmetrically around it.
            let quarter = (&hi - &lo) / BigRational::from(BigInt::from(4));
            lo = &mid - &quarter;
            hi = &mid + &quarter;
            if p.sign_at(&lo) == p.sign_at(&hi) {
                break;
            }
            continue;
        }
        if smid == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let approx = ((&lo + &hi) / &two).to_f64().expect("midpoint fits in f64");
    let newton = {
        let fx = p.evaluate_f64(approx);
        let dfx = p.derivative_f64(approx);
        if dfx != 0.0 {
            approx - fx / dfx
        } else {
            approx
        }
    };
    let lo_f = lo.to_f64().expect("fits");
    let hi_f = hi.to_f64().expect("fits");
    let midpoint = if newton.is_finite() { newton.clamp(lo_f, hi_f) } else { approx };
    IsolatedRoot { lo, hi, midpoint }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{t3_first, t3_second};
    use crate::exact::IntMatrix;

    /// Independent oracle: plain f64 bisection on the polynomial, started
    /// from a coarse scan.
    fn bisect_roots(p: &CharPoly, lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        let mut roots = Vec::new();
        let n = 20_000;
        let h = (hi - lo) / n as f64;
        let mut x0 = lo;
        let mut f0 = p.evaluate_f64(x0);
        for k in 1..=n {
            let x1 = lo + h * k as f64;
            let f1 = p.evaluate_f64(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut a, mut b) = (x0, x1);
                for _ in 0..steps {
                    let m = 0.5 * (a + b);
                    if p.evaluate_f64(a) * p.evaluate_f64(m) <= 0.0 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            x0 = x1;
            f0 = f1;
        }
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        roots
    }

    #[test]
    fn isolates_the_t3_cubics() {
        let pa = CharPoly::of_matrix(&t3_first());
        let sa = RealSpectrum::isolate(&pa).unwrap();
        let oracle = bisect_roots(&pa, -7.0, 7.0, 80);
        assert_eq!(sa.roots.len(), 3);
        for (r, o) in sa.midpoints().iter().zip(&oracle) {
            assert!((r - o).abs() < 1e-9, "certified {r} vs oracle {o}");
        }
        // Frozen from the oracle.
        assert!((sa.midpoints()[0] - 5.048917).abs() < 1e-5);
        assert!((sa.midpoints()[1] - 0.643104).abs() < 1e-5);
        assert!((sa.midpoints()[2] - 0.307979).abs() < 1e-5);
        assert!((sa.midpoint_product() - 1.0).abs() < 1e-9);
        for r in &sa.roots {
            assert!(r.width() <= target_width());
            assert_ne!(pa.sign_at(&r.lo), pa.sign_at(&r.hi));
        }

        let pb = CharPoly::of_matrix(&t3_second());
        let sb = RealSpectrum::isolate(&pb).unwrap();
        assert!((sb.midpoints()[0] - 3.246980).abs() < 1e-5);
        assert!((sb.midpoints()[1] - 1.554958).abs() < 1e-5);
        assert!((sb.midpoints()[2] - 0.198062).abs() < 1e-5);
    }

    #[test]
    fn quadratic_roots_match_closed_form() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        let s = RealSpectrum::isolate(&CharPoly::of_matrix(&m)).unwrap();
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((s.midpoints()[0] - golden).abs() < 1e-12);
        assert!((s.midpoints()[1] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_complex_and_repeated_spectra() {
        let rotation = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
        let err = RealSpectrum::isolate(&CharPoly::of_matrix(&rotation));
        assert!(matches!(err, Err(ExactError::NotRealSplit { .. })));

        let shear = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let err = RealSpectrum::isolate(&CharPoly::of_matrix(&shear));
        assert!(matches!(err, Err(ExactError::NotRealSplit { .. })));
    }

    #[test]
    fn exact_rational_root_still_isolates() {
        // (x−1)(x−2) = x² − 3x + 2: integer roots hit bisection midpoints.
        let p = CharPoly::from_i64_coeffs(&[2, -3, 1]);
        let s = RealSpectrum::isolate(&p).unwrap();
        assert!((s.midpoints()[0] - 2.0).abs() < 1e-9);
        assert!((s.midpoints()[1] - 1.0).abs() < 1e-9);
    }
}

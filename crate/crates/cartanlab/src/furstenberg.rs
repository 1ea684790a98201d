//! ×a×b circle dynamics: multiplicative independence, exact rational
//! orbits, the gap-ratio profile of the product set {a^m b^n}, and density
//! probes of {s·x mod 1}.

use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FurstenbergError {
    #[error("inputs must be at least 2, got {0}")]
    InputTooSmall(u64),
    #[error("{a} and {b} are multiplicatively dependent")]
    Dependent { a: u64, b: u64 },
    #[error("bound {bound} is below a*b = {ab}")]
    BoundTooSmall { bound: u64, ab: u64 },
}

/// Exact multiplicative independence: no common base c with a = c^p, b = c^q.
pub fn multiplicatively_independent(a: u64, b: u64) -> Result<bool, FurstenbergError> {
    if a < 2 {
        return Err(FurstenbergError::InputTooSmall(a));
    }
    if b < 2 {
        return Err(FurstenbergError::InputTooSmall(b));
    }
    let fa = factorize(a);
    let fb = factorize(b);
    if fa.iter().map(|&(p, _)| p).ne(fb.iter().map(|&(p, _)| p)) {
        // Different prime supports can never be powers of a common base.
        return Ok(true);
    }
    // Same support: dependent iff the exponent vectors are proportional.
    let proportional = fa
        .iter()
        .zip(&fb)
        .all(|(&(_, e), &(_, f))| (e as u128) * (fb[0].1 as u128) == (f as u128) * (fa[0].1 as u128));
    Ok(!proportional)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Closure of `{1}` under multiplication by `a` and `b` in ℤ/qℤ: the exact
/// orbit of `1/q` under the ×a×b semigroup.
pub fn furstenberg_rational_orbit(a: u64, b: u64, q: u64) -> BTreeSet<u64> {
    if q <= 1 {
        return std::iter::once(0).collect();
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![1 % q];
    while let Some(r) = stack.pop() {
        if !seen.insert(r) {
            continue;
        }
        stack.push((r as u128 * a as u128 % q as u128) as u64);
        stack.push((r as u128 * b as u128 % q as u128) as u64);
    }
    seen
}

/// Sorted products {a^m b^n ≤ bound}.
pub fn product_set(a: u64, b: u64, bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut pa: u64 = 1;
    loop {
        let mut s = pa;
        loop {
            out.push(s);
            match s.checked_mul(b) {
                Some(next) if next <= bound => s = next,
                _ => break,
            }
        }
        match pa.checked_mul(a) {
            Some(next) if next <= bound => pa = next,
            _ => break,
        }
    }
    out.sort_unstable();
    out
}

/// Max consecutive ratio over one window of the product set.
#[derive(Debug, Clone, Serialize)]
pub struct WindowStat {
    pub lo: u64,
    pub hi: u64,
    pub max_ratio: f64,
    pub pairs: usize,
}

/// Gap-ratio profile of the sorted product set {a^m b^n ≤ bound}.
#[derive(Debug, Clone, Serialize)]
pub struct FurstenbergProfile {
    pub a: u64,
    pub b: u64,
    pub bound: u64,
    pub count: usize,
    /// First few products, for report readability.
    pub head: Vec<u64>,
    /// Consecutive ratios s_{k+1}/s_k.
    pub ratios: Vec<f64>,
    /// Max ratio per decade window [10^d, 10^{d+1}).
    pub windows: Vec<WindowStat>,
}

pub fn gap_ratio_profile(a: u64, b: u64, bound: u64) -> Result<FurstenbergProfile, FurstenbergError> {
    if !multiplicatively_independent(a, b)? {
        return Err(FurstenbergError::Dependent { a, b });
    }
    if bound < a * b {
        return Err(FurstenbergError::BoundTooSmall { bound, ab: a * b });
    }
    let products = product_set(a, b, bound);
    let ratios: Vec<f64> = products
        .windows(2)
        .map(|w| w[1] as f64 / w[0] as f64)
        .collect();
    let mut windows = Vec::new();
    let mut lo: u64 = 10;
    while lo < bound {
        let hi = (lo.saturating_mul(10)).min(bound);
        let mut max_ratio: f64 = 1.0;
        let mut pairs = 0;
        for (k, w) in products.windows(2).enumerate() {
            if w[0] >= lo && w[0] < hi {
                max_ratio = max_ratio.max(ratios[k]);
                pairs += 1;
            }
        }
        if pairs > 0 {
            windows.push(WindowStat { lo, hi, max_ratio, pairs });
        }
        lo = hi;
        if hi == bound {
            break;
        }
    }
    let head = products.iter().take(12).copied().collect();
    Ok(FurstenbergProfile { a, b, bound, count: products.len(), head, ratios, windows })
}

impl FurstenbergProfile {
    /// Max ratio over products in `[lo, hi)`.
    pub fn max_ratio_in(&self, lo: u64, hi: u64) -> Option<f64> {
        let products = product_set(self.a, self.b, self.bound);
        let mut max: Option<f64> = None;
        for w in products.windows(2) {
            if w[0] >= lo && w[0] < hi {
                let r = w[1] as f64 / w[0] as f64;
                max = Some(max.map_or(r, |m: f64| m.max(r)));
            }
        }
        max
    }
}

/// Orbit density probe: circular gaps of {s·x mod 1 : s in the product set}.
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub a: u64,
    pub b: u64,
    pub bound: u64,
    pub x: f64,
    pub points: usize,
    pub max_gap: f64,
}

pub fn density_profile(a: u64, b: u64, x: f64, bound: u64) -> Result<DensityProfile, FurstenbergError> {
    if !multiplicatively_independent(a, b)? {
        return Err(FurstenbergError::Dependent { a, b });
    }
    let products = product_set(a, b, bound);
    let mut circle: Vec<f64> = products.iter().map(|&s| (s as f64 * x).rem_euclid(1.0)).collect();
    circle.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    circle.dedup();
    Ok(DensityProfile { a, b, bound, x, points: circle.len(), max_gap: max_circular_gap(&circle) })
}

/// Exact density probe for rational `x = p/q`: orbit points are the
/// residues `s·p mod q` over the product set, so the point count and gap
/// come out exactly.
pub fn density_profile_rational(
    a: u64,
    b: u64,
    p: u64,
    q: u64,
    bound: u64,
) -> Result<DensityProfile, FurstenbergError> {
    if !multiplicatively_independent(a, b)? {
        return Err(FurstenbergError::Dependent { a, b });
    }
    let residues: BTreeSet<u64> = product_set(a, b, bound)
        .iter()
        .map(|&s| ((s as u128 * p as u128) % q as u128) as u64)
        .collect();
    let circle: Vec<f64> = residues.iter().map(|&r| r as f64 / q as f64).collect();
    Ok(DensityProfile {
        a,
        b,
        bound,
        x: p as f64 / q as f64,
        points: circle.len(),
        max_gap: max_circular_gap(&circle),
    })
}

/// Largest gap between consecutive points of a sorted subset of the circle.
pub fn max_circular_gap(sorted: &[f64]) -> f64 {
    match sorted.len() {
        0 => 1.0,
        1 => 1.0,
        _ => {
            let mut max = 1.0 - sorted.last().unwrap() + sorted.first().unwrap();
            for w in sorted.windows(2) {
                max = f64::max(max, w[1] - w[0]);
            }
            max
        }
    }
}

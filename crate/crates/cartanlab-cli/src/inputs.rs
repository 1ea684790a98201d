//! Input file schemas and argument parsing helpers.

use std::path::Path;

use anyhow::{bail, Context};
use cartanlab::exact::IntMatrix;
use cartanlab::toral::TorusPoint;
use serde::Deserialize;

/// Action spec file: `{"generators": [[[int]]], "labels": [string]}`.
#[derive(Deserialize)]
pub struct SpecFile {
    pub generators: Vec<Vec<Vec<i64>>>,
    /// Optional display names, echoed back in reports.
    #[serde(default)]
    pub labels: Vec<String>,
}

impl SpecFile {
    pub fn load(path: &Path) -> anyhow::Result<SpecFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading spec file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("spec file {}: schema error", path.display()))
    }
}

impl SpecFile {
    pub fn matrices(&self) -> anyhow::Result<Vec<IntMatrix>> {
        if self.generators.is_empty() {
            bail!("spec field `generators` is empty");
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let dim = rows.len();
                if rows.iter().any(|r| r.len() != dim) {
                    bail!("spec field `generators[{k}]` is not a square matrix");
                }
                Ok(IntMatrix::from_rows(rows))
            })
            .collect()
    }
}

pub fn load_spec(path: &Path) -> anyhow::Result<Vec<IntMatrix>> {
    SpecFile::load(path)?.matrices()
}

/// Matrix file: the exact-algebra wire form `{"dim": d, "entries": [[..]]}`.
pub fn load_matrix(path: &Path) -> anyhow::Result<IntMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading matrix file {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("matrix file {}: schema error", path.display()))
}

/// Comma-separated integer vector, e.g. `1,0` or `-2,3`.
pub fn parse_element(s: &str) -> anyhow::Result<Vec<i64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .with_context(|| format!("element component `{part}` is not an integer"))
        })
        .collect()
}

/// Comma-separated float vector.
pub fn parse_floats(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("component `{part}` is not a number"))
        })
        .collect()
}

/// Torus point: components either `p/q` rationals (exact mode) or floats.
pub fn parse_point(s: &str, exact: bool) -> anyhow::Result<TorusPoint> {
    if exact {
        let ratios: anyhow::Result<Vec<(i64, i64)>> = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                match part.split_once('/') {
                    Some((p, q)) => Ok((
                        p.trim().parse::<i64>().context("bad numerator")?,
                        q.trim().parse::<i64>().context("bad denominator")?,
                    )),
                    None => Ok((part.parse::<i64>().context("bad integer coordinate")?, 1)),
                }
            })
            .collect();
        Ok(TorusPoint::exact_from_ratios(&ratios?))
    } else {
        Ok(TorusPoint::Float(
            parse_floats(s)?.into_iter().map(|x| x.rem_euclid(1.0)).collect(),
        ))
    }
}

/// `p/q` rational, used by the density command to trigger the exact route.
pub fn parse_rational(s: &str) -> Option<(u64, u64)> {
    let (p, q) = s.split_once('/')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

/// Root label `i,j`, 1-based.
pub fn parse_root(s: &str) -> anyhow::Result<(usize, usize)> {
    let Some((i, j)) = s.split_once(',') else {
        bail!("root must look like `1,2`");
    };
    Ok((i.trim().parse().context("bad root index")?, j.trim().parse().context("bad root index")?))
}

/// Semicolon-separated root list: `1,2;2,1`.
pub fn parse_roots(s: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    s.split(';').map(|part| parse_root(part.trim())).collect()
}

//! Command handlers: thin layers binding the library to JSON reports.

use std::path::Path;

use anyhow::{bail, Context};
use serde_json::{json, Value};

use cartanlab::chambers::{sign_chambers, ChamberDiagram};
use cartanlab::empirical::{
    brin_katok_entropy, entropy_inequality_report, lebesgue_orbit, orbit_from,
    partition_entropy_rate, qr_oseledec, shear_probe, subexp_growth_probe, top_lyapunov_estimate,
    BrinKatokOptions, Cocycle, Continuation, EntropyMethod, ShearMeasureSpec, TorusMap,
};
use cartanlab::exact::FrameOptions;
use cartanlab::functionals::{FunctionalFamily, LinearFunctional};
use cartanlab::furstenberg::{
    density_profile, density_profile_rational, furstenberg_rational_orbit, gap_ratio_profile,
};
use cartanlab::linalg::SquareMatrix;
use cartanlab::samples;
use cartanlab::sl::{
    averaging_schedule_sl3, kak_decompose, lie_closure, random_unimodular, resonance_classify,
    root_bracket, CartanElement, ClosureSeed, RootDatum, ScheduleElements,
};
use cartanlab::suspension::SuspensionSpec;
use cartanlab::svg::{chamber_svg, polyline_plot};
use cartanlab::toral::{orbit, validate_cartan, CartanActionSpec, OrbitOptions, TorusPoint};

use crate::inputs::{
    load_matrix, load_spec, parse_element, parse_floats, parse_point, parse_rational, parse_roots,
};
use crate::report::{write_atomic, RunReport};
use crate::{
    Command, Common, EntropyAction, FurstenbergAction, GrowthAction, LyapunovAction, RootsAction,
    ShearAction, SuspensionAction,
};

pub fn dispatch(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Validate { common, spec, bound } => validate(common, &spec, bound),
        Command::Chambers { common, spec } => chambers(common, &spec),
        Command::Entropy { action } => entropy(action),
        Command::Orbit { common, spec, element, matrix, point, steps, mode } => {
            orbit_cmd(common, spec.as_deref(), element.as_deref(), matrix.as_deref(), &point, steps, &mode)
        }
        Command::Furstenberg { action } => furstenberg(action),
        Command::Suspension { action } => suspension(action),
        Command::Roots { action } => roots(action),
        Command::Lyapunov { action } => lyapunov(action),
        Command::Shear { action } => shear(action),
        Command::Growth { action } => growth(action),
    }
}

fn frame_options(common: &Common) -> FrameOptions {
    FrameOptions {
        residual_tol: common.tolerance.unwrap_or(1e-8),
        ..FrameOptions::default()
    }
}

fn action_spec(path: &Path, common: &Common) -> anyhow::Result<CartanActionSpec<f64>> {
    let generators = load_spec(path)?;
    CartanActionSpec::with_options(generators, frame_options(common))
        .context("building the action's spectra and frame")
}

fn validate(common: Common, spec_path: &Path, bound: i64) -> anyhow::Result<u8> {
    let file = crate::inputs::SpecFile::load(spec_path)?;
    let generators = file.matrices()?;
    let report = validate_cartan(&generators, bound);
    let pass = report.pass();
    let run = RunReport::new(
        "validate",
        common.seed,
        json!({
            "spec": spec_path.display().to_string(),
            "bound": bound,
            "labels": file.labels,
            "generators": generators,
        }),
        serde_json::to_value(&report)?,
    );
    run.emit(common.json.as_deref())?;
    Ok(if pass { 0 } else { 2 })
}

fn chambers(common: Common, spec_path: &Path) -> anyhow::Result<u8> {
    let action = action_spec(spec_path, &common)?;
    let results = if action.rank() == 2 {
        let diagram = ChamberDiagram::build(&action.family).context("chamber enumeration")?;
        if let Some(svg_path) = common.svg.as_deref() {
            write_atomic(svg_path, chamber_svg(&diagram).as_bytes())?;
        }
        json!({
            "rank": 2,
            "count": diagram.count(),
            "diagram": diagram,
        })
    } else {
        let chambers = sign_chambers(&action.family).context("chamber enumeration")?;
        json!({
            "rank": action.rank(),
            "count": chambers.len(),
            "chambers": chambers,
        })
    };
    RunReport::new(
        "chambers",
        common.seed,
        json!({ "spec": spec_path.display().to_string() }),
        results,
    )
    .emit(common.json.as_deref())?;
    Ok(0)
}

fn parse_map(s: &str) -> anyhow::Result<TorusMap> {
    if s == "doubling" {
        return Ok(TorusMap::doubling());
    }
    if s == "cat" {
        return Ok(TorusMap::Auto { matrix: samples::cat_map() });
    }
    if let Some(rest) = s.strip_prefix("times:") {
        return Ok(TorusMap::Times { factor: rest.parse().context("bad factor")? });
    }
    if let Some(rest) = s.strip_prefix("identity:") {
        return Ok(TorusMap::Identity { dim: rest.parse().context("bad dimension")? });
    }
    if let Some(rest) = s.strip_prefix("auto:") {
        return Ok(TorusMap::Auto { matrix: load_matrix(Path::new(rest))? });
    }
    bail!("unknown map `{s}`; use doubling | times:K | cat | identity:D | auto:PATH")
}

/// Functional family of a map, for the inequality verdicts.
fn family_for_map(map: &TorusMap) -> anyhow::Result<(FunctionalFamily<f64>, Vec<f64>)> {
    match map {
        TorusMap::Times { factor } => Ok((
            FunctionalFamily::new(
                vec![LinearFunctional::new(vec![(*factor as f64).ln()], "expansion")],
                vec![1],
                false,
            ),
            vec![1.0],
        )),
        TorusMap::Auto { matrix } => {
            let action = CartanActionSpec::<f64>::new(vec![matrix.clone()])
                .context("map spectrum for the exponent sum")?;
            Ok((action.family, vec![1.0]))
        }
        TorusMap::Identity { .. } => Ok((
            FunctionalFamily::new(
                vec![LinearFunctional::new(vec![0.0], "neutral")],
                vec![1],
                false,
            ),
            vec![1.0],
        )),
    }
}

fn estimate_for(
    map: &TorusMap,
    method: &str,
    points: usize,
    depth: usize,
    cells: usize,
    seed: u64,
    atomic: bool,
) -> anyhow::Result<(f64, EntropyMethod, Value)> {
    match method {
        "brin-katok" => {
            let orbit = if atomic {
                let fixed = vec![0.0; map.dim()];
                orbit_from(map, &fixed, points, Continuation::Exact)
            } else {
                lebesgue_orbit(map, points, seed)
            };
            let report = brin_katok_entropy(&orbit, &BrinKatokOptions::default())?;
            Ok((report.estimate, EntropyMethod::BrinKatok, serde_json::to_value(&report)?))
        }
        "partition" => {
            if atomic {
                bail!("atomic sampling is only wired to the brin-katok method");
            }
            let report = partition_entropy_rate(map, cells, depth, points, seed)?;
            Ok((report.stabilized, EntropyMethod::PartitionRate, serde_json::to_value(&report)?))
        }
        other => bail!("unknown method `{other}`; use brin-katok | partition"),
    }
}

fn entropy(action: EntropyAction) -> anyhow::Result<u8> {
    match action {
        EntropyAction::Exact { common, spec, element } => {
            let action = action_spec(&spec, &common)?;
            let n = parse_element(&element)?;
            let value = action.lebesgue_entropy(&n)?;
            RunReport::new(
                "entropy exact",
                common.seed,
                json!({ "spec": spec.display().to_string(), "element": n }),
                json!({ "entropy_nats": value }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        EntropyAction::Estimate { common, map, points, method, depth, cells } => {
            let torus_map = parse_map(&map)?;
            let (estimate, _, detail) =
                estimate_for(&torus_map, &method, points, depth, cells, common.seed, false)?;
            RunReport::new(
                "entropy estimate",
                common.seed,
                json!({ "map": map, "points": points, "method": method, "depth": depth, "cells": cells }),
                json!({ "estimate_nats": estimate, "detail": detail }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        EntropyAction::Report { common, map, points, method, depth, cells, atomic } => {
            let torus_map = parse_map(&map)?;
            let (estimate, used, detail) =
                estimate_for(&torus_map, &method, points, depth, cells, common.seed, atomic)?;
            let (family, n) = family_for_map(&torus_map)?;
            let verdict = entropy_inequality_report(estimate, used, &family, &n);
            RunReport::new(
                "entropy report",
                common.seed,
                json!({ "map": map, "points": points, "method": method, "depth": depth, "cells": cells, "atomic": atomic }),
                json!({ "report": verdict, "detail": detail }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
    }
}

fn orbit_cmd(
    common: Common,
    spec: Option<&Path>,
    element: Option<&str>,
    matrix: Option<&Path>,
    point: &str,
    steps: usize,
    mode: &str,
) -> anyhow::Result<u8> {
    let map = match (matrix, spec) {
        (Some(path), _) => load_matrix(path)?,
        (None, Some(spec_path)) => {
            let action = action_spec(spec_path, &common)?;
            let n = parse_element(element.context("--element is required with --spec")?)?;
            action.element(&n)?
        }
        (None, None) => bail!("provide --matrix or --spec with --element"),
    };
    let exact = match mode {
        "exact" => true,
        "float" => false,
        other => bail!("unknown mode `{other}`; use exact | float"),
    };
    let start = parse_point(point, exact)?;
    let result = orbit(&map, &start, steps, OrbitOptions::default())?;
    let points_json: Vec<Value> = result
        .points
        .iter()
        .map(|p| match p {
            TorusPoint::Exact(coords) => {
                Value::Array(coords.iter().map(|c| Value::String(c.to_string())).collect())
            }
            TorusPoint::Float(coords) => serde_json::to_value(coords).expect("floats encode"),
        })
        .collect();
    RunReport::new(
        "orbit",
        common.seed,
        json!({ "point": point, "steps": steps, "mode": mode, "matrix": map }),
        json!({
            "length": result.points.len(),
            "cycle": result.cycle.map(|(pre, period)| json!({ "preperiod": pre, "period": period })),
            "points": points_json,
        }),
    )
    .emit(common.json.as_deref())?;
    Ok(0)
}

fn furstenberg(action: FurstenbergAction) -> anyhow::Result<u8> {
    match action {
        FurstenbergAction::Orbit { common, a, b, q } => {
            let residues: Vec<u64> = furstenberg_rational_orbit(a, b, q).into_iter().collect();
            RunReport::new(
                "furstenberg orbit",
                common.seed,
                json!({ "a": a, "b": b, "q": q }),
                json!({ "size": residues.len(), "residues": residues, "denominator": q }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        FurstenbergAction::Gaps { common, a, b, n } => {
            let profile = gap_ratio_profile(a, b, n)?;
            if let Some(svg_path) = common.svg.as_deref() {
                let points: Vec<(f64, f64)> = profile
                    .ratios
                    .iter()
                    .enumerate()
                    .map(|(k, &r)| (k as f64, r))
                    .collect();
                let svg = polyline_plot(&points, "consecutive product ratios", "k", "s_{k+1}/s_k");
                write_atomic(svg_path, svg.as_bytes())?;
            }
            RunReport::new(
                "furstenberg gaps",
                common.seed,
                json!({ "a": a, "b": b, "n": n }),
                serde_json::to_value(&profile)?,
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        FurstenbergAction::Density { common, a, b, x, n } => {
            let profile = match parse_rational(&x) {
                Some((p, q)) => density_profile_rational(a, b, p, q, n)?,
                None => {
                    let value: f64 = x.parse().context("x must be a float or p/q")?;
                    density_profile(a, b, value, n)?
                }
            };
            RunReport::new(
                "furstenberg density",
                common.seed,
                json!({ "a": a, "b": b, "x": x, "n": n }),
                serde_json::to_value(&profile)?,
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
    }
}

fn suspension(action: SuspensionAction) -> anyhow::Result<u8> {
    let SuspensionAction::Check { common, spec, grid } = action;
    let base = action_spec(&spec, &common)?;
    let suspension = SuspensionSpec::new(base).context("building the suspension")?;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(common.seed);

    let mut cocycle_max = 0.0f64;
    for _ in 0..100 {
        let s = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let t = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let lhs = suspension.interpolation_matrix(&[s[0] + t[0], s[1] + t[1]]);
        let rhs = suspension.interpolation_matrix(&s).mul(&suspension.interpolation_matrix(&t));
        cocycle_max = cocycle_max.max(lhs.sub(&rhs).max_norm());
    }

    let mut det_max = 0.0f64;
    for _ in 0..100 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let radius = rng.gen_range(0.0..5.0);
        let t = [radius * theta.cos(), radius * theta.sin()];
        det_max = det_max.max((suspension.interpolation_det(&t) - 1.0).abs());
    }

    let mut integer_match = 0.0f64;
    for n in [[1i64, 0], [0, 1], [1, 1], [-1, 0], [2, -1]] {
        let exact = suspension.base.element(&n)?.to_float::<f64>();
        let interpolated =
            suspension.interpolation_matrix(&[n[0] as f64, n[1] as f64]);
        integer_match = integer_match.max(interpolated.sub(&exact).max_norm());
    }

    let (p, _) = suspension.reduce(&[0.1, 0.2], &[0.4, 0.15, 0.6])?;
    let mut dilation_max = 0.0f64;
    for i in 0..grid {
        for j in 0..grid {
            let s = [
                -2.0 + 4.0 * (i as f64 + 0.5) / grid as f64,
                -2.0 + 4.0 * (j as f64 + 0.5) / grid as f64,
            ];
            for eigen in 0..suspension.dim() {
                for v in [-0.5, -0.1, 0.1, 0.5] {
                    dilation_max =
                        dilation_max.max(suspension.dilation_residual(&s, &p, eigen, v)?);
                }
            }
        }
    }

    let mut kernel_isometry_max = 0.0f64;
    for eigen in 0..suspension.dim() {
        let k = cartanlab::functionals::kernel_element(
            &suspension.base.family.functionals[eigen],
        )?;
        kernel_isometry_max =
            kernel_isometry_max.max(suspension.dilation_residual(&k, &p, eigen, 0.5)?);
    }

    RunReport::new(
        "suspension check",
        common.seed,
        json!({ "spec": spec.display().to_string(), "grid": grid }),
        json!({
            "cocycle_max_defect": cocycle_max,
            "det_max_defect": det_max,
            "integer_time_max_defect": integer_match,
            "dilation_max_residual": dilation_max,
            "kernel_isometry_max_residual": kernel_isometry_max,
        }),
    )
    .emit(common.json.as_deref())?;
    Ok(0)
}

fn roots(action: RootsAction) -> anyhow::Result<u8> {
    match action {
        RootsAction::Report { common, n } => {
            let datum = RootDatum::new(n);
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(common.seed);
            let mut conjugation_max = 0.0f64;
            for _ in 0..100 {
                let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
                let mean = t.iter().sum::<f64>() / n as f64;
                t.iter_mut().for_each(|x| *x -= mean);
                let a = CartanElement::new(t).expect("centered coordinates");
                let v = rng.gen_range(-2.0..2.0);
                for root in datum.roots() {
                    conjugation_max =
                        conjugation_max.max(datum.conjugation_residual(&a, root, v)?);
                }
            }
            let brackets: Vec<Value> = datum
                .roots()
                .iter()
                .flat_map(|&r1| {
                    datum.roots().into_iter().map(move |r2| (r1, r2))
                })
                .map(|(r1, r2)| {
                    let class = root_bracket(&datum, r1, r2).expect("valid roots");
                    json!({ "first": r1, "second": r2, "class": class })
                })
                .collect();
            // Minimal parabolic block: everything except the last row's
            // off-diagonal roots. Its codimension in sl(n) is n-1.
            let parabolic_seed: Vec<(usize, usize)> = datum
                .roots()
                .into_iter()
                .filter(|&(i, j)| !(i == n && j < n))
                .collect();
            let parabolic = lie_closure::<f64>(&datum, &ClosureSeed::roots_with_cartan(&parabolic_seed))?;
            RunReport::new(
                "roots report",
                common.seed,
                json!({ "n": n }),
                json!({
                    "roots": datum.roots(),
                    "conjugation_max_residual": conjugation_max,
                    "brackets": brackets,
                    "parabolic_block_dim": parabolic.dim,
                    "parabolic_codim": (n * n - 1) - parabolic.dim,
                    "full_algebra_dim": n * n - 1,
                }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        RootsAction::Closure { common, n, roots, cartan } => {
            let datum = RootDatum::new(n);
            let seed_roots = parse_roots(&roots)?;
            let seed = if cartan {
                ClosureSeed::roots_with_cartan(&seed_roots)
            } else {
                ClosureSeed::roots(&seed_roots)
            };
            let closure = lie_closure::<f64>(&datum, &seed)?;
            RunReport::new(
                "roots closure",
                common.seed,
                json!({ "n": n, "roots": seed_roots, "cartan": cartan }),
                json!({
                    "dim": closure.dim,
                    "bracket_closure_defect": closure.bracket_closure_defect(),
                    "full_algebra_dim": n * n - 1,
                }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        RootsAction::Kak { common, n, count, matrix } => {
            let mut results = Vec::new();
            let mut residual_max = 0.0f64;
            match matrix {
                Some(path) => {
                    let g = load_matrix(&path)?.to_float::<f64>();
                    let kak = kak_decompose(&g)?;
                    residual_max = kak.residual;
                    results.push(json!({ "a": kak.a, "residual": kak.residual }));
                }
                None => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(common.seed);
                    for _ in 0..count {
                        let g: SquareMatrix<f64> = random_unimodular(n, &mut rng);
                        let kak = kak_decompose(&g)?;
                        residual_max = residual_max.max(kak.residual);
                        results.push(json!({ "a": kak.a, "residual": kak.residual }));
                    }
                }
            }
            RunReport::new(
                "roots kak",
                common.seed,
                json!({ "n": n, "count": results.len() }),
                json!({ "max_residual": residual_max, "samples": results }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        RootsAction::Schedule { common, functional, generic } => {
            let coeffs = parse_floats(&functional)?;
            if coeffs.len() != 3 {
                bail!("the schedule runs on SL(3): give 3 coefficients");
            }
            let lambda = LinearFunctional::new(coeffs, "lambdaF");
            let elements = if generic {
                ScheduleElements::Generic { seed: common.seed }
            } else {
                ScheduleElements::Paper
            };
            let schedule = averaging_schedule_sl3(&lambda, elements)?;
            // Human-readable stage trace on stderr keeps stdout pure JSON.
            for (k, stage) in schedule.stages.iter().enumerate() {
                eprintln!(
                    "stage {}: {} | element {:?} | functional value {:.6} | averaged U^{:?} | invariant set {:?}",
                    k + 1,
                    stage.label,
                    stage.element,
                    stage.evaluation,
                    stage.subgroup,
                    stage.invariance_after
                );
            }
            eprintln!(
                "verdict: {} (closure dim {})",
                schedule.verdict, schedule.closure_dim
            );
            let verified = schedule.verify(&lambda);
            RunReport::new(
                "roots schedule",
                common.seed,
                json!({ "functional": lambda.coeffs, "generic": generic }),
                json!({ "schedule": schedule, "sign_conditions_reverified": verified }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
        RootsAction::Resonance { common, n, fiberwise } => {
            let datum = RootDatum::new(n);
            let functionals: Vec<LinearFunctional<f64>> = fiberwise
                .split(';')
                .map(|part| {
                    parse_floats(part.trim()).map(|c| LinearFunctional::new(c, "fiberwise"))
                })
                .collect::<anyhow::Result<_>>()?;
            for f in &functionals {
                if f.coeffs.len() != n {
                    bail!("fiberwise functionals need {n} coefficients");
                }
            }
            let classes = resonance_classify(&datum, &functionals);
            let resonant: usize = classes.iter().filter(|c| c.is_resonant()).count();
            RunReport::new(
                "roots resonance",
                common.seed,
                json!({ "n": n, "fiberwise": functionals }),
                json!({ "resonant_roots": resonant, "classification": classes }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
    }
}

fn constant_cocycle(
    common: &Common,
    matrix: Option<&Path>,
    spec: Option<&Path>,
    element: Option<&str>,
    n: usize,
) -> anyhow::Result<(Cocycle<f64>, Value)> {
    let m = match (matrix, spec) {
        (Some(path), _) => load_matrix(path)?,
        (None, Some(spec_path)) => {
            let action = action_spec(spec_path, common)?;
            let e = parse_element(element.context("--element is required with --spec")?)?;
            action.element(&e)?
        }
        (None, None) => bail!("provide --matrix or --spec with --element"),
    };
    let inputs = json!({ "matrix": m, "n": n });
    Ok((Cocycle::Constant { matrix: m.to_float(), length: n }, inputs))
}

fn lyapunov(action: LyapunovAction) -> anyhow::Result<u8> {
    match action {
        LyapunovAction::Top { common, matrix, spec, element, n } => {
            let (cocycle, inputs) =
                constant_cocycle(&common, matrix.as_deref(), spec.as_deref(), element.as_deref(), n)?;
            let top = top_lyapunov_estimate(&cocycle)?;
            if let Some(svg_path) = common.svg.as_deref() {
                let points: Vec<(f64, f64)> =
                    top.checkpoints.iter().map(|&(k, v)| (k as f64, v)).collect();
                write_atomic(
                    svg_path,
                    polyline_plot(&points, "subadditive top-exponent sequence", "n", "(1/n) log norm")
                        .as_bytes(),
                )?;
            }
            RunReport::new("lyapunov top", common.seed, inputs, serde_json::to_value(&top)?)
                .emit(common.json.as_deref())?;
            Ok(0)
        }
        LyapunovAction::Spectrum { common, matrix, spec, element, n } => {
            let (cocycle, inputs) =
                constant_cocycle(&common, matrix.as_deref(), spec.as_deref(), element.as_deref(), n)?;
            let spectrum = qr_oseledec(&cocycle)?;
            RunReport::new(
                "lyapunov spectrum",
                common.seed,
                inputs,
                json!({
                    "exponents": spectrum.exponents,
                    "sum": spectrum.exponent_sum(),
                    "log_det_average": spectrum.log_det_average,
                }),
            )
            .emit(common.json.as_deref())?;
            Ok(0)
        }
    }
}

fn shear(action: ShearAction) -> anyhow::Result<u8> {
    let ShearAction::Probe { common, kind, rate, t, window } = action;
    let spec = match kind.as_str() {
        "geometric-atoms" => ShearMeasureSpec::GeometricAtoms { rate },
        "exp-density" => ShearMeasureSpec::ExpDensity { rate },
        "lebesgue" => ShearMeasureSpec::Lebesgue,
        other => bail!("unknown kind `{other}`; use geometric-atoms | exp-density | lebesgue"),
    };
    let verdict = shear_probe(&spec, t, (-window, window))?;
    RunReport::new(
        "shear probe",
        common.seed,
        json!({ "kind": kind, "rate": rate, "t": t, "window": [-window, window] }),
        serde_json::to_value(&verdict)?,
    )
    .emit(common.json.as_deref())?;
    Ok(0)
}

fn growth(action: GrowthAction) -> anyhow::Result<u8> {
    let GrowthAction::Probe { common, norms, matrix, len, epsilon } = action;
    let (sequence, source): (Vec<f64>, String) = match (norms, matrix) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading norm file {}", path.display()))?;
            (serde_json::from_str(&text).context("norm file must be a JSON array")?,
             path.display().to_string())
        }
        (None, Some(path)) => {
            let m = load_matrix(&path)?.to_float::<f64>();
            let mut power = SquareMatrix::<f64>::identity(m.dim());
            let mut seq = Vec::with_capacity(len);
            for _ in 0..len {
                power = power.mul(&m);
                let norm = power.operator_norm();
                seq.push(norm);
                // Rescale to dodge overflow; the fitted slope only shifts
                // by a constant under scaling, and we record true norms
                // only while they stay finite.
                if norm > 1e100 {
                    break;
                }
            }
            (seq, path.display().to_string())
        }
        (None, None) => bail!("provide --norms or --matrix"),
    };
    let verdict = subexp_growth_probe(&sequence, epsilon)?;
    RunReport::new(
        "growth probe",
        common.seed,
        json!({ "source": source, "len": sequence.len(), "epsilon": epsilon }),
        serde_json::to_value(&verdict)?,
    )
    .emit(common.json.as_deref())?;
    Ok(0)
}

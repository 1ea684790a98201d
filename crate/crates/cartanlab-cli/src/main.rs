//! cartanlab: a command-line laboratory for higher-rank toral actions,
//! SL(n,ℝ) root identities, and empirical ergodic estimators.
//!
//! Every command prints one versioned JSON report to stdout; identical
//! inputs and seed produce byte-identical output. Exit codes: 0 success,
//! 1 usage or input errors, 2 validation failures (report still emitted).

mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cartanlab", version, about = "Exact and empirical dynamics of higher-rank actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every randomized sweep in the command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this path (atomically).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write an SVG rendering to this path, where the command has one.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Override the frame residual tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a commuting family as a genuine hyperbolic higher-rank action.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Action spec file: {"generators": [[[int]]], "labels": [..]}.
        #[arg(long)]
        spec: PathBuf,
        /// Exponent bound for the exact relation search.
        #[arg(long, default_value_t = 20)]
        bound: i64,
    },
    /// Kernel lines and sign chambers of the Lyapunov functionals.
    Chambers {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Entropy: exact values, estimators, and inequality verdicts.
    Entropy {
        #[command(subcommand)]
        action: EntropyAction,
    },
    /// Exact orbit of a torus point under one automorphism.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Action spec file; combined with --element to pick the map.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Exponents selecting the element of the action, e.g. "1,0".
        #[arg(long)]
        element: Option<String>,
        /// Matrix file {"dim": d, "entries": [[..]]} as the map.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Starting point: "1/5,0,0" (exact) or "0.2,0.3,0.4" (float).
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// exact | float
        #[arg(long, default_value = "exact")]
        mode: String,
    },
    /// ×a×b circle dynamics probes.
    Furstenberg {
        #[command(subcommand)]
        action: FurstenbergAction,
    },
    /// Suspension residual checks over a sampled grid.
    Suspension {
        #[command(subcommand)]
        action: SuspensionAction,
    },
    /// SL(n,R) root data: identities, closures, KAK, averaging schedule.
    Roots {
        #[command(subcommand)]
        action: RootsAction,
    },
    /// Cocycle exponents.
    Lyapunov {
        #[command(subcommand)]
        action: LyapunovAction,
    },
    /// Measure shear probes.
    Shear {
        #[command(subcommand)]
        action: ShearAction,
    },
    /// Derivative growth probes.
    Growth {
        #[command(subcommand)]
        action: GrowthAction,
    },
}

#[derive(Subcommand)]
enum EntropyAction {
    /// Exact Pesin value Σ_{λ>0} m·λ(n) of one acting element.
    Exact {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// Estimate entropy of a map from a sampled orbit.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// doubling | times:K | cat | identity:D | auto:PATH
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        /// brin-katok | partition
        #[arg(long, default_value = "brin-katok")]
        method: String,
        /// Partition depth (partition method).
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Cells per coordinate (partition method).
        #[arg(long, default_value_t = 2)]
        cells: usize,
    },
    /// Estimate plus Margulis-Ruelle / Pesin verdicts.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        #[arg(long, default_value = "brin-katok")]
        method: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        cells: usize,
        /// Sample an atomic (periodic-orbit) measure instead of Lebesgue.
        #[arg(long, default_value_t = false)]
        atomic: bool,
    },
}

#[derive(Subcommand)]
enum FurstenbergAction {
    /// Exact orbit closure of 1/q under ×a ×b.
    Orbit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        q: u64,
    },
    /// Gap-ratio profile of the product set {a^m b^n <= N}.
    Gaps {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
    /// Max circular gap of {s·x mod 1 : s in the product set}.
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Either a float ("0.41421") or an exact rational ("1/7").
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum SuspensionAction {
    /// Cocycle, determinant, integer-time, and dilation residuals.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: PathBuf,
        /// Grid resolution per axis for the dilation sweep.
        #[arg(long, default_value_t = 10)]
        grid: usize,
    },
}

#[derive(Subcommand)]
enum RootsAction {
    /// Root table, conjugation residual sweep, bracket classification.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Lie closure of a seeded set of root subgroups.
    Closure {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Root list, e.g. "1,2;2,1".
        #[arg(long)]
        roots: String,
        /// Include the Cartan subalgebra in the seed.
        #[arg(long, default_value_t = false)]
        cartan: bool,
    },
    /// KAK decomposition of random SL(n) samples or one matrix file.
    Kak {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Two-stage averaging schedule for a fiberwise functional on SL(3).
    Schedule {
        #[command(flatten)]
        common: Common,
        /// Functional coefficients in the 3 diagonal log coordinates.
        #[arg(long)]
        functional: String,
        /// Use seeded generic test elements instead of the fixed ones.
        #[arg(long, default_value_t = false)]
        generic: bool,
    },
    /// Resonance classification of roots against fiberwise functionals.
    Resonance {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Semicolon-separated functionals: "1,-1,0;0,1,-1".
        #[arg(long)]
        fiberwise: String,
    },
}

#[derive(Subcommand)]
enum LyapunovAction {
    /// Top exponent of a constant cocycle.
    Top {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
    /// Full exponent spectrum of a constant cocycle.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ShearAction {
    /// Probe whether translation by t carries the measure to a multiple.
    Probe {
        #[command(flatten)]
        common: Common,
        /// geometric-atoms | exp-density | lebesgue
        #[arg(long, default_value = "geometric-atoms")]
        kind: String,
        /// Rate of the atom weights e^{rate·n} or the density e^{rate·x}.
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Symmetric window half-width: compare on [-window, window].
        #[arg(long, default_value_t = 10.0)]
        window: f64,
    },
}

#[derive(Subcommand)]
enum GrowthAction {
    /// Fit the exponential rate of a norm sequence.
    Probe {
        #[command(flatten)]
        common: Common,
        /// JSON file with an array of norms.
        #[arg(long)]
        norms: Option<PathBuf>,
        /// Matrix whose power operator-norms form the sequence.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 60)]
        len: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

fn main() -> ExitCode {
    // CARTANLAB_THREADS caps the worker count of every parallel sweep.
    if let Ok(threads) = std::env::var("CARTANLAB_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are success, anything else is usage.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

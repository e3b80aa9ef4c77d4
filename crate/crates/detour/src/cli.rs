//! The `detour` command-line tool.
//!
//! Three subcommands: `repair` reads a problem file and writes the repaired
//! curve plus its validation report; `check` re-validates a result file from
//! scratch against its problem file (recomputing radii and the report, and
//! refusing tampered numbers); `demo` writes ready-made instances with their
//! repairs and SVG renderings.
//!
//! Exit codes: `0` success, `1` I/O or parse failure (including usage
//! errors), `2` the instance violates a hypothesis of the construction and
//! cannot be repaired, `3` repair or validation failed.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::format::{
    read_problem, read_result, write_json, DomainSpec, ObstacleSpec, PathSpec, ProblemFile,
    ResultFile, FORMAT_VERSION,
};
use crate::repair::{
    compute_radii, hit_schedule, puncture, Options, PunctureMode, RepairError, RepairProblem,
    SpliceExtent,
};
use crate::space::{Point, Space};
use crate::verify::{check_hypotheses, validate};

const EXIT_OK: i32 = 0;
const EXIT_IO: i32 = 1;
const EXIT_REJECTED: i32 = 2;
const EXIT_FAILED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "detour",
    version,
    about = "Repair a path around removed points by splicing sphere-boundary detours"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repair the path in a problem file and write a result file.
    Repair(RepairArgs),
    /// Re-validate a result file against its problem file.
    Check(CheckArgs),
    /// Write ready-made demo instances (problem, result, SVG).
    Demo(DemoArgs),
}

#[derive(Args)]
struct RepairArgs {
    /// Problem file to read (JSON).
    input: PathBuf,
    /// Result file to write (JSON).
    #[arg(short, long)]
    output: PathBuf,
    /// Also render the repair to this SVG file (2D spaces only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Override the problem's working-radius fraction (strictly in (0,1)).
    #[arg(long, value_name = "F")]
    delta_fraction: Option<f64>,
    /// Override the problem's validation grid resolution.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Override how much of each admissible window is replaced.
    #[arg(long, value_enum)]
    splice_extent: Option<ExtentArg>,
    /// Override the obstacle-processing strategy.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct CheckArgs {
    /// Problem file the result claims to solve (JSON).
    problem: PathBuf,
    /// Result file to re-validate (JSON).
    result: PathBuf,
}

#[derive(Args)]
struct DemoArgs {
    /// Which demo to write.
    #[arg(value_enum, default_value_t = DemoName::All)]
    name: DemoName,
    /// Directory for the emitted files.
    #[arg(short, long, default_value = ".")]
    dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtentArg {
    Tightest,
    Widest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Scheduled,
    Iterative,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoName {
    /// One obstacle on a straight path.
    Single,
    /// Two obstacles, two detours.
    Multi,
    /// A path across the integer grid.
    Lattice,
    /// A bent path through a point, witnessing two sphere crossings.
    Corollary,
    /// A 1D instance the construction must reject.
    LineNegative,
    /// Square detours under the max metric.
    Chebyshev,
    /// Every demo above.
    All,
}

/// Entry point: parse `std::env::args` and run.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_IO,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Repair(args) => cmd_repair(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Demo(args) => cmd_demo(args.name, &args.dir),
    }
}

fn repair_exit(e: &RepairError) -> i32 {
    eprintln!("error: {e}");
    if e.is_rejection() {
        EXIT_REJECTED
    } else {
        EXIT_FAILED
    }
}

fn load_problem(path: &Path) -> Result<RepairProblem, i32> {
    let file = read_problem(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_IO
    })?;
    file.to_problem().map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_IO
    })
}

fn cmd_repair(args: &RepairArgs) -> i32 {
    let mut problem = match load_problem(&args.input) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if let Some(f) = args.delta_fraction {
        problem.options.delta_fraction = f;
    }
    if let Some(n) = args.samples {
        problem.options.samples = n;
    }
    if let Some(e) = args.splice_extent {
        problem.options.splice_extent = match e {
            ExtentArg::Tightest => SpliceExtent::Tightest,
            ExtentArg::Widest => SpliceExtent::Widest,
        };
    }
    if let Some(m) = args.mode {
        problem.options.puncture_mode = match m {
            ModeArg::Scheduled => PunctureMode::Scheduled,
            ModeArg::Iterative => PunctureMode::Iterative,
        };
    }

    if let Err(e) = check_hypotheses(&problem) {
        return repair_exit(&e);
    }
    let (curve, records, report) = match puncture(&problem) {
        Ok(out) => out,
        Err(e) => return repair_exit(&e),
    };

    let result = ResultFile::new(&curve, &records, &report);
    if let Err(e) = write_json(&args.output, &result) {
        eprintln!("error: {}: {e}", args.output.display());
        return EXIT_IO;
    }
    println!("detours: {}", records.len());
    println!("pieces: {}", curve.pieces().len());
    if report.min_clearance.is_finite() {
        println!("min-clearance: {}", report.min_clearance);
    } else {
        println!("min-clearance: unbounded");
    }
    println!("report: {}", if report.passed() { "pass" } else { "fail" });
    println!("wrote: {}", args.output.display());

    if let Some(svg_path) = &args.svg {
        if problem.space.dim == 2 {
            let svg = crate::svg::render(&problem, &problem.path, &curve, &records);
            if let Err(e) = std::fs::write(svg_path, svg) {
                eprintln!("error: {}: {e}", svg_path.display());
                return EXIT_IO;
            }
            println!("wrote: {}", svg_path.display());
        } else {
            eprintln!("note: skipping SVG (space is not two-dimensional)");
        }
    }

    if !report.passed() {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        return EXIT_FAILED;
    }
    EXIT_OK
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

fn cmd_check(args: &CheckArgs) -> i32 {
    let problem = match load_problem(&args.problem) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let result = match read_result(&args.result) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", args.result.display());
            return EXIT_IO;
        }
    };
    if let Err(e) = check_hypotheses(&problem) {
        return repair_exit(&e);
    }
    let curve = match result.to_curve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("check: stored pieces are inconsistent: {e}");
            return EXIT_FAILED;
        }
    };

    // Re-derive everything from the problem statement.
    let fresh = validate(&curve, &problem, problem.options.samples);
    let schedule_and_radii = hit_schedule(&problem).and_then(|schedule| {
        let active: Vec<(Point, f64)> =
            schedule.records.iter().map(|r| (r.obstacle.clone(), r.isolation)).collect();
        compute_radii(&problem, &active).map(|radii| (schedule, radii))
    });
    let (schedule, radii) = match schedule_and_radii {
        Ok(v) => v,
        Err(e) => return repair_exit(&e),
    };

    let mut failures: Vec<String> = Vec::new();

    // The stored report must match the recomputation.
    let stored = &result.report;
    if stored.endpoints_ok != fresh.endpoints_ok
        || stored.containment_ok != fresh.containment_ok
    {
        failures.push("stored report flags disagree with recomputation".into());
    }
    if !close(stored.continuity_modulus, fresh.continuity_modulus, 1e-6) {
        failures.push(format!(
            "continuity modulus {} recomputes to {}",
            stored.continuity_modulus, fresh.continuity_modulus
        ));
    }
    let stored_clearance = stored.min_clearance.unwrap_or(f64::INFINITY);
    if !close(stored_clearance, fresh.min_clearance, 1e-6) {
        failures.push(format!(
            "min clearance {} recomputes to {}",
            stored_clearance, fresh.min_clearance
        ));
    }
    let fresh_counts: Vec<(Point, usize)> = fresh.crossing_counts.clone();
    if stored.crossing_counts.len() != fresh_counts.len()
        || stored
            .crossing_counts
            .iter()
            .zip(&fresh_counts)
            .any(|(s, (p, c))| s.obstacle != *p || s.crossings != *c)
    {
        failures.push("stored crossing counts disagree with recomputation".into());
    }

    // The stored radii must reproduce the radius formula, and the working
    // radius must sit strictly under the bound.
    if result.radii.len() != radii.entries.len() {
        failures.push(format!(
            "stored radii list has {} entries, schedule needs {}",
            result.radii.len(),
            radii.entries.len()
        ));
    } else {
        for (s, f) in result.radii.iter().zip(&radii.entries) {
            if s.obstacle != f.obstacle {
                failures.push(format!("radius entry for {:?} is out of order", s.obstacle));
                continue;
            }
            if !close(s.formula, f.formula, 1e-9) {
                failures.push(format!(
                    "radius bound for {:?}: stored {}, recomputed {}",
                    s.obstacle, s.formula, f.formula
                ));
            }
            if !(s.working > 0.0 && s.working < f.formula) {
                failures.push(format!(
                    "working radius {} for {:?} violates the strict bound {}",
                    s.working, s.obstacle, f.formula
                ));
            } else if !close(s.working, f.working, 1e-9) {
                failures.push(format!(
                    "working radius for {:?}: stored {}, recomputed {}",
                    s.obstacle, s.working, f.working
                ));
            }
        }
    }

    // Schedule sanity: stored touches must match, and each window must
    // bracket its touches.
    if result.schedule.len() != schedule.records.len() {
        failures.push(format!(
            "stored schedule has {} records, recomputed {}",
            result.schedule.len(),
            schedule.records.len()
        ));
    } else {
        for (s, f) in result.schedule.iter().zip(&schedule.records) {
            if s.obstacle != f.obstacle
                || !close(s.hit_first, f.first, 1e-9)
                || !close(s.hit_last, f.last, 1e-9)
            {
                failures.push(format!("schedule record for {:?} disagrees", s.obstacle));
            }
            if !(s.entry < s.hit_first && s.hit_last < s.exit) {
                failures.push(format!(
                    "window ({}, {}) fails to bracket the touches of {:?}",
                    s.entry, s.exit, s.obstacle
                ));
            }
        }
    }

    for v in &fresh.violations {
        failures.push(format!("validation: {v}"));
    }

    if !failures.is_empty() {
        for f in &failures {
            eprintln!("check: {f}");
        }
        return EXIT_FAILED;
    }
    println!("check: pass");
    println!("detours: {}", result.schedule.len());
    if fresh.min_clearance.is_finite() {
        println!("min-clearance: {}", fresh.min_clearance);
    } else {
        println!("min-clearance: unbounded");
    }
    EXIT_OK
}

fn demo_spec(name: DemoName) -> ProblemFile {
    let euclid = Space::euclidean(2);
    let (space, domain, waypoints, obstacles) = match name {
        DemoName::Single => (
            euclid,
            DomainSpec::Ball { center: Point::xy(0.0, 0.0), radius: 10.0, open: false },
            vec![Point::xy(-2.0, 0.0), Point::xy(2.0, 0.0)],
            ObstacleSpec::Finite { points: vec![Point::xy(0.0, 0.0)] },
        ),
        DemoName::Multi => (
            euclid,
            DomainSpec::Ball { center: Point::xy(0.0, 0.0), radius: 10.0, open: false },
            vec![Point::xy(-3.0, 0.0), Point::xy(3.0, 0.0)],
            ObstacleSpec::Finite { points: vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)] },
        ),
        DemoName::Lattice => (
            euclid,
            DomainSpec::All,
            vec![Point::xy(-2.5, 0.0), Point::xy(2.5, 0.0)],
            ObstacleSpec::Lattice { step: 1.0, origin: None },
        ),
        DemoName::Corollary => (
            euclid,
            DomainSpec::Ball { center: Point::xy(0.0, 0.0), radius: 10.0, open: false },
            vec![Point::xy(-2.0, 0.0), Point::xy(0.0, 0.0), Point::xy(0.0, 2.0)],
            ObstacleSpec::Finite { points: vec![Point::xy(0.0, 0.0)] },
        ),
        DemoName::LineNegative => (
            Space::line(),
            DomainSpec::Ball { center: Point::scalar(0.0), radius: 5.0, open: false },
            vec![Point::scalar(-1.0), Point::scalar(1.0)],
            ObstacleSpec::Finite { points: vec![Point::scalar(0.0)] },
        ),
        DemoName::Chebyshev => (
            Space::chebyshev(),
            DomainSpec::Ball { center: Point::xy(0.0, 0.0), radius: 8.0, open: false },
            vec![Point::xy(-3.0, 0.0), Point::xy(3.0, 0.0)],
            ObstacleSpec::Finite { points: vec![Point::xy(0.0, 0.0)] },
        ),
        DemoName::All => unreachable!("expanded by the caller"),
    };
    ProblemFile {
        version: FORMAT_VERSION.to_string(),
        space,
        domain,
        path: PathSpec { waypoints },
        obstacles,
        options: Options::default(),
    }
}

fn demo_stem(name: DemoName) -> &'static str {
    match name {
        DemoName::Single => "single",
        DemoName::Multi => "multi",
        DemoName::Lattice => "lattice",
        DemoName::Corollary => "corollary",
        DemoName::LineNegative => "line-negative",
        DemoName::Chebyshev => "chebyshev",
        DemoName::All => unreachable!(),
    }
}

fn cmd_demo(name: DemoName, dir: &Path) -> i32 {
    let names = if name == DemoName::All {
        vec![
            DemoName::Single,
            DemoName::Multi,
            DemoName::Lattice,
            DemoName::Corollary,
            DemoName::LineNegative,
            DemoName::Chebyshev,
        ]
    } else {
        vec![name]
    };
    for n in names {
        let code = write_demo(n, dir);
        if code != EXIT_OK {
            return code;
        }
    }
    EXIT_OK
}

fn write_demo(name: DemoName, dir: &Path) -> i32 {
    let stem = demo_stem(name);
    let file = demo_spec(name);
    let problem_path = dir.join(format!("{stem}.problem.json"));
    if let Err(e) = write_json(&problem_path, &file) {
        eprintln!("error: {}: {e}", problem_path.display());
        return EXIT_IO;
    }
    println!("wrote: {}", problem_path.display());

    let problem = match file.to_problem() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {stem}: {e}");
            return EXIT_IO;
        }
    };
    if let Err(e) = check_hypotheses(&problem) {
        if name == DemoName::LineNegative && e.is_rejection() {
            // This demo exists to be rejected: running `repair` on the
            // emitted problem file exits with code 2.
            println!("note: {stem} is rejected by design ({e})");
            return EXIT_OK;
        }
        return repair_exit(&e);
    }
    let (curve, records, report) = match puncture(&problem) {
        Ok(out) => out,
        Err(e) => return repair_exit(&e),
    };
    let result_path = dir.join(format!("{stem}.result.json"));
    if let Err(e) = write_json(&result_path, &ResultFile::new(&curve, &records, &report)) {
        eprintln!("error: {}: {e}", result_path.display());
        return EXIT_IO;
    }
    println!("wrote: {}", result_path.display());
    if problem.space.dim == 2 {
        let svg_path = dir.join(format!("{stem}.svg"));
        let svg = crate::svg::render(&problem, &problem.path, &curve, &records);
        if let Err(e) = std::fs::write(&svg_path, svg) {
            eprintln!("error: {}: {e}", svg_path.display());
            return EXIT_IO;
        }
        println!("wrote: {}", svg_path.display());
    }
    if !report.passed() {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        return EXIT_FAILED;
    }
    EXIT_OK
}

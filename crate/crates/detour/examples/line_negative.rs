//! The one-dimensional counterexample: removing a point from the line
//! disconnects it, and the library refuses up front.
//!
//! A sphere around a removed point of the line is a two-point set
//! `{x0 - r, x0 + r}`, which is not path-connected — there is no way to
//! walk around an obstacle without leaving the line. The hypothesis check
//! catches this before any geometry is attempted, and the error is
//! classified as a *rejection* (the instance is outside the guarantees)
//! rather than a failure of the repair itself. The CLI maps rejections to
//! exit code 2 and internal failures to exit code 3.
//!
//! Run with: `cargo run --example line_negative`

use detour::{check_hypotheses, puncture, Curve, Domain, ObstacleSet, Options, Point, RepairProblem, Space};

fn main() {
    let space = Space::line();
    let problem = RepairProblem {
        space,
        domain: Domain::ball(space, Point::scalar(0.0), 5.0),
        path: Curve::polyline(&[Point::scalar(-1.0), Point::scalar(1.0)]),
        obstacles: ObstacleSet::finite(vec![Point::scalar(0.0)]),
        options: Options::default(),
    };

    println!("path [-1, 1] on the line, removed point at 0\n");

    let err = check_hypotheses(&problem).expect_err("the line must be rejected");
    println!("hypothesis check: {err}");
    println!("classified as a rejection: {}\n", err.is_rejection());
    assert!(err.is_rejection());

    let err = puncture(&problem).expect_err("repair must refuse too");
    println!("repair refuses with: {err}");
    assert!(err.is_rejection());

    // Without the obstacle the same instance is fine — nothing to repair.
    let clean = RepairProblem { obstacles: ObstacleSet::finite(vec![]), ..problem };
    let (out, records, report) = puncture(&clean).expect("no obstacle, no objection");
    assert!(records.is_empty());
    assert_eq!(out, clean.path);
    assert!(report.passed());
    println!("\nwith no obstacle the path is returned unchanged and validates.");
    println!("(the `detour` binary exits 2 for rejections like this, 3 for real failures)");
}

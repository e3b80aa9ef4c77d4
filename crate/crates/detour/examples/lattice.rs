//! Repair against a countably infinite, discrete obstacle set.
//!
//! The obstacle set here is the whole integer grid — infinitely many
//! points, supplied lazily through the [`detour::RegionQuery`] trait, which
//! only ever has to answer "which obstacles lie within this radius of this
//! center, and how isolated is each one?". Discreteness (every obstacle
//! keeps a positive distance to the rest of the set) is exactly what makes
//! the working balls well-defined.
//!
//! The path zig-zags through five grid points; the repair walks around
//! each of them.
//!
//! Run with: `cargo run --example lattice`

use std::sync::Arc;

use detour::{
    puncture, Curve, Domain, LatticeGenerator, ObstacleSet, Options, Point, RepairProblem, Space,
};

fn main() {
    let space = Space::euclidean(2);
    let grid = LatticeGenerator::new(space, Point::xy(0.0, 0.0), 1.0);

    // A polyline visiting (-2,0), (-1,1), (0,0), (1,1), (2,0) — five grid
    // points — with endpoints safely off the grid.
    let path = Curve::polyline(&[
        Point::xy(-2.5, 0.25),
        Point::xy(-2.0, 0.0),
        Point::xy(-1.0, 1.0),
        Point::xy(0.0, 0.0),
        Point::xy(1.0, 1.0),
        Point::xy(2.0, 0.0),
        Point::xy(2.5, 0.25),
    ]);

    let problem = RepairProblem {
        space,
        domain: Domain::all(space),
        path,
        obstacles: ObstacleSet::generator(Arc::new(grid)),
        options: Options::default(),
    };

    let (repaired, records, report) = puncture(&problem).expect("repair");

    println!("obstacle set: every integer grid point (infinitely many)");
    println!("the path visits {} of them; each gets a detour:\n", records.len());
    for rec in &records {
        println!(
            "  around {:?}  isolation {:.1}  working radius {:.3}  window [{:.4}, {:.4}]",
            rec.obstacle.coords,
            rec.radius.isolation,
            rec.working_radius(),
            rec.entry_param,
            rec.exit_param
        );
    }
    println!();
    println!(
        "repaired curve: {} pieces, clearance {:.6} to the nearest grid point",
        repaired.pieces().len(),
        report.min_clearance
    );
    assert_eq!(records.len(), 5);
    assert!(report.passed());
}

//! Repair under the max metric, where balls are axis-aligned squares.
//!
//! In the plane with distance `max(|dx|, |dy|)`, the ball of radius `r` is
//! a square of side `2r`, and its boundary sphere is the square's
//! perimeter. Detours therefore walk along square perimeters: the repaired
//! curve is a chain of axis-aligned and original segments, no arcs at all.
//!
//! Run with: `cargo run --example chebyshev`

use detour::{puncture, Curve, Domain, ObstacleSet, Options, Piece, Point, RepairProblem, Space};

fn main() {
    let space = Space::chebyshev();
    let problem = RepairProblem {
        space,
        domain: Domain::ball(space, Point::xy(0.0, 0.0), 8.0),
        path: Curve::polyline(&[Point::xy(-3.0, 0.0), Point::xy(3.0, 0.0)]),
        obstacles: ObstacleSet::finite(vec![Point::xy(0.0, 0.0)]),
        options: Options::default(),
    };

    println!("max-metric plane: the domain is the square |x|,|y| <= 8,");
    println!("and the working ball around the origin is a square too.\n");

    let (repaired, records, report) = puncture(&problem).expect("repair");
    let rec = &records[0];
    println!(
        "working square around {:?}: half-side {:.3}",
        rec.obstacle.coords,
        rec.working_radius()
    );
    println!("enter the perimeter at {:?}", rec.entry_point.coords);
    println!("leave the perimeter at {:?}\n", rec.exit_point.coords);

    println!("repaired curve (all straight segments):");
    for pp in repaired.pieces() {
        assert!(matches!(pp.piece, Piece::Linear { .. }), "square detours never need arcs");
        println!(
            "  t in [{:.4}, {:.4}]  {:?} -> {:?}",
            pp.t0,
            pp.t1,
            pp.piece.start().coords,
            pp.piece.end().coords
        );
    }

    // The detour's corner points sit exactly on the square: their max-norm
    // distance to the origin equals the working radius.
    for pp in &repaired.pieces()[1..repaired.pieces().len() - 1] {
        let d = space.distance(pp.piece.start(), &rec.obstacle).unwrap();
        assert!((d - rec.working_radius()).abs() <= 1e-9);
    }
    println!("\nmax-norm clearance {:.6} (= the working radius)", report.min_clearance);
    assert!(report.passed());
}

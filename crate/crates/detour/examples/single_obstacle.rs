//! Repair a straight path that runs through one removed point.
//!
//! The path from (-2, 0) to (2, 0) passes straight through the removed
//! origin. The repair sizes a *working ball* around the origin — half of
//! `delta_fraction` times the tightest of the constraints that keep the
//! ball useful — finds where the path last enters and first leaves that
//! ball around the offending stretch, and replaces the stretch with a walk
//! along the ball's boundary circle.
//!
//! Run with: `cargo run --example single_obstacle`

use detour::{puncture, Curve, Domain, ObstacleSet, Options, Piece, Point, RepairProblem, Space};

fn main() {
    let space = Space::euclidean(2);
    let problem = RepairProblem {
        space,
        domain: Domain::ball(space, Point::xy(0.0, 0.0), 10.0),
        path: Curve::polyline(&[Point::xy(-2.0, 0.0), Point::xy(2.0, 0.0)]),
        obstacles: ObstacleSet::finite(vec![Point::xy(0.0, 0.0)]),
        options: Options::default(),
    };

    let (repaired, records, report) = puncture(&problem).expect("repair should succeed");

    println!("instance: segment (-2,0) -> (2,0) through the removed origin\n");
    let rec = &records[0];
    println!("working ball around {:?}", rec.obstacle.coords);
    println!("  room inside the domain   {:>6.3}", rec.radius.interior);
    println!("  isolation from others    {:>6}", rec.radius.isolation);
    println!("  strict radius bound      {:>6.3}  (half the tightest constraint)", rec.radius.formula);
    println!("  working radius           {:>6.3}  (delta_fraction = {})",
        rec.working_radius(), problem.options.delta_fraction);
    println!();
    println!("touches at t in [{:.4}, {:.4}]", rec.hit_first, rec.hit_last);
    println!("spliced over  t in [{:.4}, {:.4}]", rec.entry_param, rec.exit_param);
    println!("enter sphere at {:?}", rec.entry_point.coords);
    println!("leave sphere at {:?}", rec.exit_point.coords);
    println!();

    println!("repaired curve, piece by piece:");
    for pp in repaired.pieces() {
        let kind = match &pp.piece {
            Piece::Linear { .. } => "segment",
            Piece::Arc(_) => "arc    ",
            Piece::Constant { .. } => "rest   ",
        };
        println!(
            "  {kind}  t in [{:.4}, {:.4}]  {:?} -> {:?}",
            pp.t0,
            pp.t1,
            pp.piece.start().coords,
            pp.piece.end().coords
        );
    }
    println!();

    println!("validation:");
    println!("  endpoints kept      {}", report.endpoints_ok);
    println!("  stays in domain     {}", report.containment_ok);
    println!("  clearance to origin {:.6}  (the working radius)", report.min_clearance);
    for (p, n) in &report.crossing_counts {
        println!("  original path crosses the sphere around {:?} {n} times (>= 2)", p.coords);
    }
    assert!(report.passed());
}

//! Repair a path through several removed points and inspect the schedule.
//!
//! Two removed points sit on the path. The repair first builds a *touch
//! schedule*: for each obstacle, the first parameter where the path touches
//! it (after the previous record is fully dealt with) and the last
//! parameter where it ever touches it again. Working balls are then sized
//! so they stay inside the domain, exclude every other obstacle and both
//! endpoints, and remain pairwise disjoint — which is what makes the
//! splices independent of each other.
//!
//! Run with: `cargo run --example multi_obstacle`

use detour::{
    hit_schedule, puncture, Curve, Domain, ObstacleSet, Options, Point, RepairProblem, Space,
};

fn main() {
    let space = Space::euclidean(2);
    let problem = RepairProblem {
        space,
        domain: Domain::ball(space, Point::xy(0.0, 0.0), 10.0),
        path: Curve::polyline(&[Point::xy(-3.0, 0.0), Point::xy(3.0, 0.0)]),
        obstacles: ObstacleSet::finite(vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)]),
        options: Options::default(),
    };

    let schedule = hit_schedule(&problem).expect("schedule");
    println!("touch schedule ({} records):", schedule.len());
    for rec in &schedule.records {
        println!(
            "  obstacle {:?}  first touch t = {:.4}, last touch t = {:.4}",
            rec.obstacle.coords, rec.first, rec.last
        );
    }
    println!();

    let (repaired, records, report) = puncture(&problem).expect("repair");
    println!("splices:");
    for rec in &records {
        println!(
            "  around {:?}  radius {:.3}  window t in [{:.4}, {:.4}]",
            rec.obstacle.coords,
            rec.working_radius(),
            rec.entry_param,
            rec.exit_param
        );
        println!(
            "    separation to the nearest other obstacle {:.3}, so balls of radius {:.3} stay disjoint",
            rec.radius.separation,
            rec.working_radius()
        );
    }
    println!();

    println!("repaired curve has {} pieces (was {})", repaired.pieces().len(), problem.path.pieces().len());
    println!("minimum clearance {:.6}", report.min_clearance);
    for (p, n) in &report.crossing_counts {
        println!("original path crosses the working sphere around {:?} {n} times", p.coords);
    }
    assert!(report.passed());
}

//! Render a repair to a standalone SVG picture.
//!
//! The drawing shows the domain outline, the original path in grey, the
//! dashed working balls (circles in the euclidean plane, squares under the
//! max metric), the repaired curve in green, and an X at every removed
//! point. Output is deterministic: the same instance always produces the
//! same bytes.
//!
//! Run with: `cargo run --example svg_plot`

use detour::{puncture, svg, Curve, Domain, ObstacleSet, Options, Point, RepairProblem, Space};

fn main() {
    let space = Space::euclidean(2);
    let problem = RepairProblem {
        space,
        domain: Domain::ball(space, Point::xy(0.0, 0.0), 6.0),
        path: Curve::polyline(&[
            Point::xy(-4.0, -1.0),
            Point::xy(-1.0, 0.5),
            Point::xy(1.5, -0.5),
            Point::xy(4.0, 1.0),
        ]),
        obstacles: ObstacleSet::finite(vec![
            Point::xy(-1.0, 0.5),
            Point::xy(0.5, -0.1),
            Point::xy(3.0, 0.0),
        ]),
        options: Options::default(),
    };

    let (repaired, records, report) = puncture(&problem).expect("repair");
    assert!(report.passed());

    let picture = svg::render(&problem, &problem.path, &repaired, &records);
    println!(
        "rendered {} detours, {} bytes of SVG",
        records.len(),
        picture.len()
    );

    let out = std::env::temp_dir().join("detour_repair.svg");
    std::fs::write(&out, &picture).expect("write SVG");
    println!("wrote {}", out.display());
    println!("\nfirst lines:");
    for line in picture.lines().take(4) {
        println!("  {line}");
    }
}

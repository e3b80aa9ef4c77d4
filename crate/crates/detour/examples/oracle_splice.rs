//! Bridge two removed points with a caller-supplied connector.
//!
//! When the removed set is wild enough that the touch schedule cannot be
//! enumerated, the constructive repair is out of reach — but if the caller
//! can already walk between two removed points through the punctured
//! domain, that walk can still be upgraded. [`detour::splice_via_oracle`]
//! takes the caller's connector, checks its contract (right endpoints,
//! stays in the domain, interior avoids every obstacle), and trims it back
//! to the working spheres around the two removed endpoints: the result
//! starts and ends *on* the spheres, ready to be welded onto boundary
//! walks around each removed point.
//!
//! Run with: `cargo run --example oracle_splice`

use detour::{
    splice_via_oracle, Curve, DetourOracle, Domain, ObstacleSet, Options, Point, RepairProblem,
    SegmentOracle, Space,
};

/// A connector that bows away from the straight line through a midpoint.
struct BowedOracle;

impl DetourOracle for BowedOracle {
    fn connect(&self, from: &Point, to: &Point) -> Curve {
        let mid = Point::xy(
            0.5 * (from.coords[0] + to.coords[0]),
            0.5 * (from.coords[1] + to.coords[1]) + 1.0,
        );
        Curve::polyline(&[from.clone(), mid, to.clone()])
    }
}

fn main() {
    let space = Space::euclidean(2);
    let a = Point::xy(-1.0, 0.0);
    let b = Point::xy(1.0, 0.0);
    let problem = RepairProblem {
        space,
        domain: Domain::ball(space, Point::xy(0.0, 0.0), 10.0),
        path: Curve::polyline(&[Point::xy(-3.0, 0.0), Point::xy(3.0, 0.0)]),
        obstacles: ObstacleSet::finite(vec![a.clone(), b.clone()]),
        options: Options::default(),
    };

    println!("removed points a = {:?}, b = {:?}\n", a.coords, b.coords);

    // The straight segment between a and b satisfies the contract here:
    // it stays in the domain and meets no third obstacle.
    let bridge = splice_via_oracle(&problem, &SegmentOracle, &a, &b).expect("segment bridge");
    report("straight connector", &space, &bridge, &a, &b);

    // A polyline connector works just as well; only the contract matters.
    let bridge = splice_via_oracle(&problem, &BowedOracle, &a, &b).expect("bowed bridge");
    report("bowed connector", &space, &bridge, &a, &b);

    // A connector that wanders through a third removed point violates the
    // contract and is turned down.
    let blocked = RepairProblem {
        obstacles: ObstacleSet::finite(vec![a.clone(), b.clone(), Point::xy(0.0, 0.0)]),
        ..problem
    };
    let err = splice_via_oracle(&blocked, &SegmentOracle, &a, &b)
        .expect_err("the straight segment now passes through the third removed point");
    println!("with a third obstacle at the origin, the straight connector is rejected:\n  {err}");
}

fn report(label: &str, space: &Space, bridge: &Curve, a: &Point, b: &Point) {
    let d_a = space.distance(bridge.start(), a).unwrap();
    let d_b = space.distance(bridge.end(), b).unwrap();
    println!("{label}:");
    println!("  starts at {:?}  (distance {:.6} from a)", bridge.start().coords, d_a);
    println!("  ends at   {:?}  (distance {:.6} from b)", bridge.end().coords, d_b);
    println!("  — both ends sit on the working spheres, not on the removed points\n");
    assert!(d_a > 0.0 && d_b > 0.0);
}

//! Why a bent path through a removed point must cross small spheres twice.
//!
//! Take a path that goes from `x` through a removed point `x0` and on to a
//! distinct `y`. For any radius no larger than half of
//! `min(interior room at x0, d(x, x0), d(y, x0))`, both endpoints stay
//! strictly outside the sphere around `x0` while the path visits its
//! center — so the path has to pierce the sphere at least once inbound and
//! once outbound. That pair of guaranteed crossings is what every splice
//! window is anchored to.
//!
//! This example measures the crossings with the brute-force grid counter
//! at ten radii spread over two decades below the bound.
//!
//! Run with: `cargo run --example corollary`

use detour::{brute_force_crossings, prop_delta0, Curve, Domain, Point, Space};

fn main() {
    let space = Space::euclidean(2);
    let domain = Domain::ball(space, Point::xy(0.0, 0.0), 10.0);

    let x = Point::xy(-2.0, 0.0);
    let x0 = Point::xy(0.0, 0.0);
    let y = Point::xy(0.0, 2.0);
    let path = Curve::polyline(&[x.clone(), x0.clone(), y.clone()]);

    // The guaranteed bound for a single branch (x0 -> z): half of
    // min(interior room, d(x0, z)).
    let one_branch = prop_delta0(&space, &domain, &x0, &x).expect("bound");
    println!("single-branch bound at x0 toward x: {one_branch}");

    // For the bent path both branches matter.
    let eps = domain.interior_radius(&x0).expect("interior");
    let d_x = space.distance(&x, &x0).unwrap();
    let d_y = space.distance(&y, &x0).unwrap();
    let bound = 0.5 * eps.min(d_x).min(d_y);
    println!("two-branch bound: 0.5 * min({eps}, {d_x}, {d_y}) = {bound}\n");

    println!("{:>12}  crossings", "radius");
    for k in 0..10 {
        // Radii log-spaced over [bound/100, bound].
        let radius = bound * (0.01f64).powf(1.0 - k as f64 / 9.0);
        let crossings = brute_force_crossings(&path, &space, &x0, radius, 100_001);
        println!("{radius:>12.6}  {crossings}");
        assert!(crossings >= 2, "a sphere under the bound was crossed fewer than twice");
    }
    println!("\nevery radius at or under the bound is crossed at least twice.");
}

//! Acceptance suite: one test per promised behavior, each ending in a
//! `criterion N: PASS` line (run with `--nocapture` to see them).
//!
//! The random suites are deterministic; set `DETOUR_SEED` to re-roll them.

use std::sync::Arc;
use std::time::Instant;

use detour::{
    brute_force_crossings, check_hypotheses, hit_schedule, prop_delta0, puncture,
    sphere_crossings, validate, Curve, Domain, LatticeGenerator, ObstacleSet, Options, Point,
    PunctureMode, RepairProblem, Space,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng_for(label: u64) -> ChaCha8Rng {
    let seed = std::env::var("DETOUR_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xD370_u64);
    ChaCha8Rng::seed_from_u64(seed ^ (label << 32))
}

fn rand_point(rng: &mut ChaCha8Rng, dim: usize, half: f64) -> Point {
    Point::new((0..dim).map(|_| rng.gen_range(-half..half)).collect())
}

/// A random planar instance: a 2-4 waypoint polyline inside the ball of
/// radius 10, up to three obstacles placed exactly on the path, sometimes
/// one more off to the side; all separations rejection-sampled to >= 0.05.
fn random_planar_instance(rng: &mut ChaCha8Rng) -> RepairProblem {
    let space = Space::euclidean(2);
    'outer: loop {
        let npts = rng.gen_range(2..=4);
        let pts: Vec<Point> = (0..npts).map(|_| rand_point(rng, 2, 4.0)).collect();
        for w in pts.windows(2) {
            if space.dist2(&w[0], &w[1]) < 0.5 {
                continue 'outer;
            }
        }
        let (x, y) = (pts[0].clone(), pts[npts - 1].clone());
        if space.dist2(&x, &y) < 1.0 {
            continue 'outer;
        }
        let path = Curve::polyline(&pts);
        let k = rng.gen_range(0..=3);
        let mut obstacles: Vec<Point> =
            (0..k).map(|_| path.eval_unchecked(rng.gen_range(0.1..0.9))).collect();
        if rng.gen_bool(0.5) {
            obstacles.push(rand_point(rng, 2, 4.0));
        }
        for i in 0..obstacles.len() {
            if space.dist2(&obstacles[i], &x) < 0.05 || space.dist2(&obstacles[i], &y) < 0.05 {
                continue 'outer;
            }
            for j in (i + 1)..obstacles.len() {
                if space.dist2(&obstacles[i], &obstacles[j]) < 0.05 {
                    continue 'outer;
                }
            }
        }
        return RepairProblem {
            space,
            domain: Domain::ball(space, Point::xy(0.0, 0.0), 10.0),
            path,
            obstacles: ObstacleSet::finite(obstacles),
            options: Options::default(),
        };
    }
}

trait Dist2 {
    fn dist2(&self, p: &Point, q: &Point) -> f64;
}

impl Dist2 for Space {
    fn dist2(&self, p: &Point, q: &Point) -> f64 {
        self.distance(p, q).expect("matching dimensions")
    }
}

#[test]
fn criterion_1_repairs_500_random_instances_quickly() {
    let start = Instant::now();
    let mut rng = rng_for(1);
    for i in 0..500 {
        let problem = random_planar_instance(&mut rng);
        let (out, _, report) = puncture(&problem)
            .unwrap_or_else(|e| panic!("criterion 1: FAIL — instance {i} errored: {e}"));
        assert!(
            report.passed(),
            "criterion 1: FAIL — instance {i} validation: {:?}",
            report.violations
        );
        assert_eq!(out.start(), problem.path.start(), "criterion 1: FAIL — start moved");
        assert_eq!(out.end(), problem.path.end(), "criterion 1: FAIL — end moved");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "criterion 1: FAIL — suite took {elapsed:.2?} (budget 30s)"
    );
    println!(
        "criterion 1: PASS — 500/500 random planar instances repaired and validated in {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_guaranteed_radius_is_always_crossed() {
    let mut rng = rng_for(2);
    let mut checked = 0u32;
    for i in 0..200 {
        let space = match i % 3 {
            0 => Space::euclidean(2),
            1 => Space::euclidean(3),
            _ => Space::chebyshev(),
        };
        let dim = space.dim;
        let origin = Point::new(vec![0.0; dim]);
        let domain = match i % 4 {
            0 | 3 => Domain::ball(space, origin.clone(), 10.0),
            1 => Domain::all(space),
            _ => Domain::bbox(
                space,
                Point::new(vec![-10.0; dim]),
                Point::new(vec![10.0; dim]),
            ),
        };
        let x0 = rand_point(&mut rng, dim, 4.0);
        let z = loop {
            let z = rand_point(&mut rng, dim, 4.0);
            if space.dist2(&x0, &z) > 0.1 {
                break z;
            }
        };
        let w = rand_point(&mut rng, dim, 4.0);
        let d0 = prop_delta0(&space, &domain, &x0, &z)
            .unwrap_or_else(|e| panic!("criterion 2: FAIL — instance {i}: {e}"));
        assert!(d0 > 0.0, "criterion 2: FAIL — nonpositive bound");
        let path = Curve::polyline(&[x0.clone(), w, z]);
        for j in 1..=10 {
            let delta = d0 * j as f64 / 10.0;
            let set = sphere_crossings(&path, &space, &x0, delta, path.range(), 1e-10).unwrap();
            assert!(
                !set.is_empty(),
                "criterion 2: FAIL — instance {i}: radius {delta} (bound {d0}) never crossed"
            );
            checked += 1;
        }
    }
    println!(
        "criterion 2: PASS — {checked} sphere radii at or under the guaranteed bound were all crossed"
    );
}

#[test]
fn criterion_3_bent_paths_cross_their_spheres_twice() {
    let mut rng = rng_for(3);
    let mut checked = 0u32;
    for i in 0..100 {
        let space = if i % 2 == 0 { Space::euclidean(2) } else { Space::chebyshev() };
        let domain = Domain::ball(space, Point::xy(0.0, 0.0), 10.0);
        let (x, y, x0) = loop {
            let x = rand_point(&mut rng, 2, 2.0);
            let y = rand_point(&mut rng, 2, 2.0);
            let x0 = rand_point(&mut rng, 2, 2.0);
            if space.dist2(&x, &x0) > 0.05
                && space.dist2(&y, &x0) > 0.05
                && space.dist2(&x, &y) > 0.05
            {
                break (x, y, x0);
            }
        };
        let eps = domain.interior_radius(&x0).unwrap();
        let tilde = 0.5 * eps.min(space.dist2(&x, &x0)).min(space.dist2(&y, &x0));
        let path = Curve::polyline(&[x, x0.clone(), y]);
        for _ in 0..10 {
            // Log-uniform over two decades of the admissible range.
            let u = (0.01f64).powf(rng.gen_range(0.0..1.0));
            let delta = tilde * u;
            let n = brute_force_crossings(&path, &space, &x0, delta, 100_000);
            assert!(
                n >= 2,
                "criterion 3: FAIL — instance {i}: radius {delta} crossed {n} time(s)"
            );
            checked += 1;
        }
    }
    println!(
        "criterion 3: PASS — {checked} working spheres on two-branch paths each crossed at least twice"
    );
}

/// Independent root finder for criterion 4: plain grid sampling plus
/// bisection on the residual, sharing no code with the library's solvers.
fn oracle_roots(f: &dyn Fn(f64) -> f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_f = f(0.0);
    for i in 1..=samples {
        let t = i as f64 / samples as f64;
        let ft = f(t);
        if prev_f == 0.0 {
            roots.push(prev_t);
        } else if ft != 0.0 && prev_f.is_sign_positive() != ft.is_sign_positive() {
            let (mut lo, mut hi) = (prev_t, t);
            let mut flo = prev_f;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.is_sign_positive() == flo.is_sign_positive() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_f = ft;
    }
    if prev_f == 0.0 {
        roots.push(prev_t);
    }
    roots
}

/// Reject near-tangent probes: a boundary value inside the margin, an exact
/// node zero, or a small local dip of `|f|` that stays on one side (the
/// residual grazes the sphere without committing to a crossing) all make
/// root counting ill-conditioned. Transversal crossings survive: around
/// them the nodes of smallest `|f|` have neighbors of opposite sign.
fn ill_conditioned(f: &dyn Fn(f64) -> f64, margin: f64) -> bool {
    const N: usize = 2000;
    let vals: Vec<f64> = (0..=N).map(|k| f(k as f64 / N as f64)).collect();
    if vals[0].abs() < margin || vals[N].abs() < margin {
        return true;
    }
    if vals.iter().any(|v| *v == 0.0) {
        return true;
    }
    for k in 1..N {
        let dip = vals[k].abs() < margin
            && vals[k].abs() <= vals[k - 1].abs()
            && vals[k].abs() <= vals[k + 1].abs();
        let same_side = vals[k - 1].is_sign_positive() == vals[k].is_sign_positive()
            && vals[k].is_sign_positive() == vals[k + 1].is_sign_positive();
        if dip && same_side {
            return true;
        }
    }
    false
}

#[test]
fn criterion_4_solvers_match_an_independent_oracle() {
    let mut rng = rng_for(4);
    let mut total_roots = 0usize;
    for i in 0..200 {
        let kind = i % 3;
        // Most probes get their sphere centered just off a point of the
        // curve so that crossings are the common case, not the exception.
        let aim = rng.gen_bool(0.7);
        let (curve, space, c, r, f): (Curve, Space, Point, f64, Box<dyn Fn(f64) -> f64>) = loop {
            let r = rng.gen_range(0.5..2.0);
            if kind < 2 {
                // A straight segment; raw arithmetic residual in the
                // euclidean (kind 0) or max (kind 1) metric.
                let a = rand_point(&mut rng, 2, 6.0);
                let b = rand_point(&mut rng, 2, 6.0);
                let c = if aim {
                    let s = rng.gen_range(0.25..0.75);
                    Point::xy(
                        a.coords[0] + s * (b.coords[0] - a.coords[0])
                            + rng.gen_range(-0.4 * r..0.4 * r),
                        a.coords[1] + s * (b.coords[1] - a.coords[1])
                            + rng.gen_range(-0.4 * r..0.4 * r),
                    )
                } else {
                    rand_point(&mut rng, 2, 4.0)
                };
                let (ax, ay) = (a.coords[0], a.coords[1]);
                let (bx, by) = (b.coords[0], b.coords[1]);
                let (cx, cy) = (c.coords[0], c.coords[1]);
                let euclid = kind == 0;
                let f = move |t: f64| {
                    let x = ax + t * (bx - ax) - cx;
                    let y = ay + t * (by - ay) - cy;
                    if euclid {
                        (x * x + y * y).sqrt() - r
                    } else {
                        x.abs().max(y.abs()) - r
                    }
                };
                if ill_conditioned(&f, 0.05) {
                    continue;
                }
                let space = if euclid { Space::euclidean(2) } else { Space::chebyshev() };
                break (Curve::polyline(&[a, b]), space, c, r, Box::new(f));
            } else {
                // A circle arc probed against another sphere.
                let space = Space::euclidean(2);
                let c1 = rand_point(&mut rng, 2, 3.0);
                let r1 = rng.gen_range(0.5..2.0);
                let (ta, tb) = (
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                let a = Point::xy(c1.coords[0] + r1 * ta.cos(), c1.coords[1] + r1 * ta.sin());
                let b = Point::xy(c1.coords[0] + r1 * tb.cos(), c1.coords[1] + r1 * tb.sin());
                if space.dist2(&a, &b) < 1e-6 {
                    continue;
                }
                let arc = detour::boundary_path(&space, &c1, r1, &a, &b, 1e-9).unwrap();
                let c = if aim {
                    let on = arc.eval_unchecked(rng.gen_range(0.15..0.85));
                    Point::xy(
                        on.coords[0] + rng.gen_range(-0.4 * r..0.4 * r),
                        on.coords[1] + rng.gen_range(-0.4 * r..0.4 * r),
                    )
                } else {
                    rand_point(&mut rng, 2, 4.0)
                };
                let (cx, cy) = (c.coords[0], c.coords[1]);
                let probe = arc.clone();
                let f = move |t: f64| {
                    let p = probe.eval_unchecked(t);
                    let (x, y) = (p.coords[0] - cx, p.coords[1] - cy);
                    (x * x + y * y).sqrt() - r
                };
                if ill_conditioned(&f, 0.05) {
                    continue;
                }
                break (arc, space, c, r, Box::new(f));
            }
        };
        let solver = sphere_crossings(&curve, &space, &c, r, curve.range(), 1e-10)
            .unwrap()
            .params();
        let oracle = oracle_roots(&f, 1_000_000);
        assert_eq!(
            solver.len(),
            oracle.len(),
            "criterion 4: FAIL — instance {i} (kind {kind}): solver found {:?}, oracle {:?}",
            solver,
            oracle
        );
        for (s, o) in solver.iter().zip(&oracle) {
            assert!(
                (s - o).abs() <= 1e-9,
                "criterion 4: FAIL — instance {i}: root {s} vs oracle {o}"
            );
        }
        total_roots += solver.len();
    }
    assert!(total_roots >= 150, "criterion 4: FAIL — suite too thin ({total_roots} roots)");
    println!(
        "criterion 4: PASS — 200 instances, {total_roots} crossings matched a million-sample oracle within 1e-9"
    );
}

#[test]
fn criterion_5_unrepairable_instances_are_rejected() {
    let mut rng = rng_for(5);
    let mut rejected = 0;
    for i in 0..50 {
        let problem = if i % 2 == 0 {
            // The line: spheres are two-point sets, never path-connected.
            let a = 1.0 + rng.gen_range(0.0..2.0);
            let m = rng.gen_range(-0.5..0.5);
            RepairProblem {
                space: Space::line(),
                domain: Domain::ball(Space::line(), Point::scalar(0.0), 5.0),
                path: Curve::polyline(&[Point::scalar(-a), Point::scalar(a)]),
                obstacles: ObstacleSet::finite(vec![Point::scalar(m)]),
                options: Options::default(),
            }
        } else {
            // Planar, but the removed point sits exactly on the domain
            // boundary (axis-aligned, so the distance is bit-exact).
            let space = Space::euclidean(2);
            let radius = 5.0 + rng.gen_range(0.0..3.0);
            let on_boundary = match i % 8 {
                1 => Point::xy(radius, 0.0),
                3 => Point::xy(-radius, 0.0),
                5 => Point::xy(0.0, radius),
                _ => Point::xy(0.0, -radius),
            };
            RepairProblem {
                space,
                domain: Domain::ball(space, Point::xy(0.0, 0.0), radius),
                path: Curve::polyline(&[
                    Point::xy(-1.0, -1.0),
                    on_boundary.clone(),
                    Point::xy(1.0, 1.0),
                ]),
                obstacles: ObstacleSet::finite(vec![on_boundary]),
                options: Options::default(),
            }
        };
        let err = check_hypotheses(&problem)
            .expect_err("criterion 5: FAIL — invalid instance accepted");
        assert!(err.is_rejection(), "criterion 5: FAIL — instance {i}: wrong class: {err}");
        let err = puncture(&problem).expect_err("criterion 5: FAIL — repair did not refuse");
        assert!(err.is_rejection(), "criterion 5: FAIL — instance {i}: wrong class: {err}");
        rejected += 1;
    }
    println!("criterion 5: PASS — {rejected}/50 out-of-hypothesis instances rejected (100%)");
}

#[test]
fn criterion_6_lattice_zigzags_hit_exactly_k_points() {
    let mut rng = rng_for(6);
    for i in 0..100 {
        let k = rng.gen_range(3..=7usize);
        let x0: i64 = rng.gen_range(-20..20);
        let y0: i64 = rng.gen_range(-20..20);
        let mut grid_pts = vec![(x0, y0)];
        for _ in 1..k {
            let (px, py) = *grid_pts.last().unwrap();
            let dy: i64 = rng.gen_range(-1..=1);
            grid_pts.push((px + 1, py + dy));
        }
        let mut waypoints = vec![Point::xy(x0 as f64 - 0.5, y0 as f64 + 0.25)];
        waypoints.extend(grid_pts.iter().map(|&(a, b)| Point::xy(a as f64, b as f64)));
        let (lx, ly) = *grid_pts.last().unwrap();
        waypoints.push(Point::xy(lx as f64 + 0.5, ly as f64 - 0.25));

        let space = Space::euclidean(2);
        let base = RepairProblem {
            space,
            domain: Domain::all(space),
            path: Curve::polyline(&waypoints),
            obstacles: ObstacleSet::generator(Arc::new(LatticeGenerator::new(
                space,
                Point::xy(0.0, 0.0),
                1.0,
            ))),
            options: Options::default(),
        };
        let schedule = hit_schedule(&base).unwrap();
        assert_eq!(
            schedule.len(),
            k,
            "criterion 6: FAIL — instance {i} scheduled {} of {k} grid points",
            schedule.len()
        );
        for mode in [PunctureMode::Scheduled, PunctureMode::Iterative] {
            let mut problem = base.clone();
            problem.options.puncture_mode = mode;
            let (_, records, report) = puncture(&problem)
                .unwrap_or_else(|e| panic!("criterion 6: FAIL — instance {i} ({mode:?}): {e}"));
            assert_eq!(records.len(), k, "criterion 6: FAIL — {mode:?} detour count");
            assert!(
                report.passed(),
                "criterion 6: FAIL — instance {i} ({mode:?}): {:?}",
                report.violations
            );
            assert!(report.min_clearance > 0.0);
        }
    }
    println!(
        "criterion 6: PASS — 100 zig-zags across the integer grid hit and cleared exactly 3..=7 points in both modes"
    );
}

#[test]
fn criterion_7_repair_is_idempotent() {
    let mut rng = rng_for(1); // regenerate the criterion-1 suite
    for i in 0..500 {
        let problem = random_planar_instance(&mut rng);
        let (repaired, _, _) = puncture(&problem).unwrap();
        let again = RepairProblem { path: repaired.clone(), ..problem };
        let (second, records, report) = puncture(&again).unwrap();
        assert!(
            records.is_empty(),
            "criterion 7: FAIL — instance {i} scheduled {} detours on a repaired curve",
            records.len()
        );
        assert_eq!(
            second, repaired,
            "criterion 7: FAIL — instance {i}: second repair changed the curve"
        );
        assert!(report.passed(), "criterion 7: FAIL — instance {i}: {:?}", report.violations);
    }
    println!("criterion 7: PASS — repairing an already-repaired curve is the identity (500/500)");
}

#[test]
fn criterion_8_sampling_modulus_contracts_with_resolution() {
    let mut rng = rng_for(8);
    let mut checked = 0;
    while checked < 20 {
        let problem = random_planar_instance(&mut rng);
        let (out, records, _) = puncture(&problem).unwrap();
        if records.is_empty() {
            continue; // only spliced curves are interesting here
        }
        let moduli: Vec<f64> = [512usize, 1024, 2048, 4096]
            .iter()
            .map(|&n| validate(&out, &problem, n).continuity_modulus)
            .collect();
        for w in moduli.windows(2) {
            assert!(
                w[1] <= 0.75 * w[0] + 1e-12,
                "criterion 8: FAIL — modulus went {} -> {} on doubling",
                w[0],
                w[1]
            );
        }
        checked += 1;
    }
    println!(
        "criterion 8: PASS — grid modulus contracted by at least 25% per doubling, 512 to 4096, on {checked} spliced curves"
    );
}

//! Independent validation of repaired curves.
//!
//! [`validate`] never trusts the construction that produced a curve: it
//! re-derives the schedule and radii from the problem statement, measures
//! clearances with exact per-piece minimum distances (plus refined scans for
//! arcs), and counts sphere crossings on a dense grid with plain sign
//! bookkeeping. [`check_hypotheses`] front-loads every reason a problem
//! cannot be repaired at all, so callers can distinguish "this input is
//! outside the guarantees" from "the output is wrong".

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::Curve;
use crate::repair::{
    compute_radii, ensure_endpoints_distinct, ensure_path_in_domain, hit_schedule,
    obstacles_near_curve, piece_min_distance, ObstacleSet, RepairError, RepairProblem,
};
use crate::space::{Point, Space};

/// One verified defect in a repaired curve (or its problem statement).
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("curve endpoints differ from the original path's endpoints")]
    EndpointMoved,
    #[error("curve leaves the domain near parameter {t}")]
    LeavesDomain { t: f64 },
    #[error("curve passes within {clearance} of obstacle {obstacle:?}")]
    TouchesObstacle { obstacle: Point, clearance: f64 },
    #[error(
        "original path crosses the working sphere of {obstacle:?} only {count} time(s); \
         the construction guarantees at least two"
    )]
    SphereUndercrossed { obstacle: Point, count: usize },
    #[error("could not derive working radii: {message}")]
    RadiiUnavailable { message: String },
}

/// The validation report for a (proposed) repaired curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairReport {
    /// The curve starts and ends exactly where the original path does.
    pub endpoints_ok: bool,
    /// Largest distance between consecutive grid samples: an upper-bound
    /// witness for the curve's modulus of continuity at this resolution.
    /// Halving the grid step should roughly halve it.
    pub continuity_modulus: f64,
    /// Smallest distance from the curve's trace to any obstacle
    /// (`+inf` when no obstacle lies anywhere near the curve).
    pub min_clearance: f64,
    /// Every grid sample lies inside the domain.
    pub containment_ok: bool,
    /// Per scheduled obstacle: how often the *original* path crosses its
    /// working sphere, counted by grid sign changes. The construction
    /// guarantees at least two (once inbound, once outbound).
    pub crossing_counts: Vec<(Point, usize)>,
    pub violations: Vec<Violation>,
}

impl RepairReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Count how often `curve` crosses the sphere of radius `radius` around
/// `center`, by classifying `samples` grid values of (distance − radius)
/// into negative / near-zero / positive runs. Each direct negative↔positive
/// flip is one crossing; each near-zero run (a touch or a stretch riding the
/// sphere) counts once. Tangencies are only seen when a grid point lands on
/// them, so symmetric instances want odd sample counts.
pub fn brute_force_crossings(
    curve: &Curve,
    space: &Space,
    center: &Point,
    radius: f64,
    samples: usize,
) -> usize {
    #[derive(Clone, Copy, PartialEq)]
    enum Class {
        Neg,
        Zero,
        Pos,
    }
    let n = samples.max(2);
    let (lo, hi) = curve.range();
    let band = 1e-10 * radius.max(1.0);
    let mut runs: Vec<Class> = Vec::new();
    for i in 0..n {
        let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let f = space.dist(&curve.eval_unchecked(t), center) - radius;
        let c = if f.abs() <= band {
            Class::Zero
        } else if f < 0.0 {
            Class::Neg
        } else {
            Class::Pos
        };
        if runs.last() != Some(&c) {
            runs.push(c);
        }
    }
    let touches = runs.iter().filter(|c| **c == Class::Zero).count();
    let flips = runs
        .windows(2)
        .filter(|w| matches!((w[0], w[1]), (Class::Neg, Class::Pos) | (Class::Pos, Class::Neg)))
        .count();
    touches + flips
}

/// Validate `curve` as a repair of `problem`'s path, on a grid of `samples`
/// points (plus every piece joint).
pub fn validate(curve: &Curve, problem: &RepairProblem, samples: usize) -> RepairReport {
    let space = &problem.space;
    let tol = problem.options.tol_boundary;
    let mut violations = Vec::new();

    let endpoints_ok =
        curve.start() == problem.path.start() && curve.end() == problem.path.end();
    if !endpoints_ok {
        violations.push(Violation::EndpointMoved);
    }

    let grid = curve.sample_params(samples.max(2));
    let mut containment_ok = true;
    let mut continuity_modulus: f64 = 0.0;
    let mut prev: Option<Point> = None;
    for &t in &grid {
        let p = curve.eval_unchecked(t);
        if containment_ok && !problem.domain.contains(&p) {
            containment_ok = false;
            violations.push(Violation::LeavesDomain { t });
        }
        if let Some(q) = &prev {
            continuity_modulus = continuity_modulus.max(space.dist(q, &p));
        }
        prev = Some(p);
    }

    // Clearance: exact per-piece minima against every obstacle in sight.
    // When a region query sees nothing near the curve, widen the margin a
    // few times before concluding the clearance is effectively unbounded.
    let mut margin = 1.0;
    let mut candidates = obstacles_near_curve(problem, curve, margin);
    if matches!(problem.obstacles, ObstacleSet::DiscreteGenerator(_)) {
        while candidates.is_empty() && margin < 100.0 {
            margin *= 2.0;
            candidates = obstacles_near_curve(problem, curve, margin);
        }
    }
    let mut min_clearance = f64::INFINITY;
    for (m, _) in &candidates {
        let d = curve
            .pieces()
            .iter()
            .map(|pp| piece_min_distance(&pp.piece, space, m))
            .fold(f64::INFINITY, f64::min);
        if d < min_clearance {
            min_clearance = d;
        }
        if d <= tol {
            violations.push(Violation::TouchesObstacle { obstacle: m.clone(), clearance: d });
        }
    }

    // Crossing counts for the scheduled obstacles, measured on the original
    // path: the construction's entry/exit guarantee.
    let mut crossing_counts = Vec::new();
    let schedule_and_radii = hit_schedule(problem).and_then(|schedule| {
        let active: Vec<(Point, f64)> =
            schedule.records.iter().map(|r| (r.obstacle.clone(), r.isolation)).collect();
        compute_radii(problem, &active)
    });
    match schedule_and_radii {
        Ok(radii) => {
            for entry in &radii.entries {
                let count = brute_force_crossings(
                    &problem.path,
                    space,
                    &entry.obstacle,
                    entry.working,
                    samples.max(2),
                );
                if count < 2 {
                    violations.push(Violation::SphereUndercrossed {
                        obstacle: entry.obstacle.clone(),
                        count,
                    });
                }
                crossing_counts.push((entry.obstacle.clone(), count));
            }
        }
        Err(e) => {
            violations.push(Violation::RadiiUnavailable { message: e.to_string() });
        }
    }

    RepairReport {
        endpoints_ok,
        continuity_modulus,
        min_clearance,
        containment_ok,
        crossing_counts,
        violations,
    }
}

/// Check every precondition of the repair construction, mapping each failure
/// to the matching [`RepairError`] rejection.
///
/// For region-query obstacle sets only the obstacles near the path's trace
/// can be inspected (the set may be infinite); for finite sets every listed
/// obstacle is checked.
pub fn check_hypotheses(problem: &RepairProblem) -> Result<(), RepairError> {
    problem.options.validate()?;
    ensure_endpoints_distinct(problem)?;
    ensure_path_in_domain(problem)?;
    if problem.obstacles.is_empty_finite() {
        return Ok(());
    }
    if !problem.space.boundary_spheres_path_connected() {
        return Err(crate::space::SpaceError::HypothesisViolated.into());
    }
    let tol = problem.options.tol_boundary;
    let candidates = obstacles_near_curve(problem, &problem.path, 1.0);
    let x = problem.path.start();
    let y = problem.path.end();
    for (p, _) in &candidates {
        // Bubbles up NotInterior for boundary or exterior obstacles.
        problem.domain.interior_radius(p)?;
        if problem.space.dist(p, x) <= tol || problem.space.dist(p, y) <= tol {
            return Err(RepairError::EndpointOnObstacle);
        }
    }
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            if problem.space.dist(&candidates[i].0, &candidates[j].0) <= 2.0 * tol {
                return Err(RepairError::DuplicateObstacles);
            }
        }
    }
    Ok(())
}

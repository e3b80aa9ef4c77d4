//! The detour pipeline: find where a path meets removed points, size a
//! working ball around each, and splice sphere-boundary detours in.
//!
//! The construction mirrors how one proves that deleting a finite (or
//! closed, isolated, countable) set `M` of interior points from a
//! path-connected set `U` leaves it path-connected:
//!
//! 1. [`hit_schedule`] walks the path and greedily records, per newly met
//!    obstacle, the first and last parameters where the path touches it.
//!    Everything between a record's first and last touch — including touches
//!    of *other* obstacles — will be cut away wholesale, which is why each
//!    gap between consecutive records is guaranteed obstacle-free.
//! 2. [`compute_radii`] sizes a working ball around each recorded obstacle:
//!    strictly less than half the minimum of the domain's interior radius
//!    there, the obstacle's isolation radius, its distances to the two path
//!    endpoints, and its distance to the other recorded obstacles. That
//!    guarantees the closed balls stay inside the domain, contain no other
//!    obstacle and neither endpoint, and are pairwise disjoint.
//! 3. [`puncture`] finds where the path crosses each working sphere just
//!    before the first touch and just after the last one (such crossings
//!    always exist: the path runs from the sphere's center to points outside
//!    the ball), connects the two crossing points with
//!    [`crate::space::boundary_path`], and splices the detours in.
//!
//! The result leaves the original endpoints untouched, coincides with the
//! original path outside the replaced windows, and keeps a strictly positive
//! clearance from every obstacle.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{
    first_crossing, last_crossing, Curve, CurveError, Piece, SpliceInsert,
};
use crate::space::{boundary_path, dot, sub, Domain, Point, Space, SpaceError, SpaceKind};
use crate::verify::{validate, RepairReport};

/// Default fraction of the radius bound actually used as the working radius.
pub const DEFAULT_DELTA_FRACTION: f64 = 0.5;

/// Default sampling resolution for validation grids.
pub const DEFAULT_SAMPLES: usize = 4096;

#[derive(Debug, Error)]
pub enum RepairError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("a path endpoint coincides with an obstacle")]
    EndpointOnObstacle,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("obstacle set contains effectively duplicate points")]
    DuplicateObstacles,
    #[error("path trace leaves the domain near parameter {t}")]
    PathOutsideDomain { t: f64 },
    #[error("computed splice windows overlap or are out of order")]
    ScheduleOverlap,
    #[error("detour oracle violated its contract: {0}")]
    OracleContractViolation(String),
}

impl RepairError {
    /// Whether this error rejects the *problem* (a hypothesis of the
    /// construction fails) rather than reporting an internal failure.
    pub fn is_rejection(&self) -> bool {
        matches!(
            self,
            RepairError::Space(SpaceError::HypothesisViolated)
                | RepairError::Space(SpaceError::NotInterior)
                | RepairError::EndpointOnObstacle
                | RepairError::DegenerateInput(_)
                | RepairError::DuplicateObstacles
                | RepairError::PathOutsideDomain { .. }
        )
    }
}

/// How much of each admissible splice window to replace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpliceExtent {
    /// Enter at the last sphere crossing before the first touch and leave at
    /// the first crossing after the last touch: the smallest admissible cut.
    Tightest,
    /// Enter at the first admissible crossing and leave at the last one.
    Widest,
}

/// How to process multiple obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PunctureMode {
    /// Schedule all obstacles up front, then splice every detour at once.
    Scheduled,
    /// Remove one obstacle at a time, re-running the single-obstacle repair
    /// on the evolving curve (the inductive construction).
    Iterative,
}

/// Tunable knobs; [`Options::default`] matches the documented defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Options {
    /// Working radius as a fraction of the strict radius bound, in (0, 1).
    pub delta_fraction: f64,
    /// Residual tolerance for sphere-crossing roots.
    pub tol_root: f64,
    /// Tolerance for on-sphere preconditions and obstacle-touch detection.
    pub tol_boundary: f64,
    /// Validation grid resolution.
    pub samples: usize,
    pub splice_extent: SpliceExtent,
    pub puncture_mode: PunctureMode,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            delta_fraction: DEFAULT_DELTA_FRACTION,
            tol_root: crate::curve::DEFAULT_TOL_ROOT,
            tol_boundary: crate::space::DEFAULT_TOL_BOUNDARY,
            samples: DEFAULT_SAMPLES,
            splice_extent: SpliceExtent::Tightest,
            puncture_mode: PunctureMode::Scheduled,
        }
    }
}

impl Options {
    pub fn validate(&self) -> Result<(), RepairError> {
        if !(self.delta_fraction > 0.0 && self.delta_fraction < 1.0) {
            return Err(RepairError::DegenerateInput(
                "delta_fraction must lie strictly between 0 and 1",
            ));
        }
        if !(self.tol_root > 0.0 && self.tol_boundary > 0.0) {
            return Err(RepairError::DegenerateInput("tolerances must be positive"));
        }
        if self.samples < 2 {
            return Err(RepairError::DegenerateInput("samples must be at least 2"));
        }
        Ok(())
    }
}

/// Region query over a countable, closed, isolated obstacle set.
pub trait RegionQuery: Send + Sync {
    /// All obstacle points inside the closed ball `B(center, radius)`, each
    /// paired with its isolation radius: the largest `r` such that the open
    /// ball of radius `r` around the point contains no other obstacle.
    fn points_within(&self, center: &Point, radius: f64) -> Vec<(Point, f64)>;
}

/// The removed set `M`: an explicit finite list, or a region-query view of a
/// countably infinite discrete set.
#[derive(Clone)]
pub enum ObstacleSet {
    Finite(Vec<Point>),
    DiscreteGenerator(Arc<dyn RegionQuery>),
}

impl fmt::Debug for ObstacleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstacleSet::Finite(pts) => f.debug_tuple("Finite").field(pts).finish(),
            ObstacleSet::DiscreteGenerator(_) => f.write_str("DiscreteGenerator(..)"),
        }
    }
}

impl ObstacleSet {
    pub fn finite(points: Vec<Point>) -> Self {
        ObstacleSet::Finite(points)
    }

    pub fn generator(q: Arc<dyn RegionQuery>) -> Self {
        ObstacleSet::DiscreteGenerator(q)
    }

    pub fn is_empty_finite(&self) -> bool {
        matches!(self, ObstacleSet::Finite(v) if v.is_empty())
    }

    /// Obstacles relevant to a region, with isolation radii. Finite sets
    /// return every obstacle regardless of the region (the list is small and
    /// the isolation radii must see the whole set anyway).
    pub fn candidates_near(
        &self,
        space: &Space,
        center: &Point,
        radius: f64,
    ) -> Vec<(Point, f64)> {
        match self {
            ObstacleSet::Finite(pts) => pts
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let iso = pts
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, q)| space.dist(p, q))
                        .fold(f64::INFINITY, f64::min);
                    (p.clone(), iso)
                })
                .collect(),
            ObstacleSet::DiscreteGenerator(g) => g.points_within(center, radius),
        }
    }

    /// The isolation radius of `p`, if `p` is an obstacle (within `tol`).
    pub fn isolation_of(&self, space: &Space, p: &Point, tol: f64) -> Option<f64> {
        let cands = self.candidates_near(space, p, tol.max(1e-9));
        cands
            .iter()
            .find(|(q, _)| space.dist(p, q) <= tol)
            .map(|(_, iso)| *iso)
    }
}

/// The integer grid `origin + step * Z^dim`, as a [`RegionQuery`]. Closed,
/// discrete, every point isolated with isolation radius `step` (under all
/// supported metrics the nearest distinct grid point is one step away).
#[derive(Debug, Clone)]
pub struct LatticeGenerator {
    pub space: Space,
    pub origin: Point,
    pub step: f64,
}

impl LatticeGenerator {
    pub fn new(space: Space, origin: Point, step: f64) -> Self {
        assert!(step > 0.0, "lattice step must be positive");
        assert_eq!(origin.dim(), space.dim);
        LatticeGenerator { space, origin, step }
    }
}

impl RegionQuery for LatticeGenerator {
    fn points_within(&self, center: &Point, radius: f64) -> Vec<(Point, f64)> {
        let dim = self.space.dim;
        let slack = radius + 1e-9 * radius.max(1.0);
        let lo_hi: Vec<(i64, i64)> = (0..dim)
            .map(|i| {
                let lo = ((center.coords[i] - slack - self.origin.coords[i]) / self.step).ceil();
                let hi = ((center.coords[i] + slack - self.origin.coords[i]) / self.step).floor();
                (lo as i64, hi as i64)
            })
            .collect();
        let mut out = Vec::new();
        let mut idx: Vec<i64> = lo_hi.iter().map(|(lo, _)| *lo).collect();
        'outer: loop {
            let p = Point::new(
                (0..dim).map(|i| self.origin.coords[i] + self.step * idx[i] as f64).collect(),
            );
            if self.space.dist(center, &p) <= slack {
                out.push((p, self.step));
            }
            for i in 0..dim {
                idx[i] += 1;
                if idx[i] <= lo_hi[i].1 {
                    continue 'outer;
                }
                idx[i] = lo_hi[i].0;
                if i == dim - 1 {
                    break 'outer;
                }
            }
            if dim == 0 {
                break;
            }
        }
        out
    }
}

/// A path-repair instance: the ambient space and domain, the path to repair,
/// the removed set, and the knobs.
#[derive(Debug, Clone)]
pub struct RepairProblem {
    pub space: Space,
    pub domain: Domain,
    pub path: Curve,
    pub obstacles: ObstacleSet,
    pub options: Options,
}

/// The sized working ball around one obstacle, with every term of the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusEntry {
    pub obstacle: Point,
    /// Interior radius of the domain at the obstacle (`+inf` on `all`).
    pub interior: f64,
    /// Isolation radius with respect to the full obstacle set.
    pub isolation: f64,
    /// Distance to the nearest other active obstacle (`+inf` if alone).
    pub separation: f64,
    /// Half the minimum of `interior`, `isolation`, `separation`, and the
    /// distances to the two path endpoints: the strict upper bound.
    pub formula: f64,
    /// The radius actually used: `delta_fraction * formula`.
    pub working: f64,
}

/// Working-ball radii for the active obstacles.
#[derive(Debug, Clone, PartialEq)]
pub struct DetourRadii {
    pub entries: Vec<RadiusEntry>,
}

/// One scheduled obstacle: the first and last parameters where the path
/// touches it inside its admissible window.
#[derive(Debug, Clone, PartialEq)]
pub struct HitRecord {
    pub obstacle: Point,
    /// Isolation radius carried along for the radius computation.
    pub isolation: f64,
    /// First touch parameter.
    pub first: f64,
    /// Last touch parameter (over the whole remaining path, so later touches
    /// of the same obstacle — even interleaved with other obstacles — fall
    /// inside this record's span).
    pub last: f64,
}

/// The full touch schedule of a path against the obstacle set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HitSchedule {
    pub records: Vec<HitRecord>,
    /// The last parameter at which the path touches any obstacle.
    pub t_star: Option<f64>,
    /// Every obstacle the path touches (including ones swallowed by another
    /// record's span and therefore absent from `records`).
    pub hit_points: Vec<Point>,
}

impl HitSchedule {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }
}

/// One spliced detour in the repaired curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SpliceRecord {
    pub obstacle: Point,
    pub radius: RadiusEntry,
    /// First and last touch parameters of the obstacle on the pre-splice
    /// curve.
    pub hit_first: f64,
    pub hit_last: f64,
    /// Where the repaired curve leaves the original to enter the sphere, and
    /// where it rejoins.
    pub entry_param: f64,
    pub exit_param: f64,
    pub entry_point: Point,
    pub exit_point: Point,
    /// The boundary detour that replaced the window.
    pub detour: Curve,
}

impl SpliceRecord {
    pub fn working_radius(&self) -> f64 {
        self.radius.working
    }
}

/// Callback supplying a replacement sub-path between two obstacles, used by
/// [`splice_via_oracle`] when the touch sequence does not terminate and the
/// constructive schedule cannot run. The oracle's contract: the returned
/// curve starts at `from`, ends at `to`, stays inside the domain, and its
/// interior trace avoids every obstacle.
pub trait DetourOracle {
    fn connect(&self, from: &Point, to: &Point) -> Curve;
}

/// The simplest oracle: a straight segment. Satisfies the contract whenever
/// the segment stays inside the domain and meets no third obstacle.
pub struct SegmentOracle;

impl DetourOracle for SegmentOracle {
    fn connect(&self, from: &Point, to: &Point) -> Curve {
        Curve::polyline(&[from.clone(), to.clone()])
    }
}

/// The guaranteed crossing radius bound: half the minimum of the domain's
/// interior radius at `x0` and the distance from `x0` to `z`. For every
/// working radius at or below this bound, any curve from `x0` to `z` must
/// cross the sphere of that radius around `x0`.
pub fn prop_delta0(
    space: &Space,
    domain: &Domain,
    x0: &Point,
    z: &Point,
) -> Result<f64, RepairError> {
    space.check_dim(x0)?;
    space.check_dim(z)?;
    let d = space.dist(x0, z);
    if d == 0.0 {
        return Err(RepairError::DegenerateInput("the two points must be distinct"));
    }
    let eps = domain.interior_radius(x0)?;
    Ok(0.5 * eps.min(d))
}

/// Size the working balls for the active obstacles (each given with its
/// isolation radius relative to the full obstacle set).
pub fn compute_radii(
    problem: &RepairProblem,
    active: &[(Point, f64)],
) -> Result<DetourRadii, RepairError> {
    problem.options.validate()?;
    let space = &problem.space;
    let x = problem.path.start();
    let y = problem.path.end();
    let tol = problem.options.tol_boundary;
    let mut entries = Vec::with_capacity(active.len());
    for (k, (p, iso)) in active.iter().enumerate() {
        let interior = problem.domain.interior_radius(p)?;
        let dx = space.dist(p, x);
        let dy = space.dist(p, y);
        if dx <= tol || dy <= tol {
            return Err(RepairError::EndpointOnObstacle);
        }
        let separation = active
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, (q, _))| space.dist(p, q))
            .fold(f64::INFINITY, f64::min);
        let formula = 0.5 * interior.min(*iso).min(dx).min(dy).min(separation);
        if !(formula > 0.0) {
            return Err(RepairError::DuplicateObstacles);
        }
        let working = problem.options.delta_fraction * formula;
        entries.push(RadiusEntry {
            obstacle: p.clone(),
            interior,
            isolation: *iso,
            separation,
            formula,
            working,
        });
    }
    // The working balls are pairwise disjoint by construction: each radius is
    // under half the pairwise separation.
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            let d = space.dist(&entries[i].obstacle, &entries[j].obstacle);
            assert!(
                entries[i].working + entries[j].working < d,
                "working balls must be disjoint"
            );
        }
    }
    Ok(DetourRadii { entries })
}

/// Maximal parameter runs (usually single points) where a piece passes
/// within `tol` of `m`, in the piece's local parameter.
fn piece_touch_runs(piece: &Piece, space: &Space, m: &Point, tol: f64) -> Vec<(f64, f64)> {
    match (piece, space.kind) {
        (Piece::Constant { at }, _) => {
            if space.dist(at, m) <= tol {
                vec![(0.0, 1.0)]
            } else {
                vec![]
            }
        }
        (Piece::Linear { from, to }, SpaceKind::Euclidean) => {
            let u = sub(to, from);
            let uu = dot(&u, &u);
            let s = if uu > 0.0 { (dot(&sub(m, from), &u) / uu).clamp(0.0, 1.0) } else { 0.0 };
            if space.dist(&piece.eval(s), m) <= tol {
                vec![(s, s)]
            } else {
                vec![]
            }
        }
        (Piece::Linear { from, to }, _) => {
            // The distance from a moving point on the segment to m is a
            // convex piecewise-linear function under the max/line metric; its
            // breakpoints are face vertices and face exchanges. The sublevel
            // set {distance <= tol} is then a single parameter interval whose
            // edges we read off the breakpoint grid (tolerance-width
            // precision is irrelevant downstream).
            let dim = from.dim();
            let off: Vec<f64> = (0..dim).map(|i| from.coords[i] - m.coords[i]).collect();
            let slope: Vec<f64> = (0..dim).map(|i| to.coords[i] - from.coords[i]).collect();
            let g = |s: f64| -> f64 {
                (0..dim).map(|i| (off[i] + s * slope[i]).abs()).fold(0.0, f64::max)
            };
            let mut nodes = vec![0.0, 1.0];
            for i in 0..dim {
                if slope[i] != 0.0 {
                    let s = -off[i] / slope[i];
                    if s > 0.0 && s < 1.0 {
                        nodes.push(s);
                    }
                }
                for j in (i + 1)..dim {
                    for sig in [1.0, -1.0] {
                        let den = slope[i] - sig * slope[j];
                        if den != 0.0 {
                            let s = (sig * off[j] - off[i]) / den;
                            if s > 0.0 && s < 1.0 {
                                nodes.push(s);
                            }
                        }
                    }
                }
            }
            nodes.sort_by(f64::total_cmp);
            nodes.dedup();
            let hits: Vec<f64> = nodes.iter().copied().filter(|&s| g(s) <= tol).collect();
            if hits.is_empty() {
                vec![]
            } else {
                vec![(hits[0], *hits.last().unwrap())]
            }
        }
        (Piece::Arc(_), _) => {
            // Scan for local minima of the distance and refine each by
            // ternary search; arcs produced by this crate keep macroscopic
            // clearance from obstacles, so touches only matter for
            // hand-built inputs.
            let g = |s: f64| -> f64 { space.dist(&piece.eval(s), m) };
            const N: usize = 256;
            let vals: Vec<f64> = (0..=N).map(|i| g(i as f64 / N as f64)).collect();
            let mut runs = Vec::new();
            for i in 0..=N {
                let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
                let right = if i == N { f64::INFINITY } else { vals[i + 1] };
                if vals[i] <= left && vals[i] <= right {
                    let (mut lo, mut hi) = (
                        if i == 0 { 0.0 } else { (i - 1) as f64 / N as f64 },
                        if i == N { 1.0 } else { (i + 1) as f64 / N as f64 },
                    );
                    for _ in 0..100 {
                        let m1 = lo + (hi - lo) / 3.0;
                        let m2 = hi - (hi - lo) / 3.0;
                        if g(m1) <= g(m2) {
                            hi = m2;
                        } else {
                            lo = m1;
                        }
                    }
                    let s = 0.5 * (lo + hi);
                    if g(s) <= tol {
                        runs.push((s, s));
                    }
                }
            }
            runs
        }
    }
}

/// Exact (or ternary-refined, for arcs) minimum distance from a piece's
/// trace to `m`.
pub(crate) fn piece_min_distance(piece: &Piece, space: &Space, m: &Point) -> f64 {
    match (piece, space.kind) {
        (Piece::Constant { at }, _) => space.dist(at, m),
        (Piece::Linear { from, to }, SpaceKind::Euclidean) => {
            let u = sub(to, from);
            let uu = dot(&u, &u);
            let s = if uu > 0.0 { (dot(&sub(m, from), &u) / uu).clamp(0.0, 1.0) } else { 0.0 };
            space.dist(&piece.eval(s), m)
        }
        (Piece::Linear { from, to }, _) => {
            // Convex piecewise-linear distance: the minimum sits on a
            // breakpoint node.
            let dim = from.dim();
            let off: Vec<f64> = (0..dim).map(|i| from.coords[i] - m.coords[i]).collect();
            let slope: Vec<f64> = (0..dim).map(|i| to.coords[i] - from.coords[i]).collect();
            let g = |s: f64| -> f64 {
                (0..dim).map(|i| (off[i] + s * slope[i]).abs()).fold(0.0, f64::max)
            };
            let mut best = g(0.0).min(g(1.0));
            for i in 0..dim {
                if slope[i] != 0.0 {
                    let s = -off[i] / slope[i];
                    if s > 0.0 && s < 1.0 {
                        best = best.min(g(s));
                    }
                }
                for j in (i + 1)..dim {
                    for sig in [1.0, -1.0] {
                        let den = slope[i] - sig * slope[j];
                        if den != 0.0 {
                            let s = (sig * off[j] - off[i]) / den;
                            if s > 0.0 && s < 1.0 {
                                best = best.min(g(s));
                            }
                        }
                    }
                }
            }
            best
        }
        (Piece::Arc(_), _) => {
            let g = |s: f64| -> f64 { space.dist(&piece.eval(s), m) };
            const N: usize = 256;
            let mut best = f64::INFINITY;
            let vals: Vec<f64> = (0..=N).map(|i| g(i as f64 / N as f64)).collect();
            for i in 0..=N {
                let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
                let right = if i == N { f64::INFINITY } else { vals[i + 1] };
                if vals[i] <= left && vals[i] <= right {
                    let (mut lo, mut hi) = (
                        if i == 0 { 0.0 } else { (i - 1) as f64 / N as f64 },
                        if i == N { 1.0 } else { (i + 1) as f64 / N as f64 },
                    );
                    for _ in 0..100 {
                        let m1 = lo + (hi - lo) / 3.0;
                        let m2 = hi - (hi - lo) / 3.0;
                        if g(m1) <= g(m2) {
                            hi = m2;
                        } else {
                            lo = m1;
                        }
                    }
                    best = best.min(g(0.5 * (lo + hi)));
                }
                best = best.min(vals[i]);
            }
            best
        }
    }
}

/// Maximal global-parameter runs where the curve passes within `tol` of `m`.
fn touch_runs(curve: &Curve, space: &Space, m: &Point, tol: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = curve.range();
    let span = (hi - lo).max(1.0);
    let mut runs: Vec<(f64, f64)> = Vec::new();
    for pp in curve.pieces() {
        for (s0, s1) in piece_touch_runs(&pp.piece, space, m, tol) {
            let a = pp.t0 + s0 * (pp.t1 - pp.t0);
            let b = pp.t0 + s1 * (pp.t1 - pp.t0);
            runs.push((a.min(b), a.max(b)));
        }
    }
    runs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for r in runs {
        if let Some(last) = merged.last_mut() {
            if r.0 <= last.1 + 1e-12 * span {
                last.1 = last.1.max(r.1);
                continue;
            }
        }
        merged.push(r);
    }
    merged
}

/// Conservative bounding ball of a curve's trace: center on the first point,
/// radius covering every piece (arcs via center distance plus arc radius).
fn trace_bounds(curve: &Curve, space: &Space) -> (Point, f64) {
    let q = curve.start().clone();
    let mut r: f64 = 0.0;
    for pp in curve.pieces() {
        match &pp.piece {
            Piece::Linear { from, to } => {
                r = r.max(space.dist(&q, from)).max(space.dist(&q, to));
            }
            Piece::Arc(a) => {
                r = r.max(space.dist(&q, &a.center) + a.radius);
            }
            Piece::Constant { at } => {
                r = r.max(space.dist(&q, at));
            }
        }
    }
    (q, r)
}

/// Obstacles that could interact with the curve, with isolation radii.
pub(crate) fn obstacles_near_curve(
    problem: &RepairProblem,
    curve: &Curve,
    margin: f64,
) -> Vec<(Point, f64)> {
    let (q, r) = trace_bounds(curve, &problem.space);
    problem.obstacles.candidates_near(&problem.space, &q, r + margin)
}

/// Build the touch schedule of the problem's path against its obstacle set.
///
/// Records are in order of first touch. Each record claims every later touch
/// of its obstacle, so the next record starts strictly after this record's
/// span, and the open gaps between consecutive spans touch no obstacle at
/// all. The final record's span always ends at the path's last obstacle
/// touch.
pub fn hit_schedule(problem: &RepairProblem) -> Result<HitSchedule, RepairError> {
    problem.options.validate()?;
    let space = &problem.space;
    let path = &problem.path;
    let tol = problem.options.tol_boundary;
    let (t_x, t_y) = path.range();
    let x = path.start();
    let y = path.end();

    let candidates = obstacles_near_curve(problem, path, tol.max(1.0));
    // Effectively-duplicate obstacles would make "which obstacle does this
    // touch belong to" ambiguous.
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            if space.dist(&candidates[i].0, &candidates[j].0) <= 2.0 * tol {
                return Err(RepairError::DuplicateObstacles);
            }
        }
    }
    for (p, _) in &candidates {
        if space.dist(p, x) <= tol || space.dist(p, y) <= tol {
            return Err(RepairError::EndpointOnObstacle);
        }
    }

    let runs: Vec<Vec<(f64, f64)>> =
        candidates.iter().map(|(p, _)| touch_runs(path, space, p, tol)).collect();

    let t_star = runs
        .iter()
        .flatten()
        .map(|r| r.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let t_star = if t_star.is_finite() { Some(t_star) } else { None };

    let hit_points: Vec<Point> = candidates
        .iter()
        .zip(&runs)
        .filter(|(_, rs)| !rs.is_empty())
        .map(|((p, _), _)| p.clone())
        .collect();

    let mut records = Vec::new();
    let mut done: HashSet<usize> = HashSet::new();
    let mut t_prev = t_x;
    loop {
        let mut best: Option<(f64, usize)> = None;
        for (i, rs) in runs.iter().enumerate() {
            if done.contains(&i) {
                continue;
            }
            let first = rs
                .iter()
                .filter(|r| r.1 >= t_prev)
                .map(|r| r.0.max(t_prev))
                .fold(f64::INFINITY, f64::min);
            if first.is_finite() && best.map_or(true, |(bf, _)| first < bf) {
                best = Some((first, i));
            }
        }
        let Some((first, i)) = best else { break };
        let last = runs[i].iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        records.push(HitRecord {
            obstacle: candidates[i].0.clone(),
            isolation: candidates[i].1,
            first,
            last: last.max(first),
        });
        done.insert(i);
        t_prev = records.last().unwrap().last;
    }

    if let (Some(rec), Some(ts)) = (records.last(), t_star) {
        assert_eq!(rec.last, ts, "the final record must end at the last touch");
    }
    for w in records.windows(2) {
        assert!(w[0].last < w[1].first, "record spans must be strictly ordered");
    }
    if let Some(rec) = records.first() {
        assert!(t_x < rec.first, "the path must not start on an obstacle");
    }
    if let Some(ts) = t_star {
        assert!(ts < t_y, "the path must not end on an obstacle");
    }

    // The open gaps between spans must be obstacle-free; spot-check them.
    let mut gap_edges = vec![t_x];
    for r in &records {
        gap_edges.push(r.first);
        gap_edges.push(r.last);
    }
    gap_edges.push(t_y);
    if cfg!(debug_assertions) {
        for pair in gap_edges.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            for i in 1..32 {
                let t = a + (b - a) * i as f64 / 32.0;
                let p = path.eval_unchecked(t);
                for (m, _) in &candidates {
                    assert!(
                        space.dist(&p, m) > 0.5 * tol,
                        "gap sample unexpectedly touches an obstacle"
                    );
                }
            }
        }
    }

    Ok(HitSchedule { records, t_star, hit_points })
}

pub(crate) fn ensure_endpoints_distinct(problem: &RepairProblem) -> Result<(), RepairError> {
    if problem.space.dist(problem.path.start(), problem.path.end()) == 0.0 {
        return Err(RepairError::DegenerateInput("path endpoints must be distinct"));
    }
    Ok(())
}

pub(crate) fn ensure_path_in_domain(problem: &RepairProblem) -> Result<(), RepairError> {
    let grid = problem.path.sample_params(512);
    for t in grid {
        let p = problem.path.eval_unchecked(t);
        if !problem.domain.contains(&p) {
            return Err(RepairError::PathOutsideDomain { t });
        }
    }
    Ok(())
}

/// One single-obstacle detour on `curve`: cut from the last sphere crossing
/// before the first touch to the first crossing after the last touch, and
/// bridge along the sphere. Returns `None` when the curve never touches the
/// obstacle.
fn detour_once(
    curve: &Curve,
    space: &Space,
    entry: &RadiusEntry,
    extent: SpliceExtent,
    tol_root: f64,
    tol_boundary: f64,
) -> Result<Option<(Curve, SpliceRecord)>, RepairError> {
    let runs = touch_runs(curve, space, &entry.obstacle, tol_boundary);
    if runs.is_empty() {
        return Ok(None);
    }
    let (t_lo, t_hi) = curve.range();
    let t_first = runs[0].0;
    let t_last = runs.last().unwrap().1;
    let delta = entry.working;
    let t_in = match extent {
        SpliceExtent::Tightest => {
            last_crossing(curve, space, &entry.obstacle, delta, (t_lo, t_first), tol_root)?
        }
        SpliceExtent::Widest => {
            first_crossing(curve, space, &entry.obstacle, delta, (t_lo, t_first), tol_root)?
        }
    };
    let t_out = match extent {
        SpliceExtent::Tightest => {
            first_crossing(curve, space, &entry.obstacle, delta, (t_last, t_hi), tol_root)?
        }
        SpliceExtent::Widest => {
            last_crossing(curve, space, &entry.obstacle, delta, (t_last, t_hi), tol_root)?
        }
    };
    if !(t_lo < t_in && t_in < t_first && t_last < t_out && t_out < t_hi) {
        return Err(RepairError::ScheduleOverlap);
    }
    let a = curve.evaluate(t_in)?;
    let b = curve.evaluate(t_out)?;
    let arc = boundary_path(space, &entry.obstacle, delta, &a, &b, tol_boundary)?;
    let out = curve.splice(&[SpliceInsert { window: (t_in, t_out), curve: arc.clone() }])?;
    let record = SpliceRecord {
        obstacle: entry.obstacle.clone(),
        radius: entry.clone(),
        hit_first: t_first,
        hit_last: t_last,
        entry_param: t_in,
        exit_param: t_out,
        entry_point: a,
        exit_point: b,
        detour: arc,
    };
    Ok(Some((out, record)))
}

/// Repair a path against a single removed point. Returns the input curve
/// unchanged when the path never touches the obstacle.
pub fn puncture_one(problem: &RepairProblem) -> Result<Curve, RepairError> {
    problem.options.validate()?;
    ensure_endpoints_distinct(problem)?;
    ensure_path_in_domain(problem)?;
    let obstacle = match &problem.obstacles {
        ObstacleSet::Finite(pts) if pts.len() == 1 => pts[0].clone(),
        _ => {
            return Err(RepairError::DegenerateInput(
                "puncture_one requires an obstacle set with exactly one point",
            ))
        }
    };
    let radii = compute_radii(problem, &[(obstacle, f64::INFINITY)])?;
    match detour_once(
        &problem.path,
        &problem.space,
        &radii.entries[0],
        problem.options.splice_extent,
        problem.options.tol_root,
        problem.options.tol_boundary,
    )? {
        Some((curve, _)) => Ok(curve),
        None => Ok(problem.path.clone()),
    }
}

/// Repair a path against the full obstacle set and validate the result.
///
/// Returns the repaired curve, one [`SpliceRecord`] per detour, and the
/// validation report of the repaired curve. A path that misses every
/// obstacle comes back unchanged with an empty record list.
pub fn puncture(
    problem: &RepairProblem,
) -> Result<(Curve, Vec<SpliceRecord>, RepairReport), RepairError> {
    problem.options.validate()?;
    ensure_endpoints_distinct(problem)?;
    ensure_path_in_domain(problem)?;
    let schedule = hit_schedule(problem)?;
    if schedule.is_empty() {
        let report = validate(&problem.path, problem, problem.options.samples);
        return Ok((problem.path.clone(), Vec::new(), report));
    }
    let active: Vec<(Point, f64)> =
        schedule.records.iter().map(|r| (r.obstacle.clone(), r.isolation)).collect();

    let (out, mut records) = match problem.options.puncture_mode {
        PunctureMode::Scheduled => scheduled_puncture(problem, &schedule, &active)?,
        PunctureMode::Iterative => iterative_puncture(problem, &schedule)?,
    };

    records.sort_by(|a, b| a.entry_param.total_cmp(&b.entry_param));
    for w in records.windows(2) {
        if w[0].exit_param >= w[1].entry_param {
            return Err(RepairError::ScheduleOverlap);
        }
    }
    let report = validate(&out, problem, problem.options.samples);
    Ok((out, records, report))
}

fn scheduled_puncture(
    problem: &RepairProblem,
    schedule: &HitSchedule,
    active: &[(Point, f64)],
) -> Result<(Curve, Vec<SpliceRecord>), RepairError> {
    let radii = compute_radii(problem, active)?;
    let space = &problem.space;
    let path = &problem.path;
    let (t_x, t_y) = path.range();
    let tol_root = problem.options.tol_root;
    let extent = problem.options.splice_extent;

    let mut records: Vec<SpliceRecord> = Vec::with_capacity(schedule.len());
    let mut prev_exit = t_x;
    for (k, rec) in schedule.records.iter().enumerate() {
        let entry = &radii.entries[k];
        let delta = entry.working;
        let next_first =
            if k + 1 < schedule.len() { schedule.records[k + 1].first } else { t_y };
        let t_in = match extent {
            SpliceExtent::Tightest => {
                last_crossing(path, space, &rec.obstacle, delta, (prev_exit, rec.first), tol_root)?
            }
            SpliceExtent::Widest => {
                first_crossing(path, space, &rec.obstacle, delta, (prev_exit, rec.first), tol_root)?
            }
        };
        let t_out = match extent {
            SpliceExtent::Tightest => {
                first_crossing(path, space, &rec.obstacle, delta, (rec.last, next_first), tol_root)?
            }
            SpliceExtent::Widest => {
                last_crossing(path, space, &rec.obstacle, delta, (rec.last, next_first), tol_root)?
            }
        };
        if !(prev_exit < t_in && t_in < rec.first && rec.last < t_out && t_out < next_first) {
            return Err(RepairError::ScheduleOverlap);
        }
        let a = path.evaluate(t_in)?;
        let b = path.evaluate(t_out)?;
        let arc =
            boundary_path(space, &rec.obstacle, delta, &a, &b, problem.options.tol_boundary)?;
        records.push(SpliceRecord {
            obstacle: rec.obstacle.clone(),
            radius: entry.clone(),
            hit_first: rec.first,
            hit_last: rec.last,
            entry_param: t_in,
            exit_param: t_out,
            entry_point: a,
            exit_point: b,
            detour: arc,
        });
        prev_exit = t_out;
    }
    let inserts: Vec<SpliceInsert> = records
        .iter()
        .map(|r| SpliceInsert { window: (r.entry_param, r.exit_param), curve: r.detour.clone() })
        .collect();
    let out = path.splice(&inserts)?;
    Ok((out, records))
}

/// The inductive mode: repair one obstacle at a time on the evolving curve.
///
/// Each pass uses the obstacle's isolation radius over the *full* obstacle
/// set in its radius bound, so no detour arc can pass through (or even reach
/// half way toward) any other obstacle; a single pass per scheduled obstacle
/// therefore suffices, and earlier repairs are never undone.
fn iterative_puncture(
    problem: &RepairProblem,
    schedule: &HitSchedule,
) -> Result<(Curve, Vec<SpliceRecord>), RepairError> {
    let mut curve = problem.path.clone();
    let mut records = Vec::new();
    for rec in &schedule.records {
        let radii = compute_radii(problem, &[(rec.obstacle.clone(), rec.isolation)])?;
        if let Some((next, record)) = detour_once(
            &curve,
            &problem.space,
            &radii.entries[0],
            problem.options.splice_extent,
            problem.options.tol_root,
            problem.options.tol_boundary,
        )? {
            curve = next;
            records.push(record);
        }
    }
    Ok((curve, records))
}

/// Bridge between two obstacles with an externally supplied sub-path,
/// trimmed back to the two working spheres.
///
/// This is the interface for the non-terminating case: when the path's touch
/// sequence never reaches a final obstacle, the constructive schedule cannot
/// run, and the caller must supply a [`DetourOracle`] producing a curve from
/// `from` to `to` inside the domain whose interior avoids the obstacle set.
/// The oracle curve is checked against that contract, then cut at its last
/// crossing of the sphere around `from` and its first subsequent crossing of
/// the sphere around `to`, yielding a connector whose endpoints lie on the
/// two working spheres and whose trace avoids both obstacles (and all
/// others) entirely.
pub fn splice_via_oracle(
    problem: &RepairProblem,
    oracle: &dyn DetourOracle,
    from: &Point,
    to: &Point,
) -> Result<Curve, RepairError> {
    problem.options.validate()?;
    let space = &problem.space;
    let tol = problem.options.tol_boundary;
    let iso_from = problem
        .obstacles
        .isolation_of(space, from, tol)
        .ok_or(RepairError::DegenerateInput("oracle endpoints must be obstacle points"))?;
    let iso_to = problem
        .obstacles
        .isolation_of(space, to, tol)
        .ok_or(RepairError::DegenerateInput("oracle endpoints must be obstacle points"))?;
    let radii = compute_radii(problem, &[(from.clone(), iso_from), (to.clone(), iso_to)])?;

    let curve = oracle.connect(from, to);
    if space.dist(curve.start(), from) > tol || space.dist(curve.end(), to) > tol {
        return Err(RepairError::OracleContractViolation(
            "returned curve does not run between the requested obstacles".into(),
        ));
    }
    let (t0, t1) = curve.range();
    for &t in curve.sample_params(problem.options.samples.min(4096)).iter() {
        if t > t0 && t < t1 && !problem.domain.contains(&curve.eval_unchecked(t)) {
            return Err(RepairError::OracleContractViolation(
                "returned curve leaves the domain".into(),
            ));
        }
    }
    // Exact touch detection per nearby obstacle; a sampling grid could step
    // straight over an isolated point.
    for (q, _) in obstacles_near_curve(problem, &curve, 1.0) {
        if space.dist(&q, from) <= 2.0 * tol || space.dist(&q, to) <= 2.0 * tol {
            continue;
        }
        if !touch_runs(&curve, space, &q, tol).is_empty() {
            return Err(RepairError::OracleContractViolation(
                "returned curve passes through another obstacle".into(),
            ));
        }
    }

    let t_a = last_crossing(
        &curve,
        space,
        from,
        radii.entries[0].working,
        (t0, t1),
        problem.options.tol_root,
    )
    .map_err(|_| {
        RepairError::OracleContractViolation("returned curve never leaves the entry sphere".into())
    })?;
    let t_b = first_crossing(
        &curve,
        space,
        to,
        radii.entries[1].working,
        (t_a, t1),
        problem.options.tol_root,
    )
    .map_err(|_| {
        RepairError::OracleContractViolation("returned curve never reaches the exit sphere".into())
    })?;
    Ok(curve.extract(t_a, t_b)?)
}

//! Metric spaces, domains, and sphere-boundary geometry.
//!
//! A [`Space`] fixes the ambient set and metric: `euclidean(n)` for R^n with
//! the L2 norm, `chebyshev` for R^2 with the max norm (whose balls are
//! squares), and `line` for R^1 with the absolute value. A [`Domain`] is the
//! ambient subset `U` paths must stay inside: everything, a metric ball, or
//! an axis-aligned box.
//!
//! The one genuinely geometric operation here is [`boundary_path`]: a curve
//! that runs *along* the boundary sphere of a ball between two points of that
//! sphere. Detours are built entirely out of such curves, so the whole repair
//! pipeline only ever works in spaces whose sphere boundaries are
//! path-connected. `line` (and `euclidean(1)`) fail that hypothesis — the
//! boundary of an interval is a two-point set — and [`boundary_path`] rejects
//! them instead of silently jumping the gap.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CircularArc, Curve, Piece};

/// Default tolerance for "this point lies on the sphere" preconditions.
pub const DEFAULT_TOL_BOUNDARY: f64 = 1e-9;

/// A point of the ambient space, stored as raw coordinates.
///
/// Equality is exact (bitwise on each coordinate); geometric "same point
/// within tolerance" questions go through [`Space::distance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    /// Convenience constructor for the planar case.
    pub fn xy(x: f64, y: f64) -> Self {
        Point { coords: vec![x, y] }
    }

    /// Convenience constructor for the 1-dimensional case.
    pub fn scalar(x: f64) -> Self {
        Point { coords: vec![x] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

/// Linear interpolation `a + s*(b - a)`, coordinate by coordinate.
pub(crate) fn lerp(a: &Point, b: &Point, s: f64) -> Point {
    Point::new(
        a.coords
            .iter()
            .zip(&b.coords)
            .map(|(ai, bi)| ai + s * (bi - ai))
            .collect(),
    )
}

pub(crate) fn sub(a: &Point, b: &Point) -> Vec<f64> {
    a.coords.iter().zip(&b.coords).map(|(ai, bi)| ai - bi).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not in the interior of the domain")]
    NotInterior,
    #[error("point is off the sphere: |d - r| = {off:e} exceeds tolerance {tol:e}")]
    OffBoundary { off: f64, tol: f64 },
    #[error(
        "sphere boundaries in this space are two-point sets, not path-connected; \
         no boundary path joins distinct points"
    )]
    HypothesisViolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Euclidean,
    Chebyshev,
    Line,
}

/// The ambient metric space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub kind: SpaceKind,
    pub dim: usize,
}

impl Space {
    /// R^dim with the L2 metric. `dim` must be at least 1.
    pub fn euclidean(dim: usize) -> Self {
        assert!(dim >= 1, "euclidean space needs dimension >= 1");
        Space { kind: SpaceKind::Euclidean, dim }
    }

    /// R^2 with the max metric; balls are axis-aligned squares.
    pub fn chebyshev() -> Self {
        Space { kind: SpaceKind::Chebyshev, dim: 2 }
    }

    /// R^1 with the absolute-value metric.
    pub fn line() -> Self {
        Space { kind: SpaceKind::Line, dim: 1 }
    }

    /// Whether sphere boundaries in this space are path-connected — the
    /// standing hypothesis of the detour construction. Holds for
    /// `euclidean(n >= 2)` and `chebyshev`; fails on the line (and for
    /// `euclidean(1)`, which is the same space under another name).
    pub fn boundary_spheres_path_connected(&self) -> bool {
        match self.kind {
            SpaceKind::Euclidean => self.dim >= 2,
            SpaceKind::Chebyshev => true,
            SpaceKind::Line => false,
        }
    }

    /// The metric. Errors when either point has the wrong number of
    /// coordinates.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64, SpaceError> {
        self.check_dim(p)?;
        self.check_dim(q)?;
        Ok(self.dist(p, q))
    }

    pub(crate) fn check_dim(&self, p: &Point) -> Result<(), SpaceError> {
        if p.dim() != self.dim {
            return Err(SpaceError::DimensionMismatch { expected: self.dim, got: p.dim() });
        }
        Ok(())
    }

    /// Unchecked metric for internal hot paths; dimensions must already agree.
    pub(crate) fn dist(&self, p: &Point, q: &Point) -> f64 {
        debug_assert_eq!(p.dim(), self.dim);
        debug_assert_eq!(q.dim(), self.dim);
        match self.kind {
            SpaceKind::Euclidean => {
                let mut acc = 0.0;
                for (a, b) in p.coords.iter().zip(&q.coords) {
                    let d = a - b;
                    acc += d * d;
                }
                acc.sqrt()
            }
            SpaceKind::Chebyshev => p
                .coords
                .iter()
                .zip(&q.coords)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
            SpaceKind::Line => (p.coords[0] - q.coords[0]).abs(),
        }
    }
}

/// The shape of the ambient subset `U`.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainShape {
    /// The whole space. Interior radii are `+infinity`, which every
    /// `min{...}` radius formula simply absorbs.
    All,
    /// A metric ball (in the owning space's metric), closed by default.
    Ball { center: Point, radius: f64, open: bool },
    /// A closed axis-aligned box `[min, max]`.
    Box { min: Point, max: Point },
}

/// The ambient subset `U` together with the space whose metric measures it.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub space: Space,
    pub shape: DomainShape,
}

impl Domain {
    pub fn all(space: Space) -> Self {
        Domain { space, shape: DomainShape::All }
    }

    /// Closed metric ball.
    pub fn ball(space: Space, center: Point, radius: f64) -> Self {
        assert!(radius > 0.0, "domain ball radius must be positive");
        Domain { space, shape: DomainShape::Ball { center, radius, open: false } }
    }

    /// Open metric ball.
    pub fn open_ball(space: Space, center: Point, radius: f64) -> Self {
        assert!(radius > 0.0, "domain ball radius must be positive");
        Domain { space, shape: DomainShape::Ball { center, radius, open: true } }
    }

    /// Closed axis-aligned box.
    pub fn bbox(space: Space, min: Point, max: Point) -> Self {
        Domain { space, shape: DomainShape::Box { min, max } }
    }

    /// Membership test. Points of the wrong dimension are simply not members.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.space.dim {
            return false;
        }
        match &self.shape {
            DomainShape::All => true,
            DomainShape::Ball { center, radius, open } => {
                let d = self.space.dist(center, p);
                if *open {
                    d < *radius
                } else {
                    d <= *radius
                }
            }
            DomainShape::Box { min, max } => p
                .coords
                .iter()
                .zip(min.coords.iter().zip(&max.coords))
                .all(|(c, (lo, hi))| *lo <= *c && *c <= *hi),
        }
    }

    /// The distance from `p` to the complement of the domain: the largest `r`
    /// with `B(p, r)` inside `U`. Returns `+infinity` for [`DomainShape::All`]
    /// and an error when `p` is not an interior point.
    ///
    /// For balls this is `radius - d(center, p)`; for boxes it is the smallest
    /// coordinate slack, which is the exact complement distance under all
    /// three metrics (the nearest outside point differs in one coordinate).
    pub fn interior_radius(&self, p: &Point) -> Result<f64, SpaceError> {
        self.space.check_dim(p)?;
        match &self.shape {
            DomainShape::All => Ok(f64::INFINITY),
            DomainShape::Ball { center, radius, .. } => {
                let slack = radius - self.space.dist(center, p);
                if slack > 0.0 {
                    Ok(slack)
                } else {
                    Err(SpaceError::NotInterior)
                }
            }
            DomainShape::Box { min, max } => {
                let mut slack = f64::INFINITY;
                for (c, (lo, hi)) in p.coords.iter().zip(min.coords.iter().zip(&max.coords)) {
                    slack = slack.min(c - lo).min(hi - c);
                }
                if slack > 0.0 {
                    Ok(slack)
                } else {
                    Err(SpaceError::NotInterior)
                }
            }
        }
    }
}

/// A curve along the sphere `{q : d(center, q) = radius}` from `a` to `b`.
///
/// Both endpoints must already lie on the sphere (within `tol`); they are
/// copied bit-for-bit into the result, so splicing against values obtained
/// from [`crate::curve::Curve::evaluate`] is exact. `a == b` yields a
/// constant single-point curve in any space.
///
/// Orientation is pinned so identical inputs always yield identical curves:
///
/// * `euclidean(2)`: counterclockwise from `a` to `b`; for antipodal points
///   the plane tie-break below applies and selects the half going through
///   the positive side of the lowest-index usable axis — e.g. from `(-r, 0)`
///   to `(r, 0)` around the origin the *upper* semicircle.
/// * `euclidean(n >= 3)`: the geodesic (minor) arc in the plane spanned by
///   `a - center` and `b - center`; when those are antipodal the plane is
///   completed with the lowest-index standard basis vector not parallel to
///   `a - center`.
/// * `chebyshev`: walk the square's perimeter from `a` to `b` in the shorter
///   direction, counterclockwise on ties.
pub fn boundary_path(
    space: &Space,
    center: &Point,
    radius: f64,
    a: &Point,
    b: &Point,
    tol: f64,
) -> Result<Curve, SpaceError> {
    assert!(radius > 0.0, "sphere radius must be positive");
    space.check_dim(center)?;
    for p in [a, b] {
        space.check_dim(p)?;
        let off = (space.dist(center, p) - radius).abs();
        if off > tol {
            return Err(SpaceError::OffBoundary { off, tol });
        }
    }
    if a == b {
        return Ok(Curve::single(Piece::Constant { at: a.clone() }, 0.0, 1.0));
    }
    match space.kind {
        SpaceKind::Line => Err(SpaceError::HypothesisViolated),
        SpaceKind::Euclidean if space.dim == 1 => Err(SpaceError::HypothesisViolated),
        SpaceKind::Euclidean => euclidean_arc(center, radius, a, b, space.dim == 2),
        SpaceKind::Chebyshev => chebyshev_perimeter(center, radius, a, b),
    }
}

/// Relative threshold under which `b - center` counts as exactly opposite
/// `a - center`, triggering the antipodal plane completion.
const ANTIPODAL_EPS: f64 = 1e-12;

fn euclidean_arc(
    center: &Point,
    radius: f64,
    a: &Point,
    b: &Point,
    planar: bool,
) -> Result<Curve, SpaceError> {
    let ua = sub(a, center);
    let ub = sub(b, center);
    let na = norm(&ua);
    let nb = norm(&ub);
    let u: Vec<f64> = ua.iter().map(|c| c / na).collect();
    let v: Vec<f64> = ub.iter().map(|c| c / nb).collect();
    let duv = dot(&u, &v).clamp(-1.0, 1.0);
    // Perpendicular component of v against u; vanishing means colinear.
    let perp: Vec<f64> = v.iter().zip(&u).map(|(vi, ui)| vi - duv * ui).collect();
    let nperp = norm(&perp);

    let (w, angle) = if nperp <= ANTIPODAL_EPS && duv < 0.0 {
        // Antipodal: complete the plane with the lowest-index axis that has
        // a component orthogonal to u, and sweep a half turn toward it.
        let i = (0..u.len())
            .find(|&i| u[i].abs() < 1.0 - 1e-9)
            .expect("unit vector cannot be parallel to every axis");
        let mut e: Vec<f64> = u.iter().map(|ui| -u[i] * ui).collect();
        e[i] += 1.0;
        let ne = norm(&e);
        (e.into_iter().map(|c| c / ne).collect::<Vec<f64>>(), std::f64::consts::PI)
    } else if planar {
        // Counterclockwise: sweep direction is u rotated +90 degrees, and the
        // angle is the counterclockwise angle from a to b in (0, 2*pi).
        let w = vec![-u[1], u[0]];
        let cross = u[0] * v[1] - u[1] * v[0];
        let mut theta = cross.atan2(duv);
        if theta <= 0.0 {
            theta += 2.0 * std::f64::consts::PI;
        }
        (w, theta)
    } else {
        // Geodesic: stay in span(u, v), sweep the minor arc toward b.
        let w: Vec<f64> = perp.iter().map(|c| c / nperp).collect();
        (w, duv.acos())
    };

    let arc = CircularArc {
        center: center.clone(),
        radius,
        start_dir: u,
        sweep_dir: w,
        angle,
        from: a.clone(),
        to: b.clone(),
    };
    Ok(Curve::single(Piece::Arc(arc), 0.0, 1.0))
}

/// Perimeter parameter of a point on (or near) the square
/// `{q : max|q - center| = radius}`, measured counterclockwise from the
/// bottom-right corner: right side first, then top, left, bottom.
fn perimeter_param(center: &Point, radius: f64, p: &Point) -> f64 {
    let dx = p.coords[0] - center.coords[0];
    let dy = p.coords[1] - center.coords[1];
    let r = radius;
    if dx.abs() >= dy.abs() {
        if dx >= 0.0 {
            // right side, bottom to top
            dy.clamp(-r, r) + r
        } else {
            // left side, top to bottom
            4.0 * r + (r - dy.clamp(-r, r))
        }
    } else if dy >= 0.0 {
        // top side, right to left
        2.0 * r + (r - dx.clamp(-r, r))
    } else {
        // bottom side, left to right
        6.0 * r + (dx.clamp(-r, r) + r)
    }
}

/// Corner at perimeter parameter `2*r*k` (k = 0..3), counterclockwise from
/// bottom-right.
fn corner(center: &Point, radius: f64, k: usize) -> Point {
    let (cx, cy) = (center.coords[0], center.coords[1]);
    let r = radius;
    match k % 4 {
        0 => Point::xy(cx + r, cy - r),
        1 => Point::xy(cx + r, cy + r),
        2 => Point::xy(cx - r, cy + r),
        _ => Point::xy(cx - r, cy - r),
    }
}

fn chebyshev_perimeter(
    center: &Point,
    radius: f64,
    a: &Point,
    b: &Point,
) -> Result<Curve, SpaceError> {
    let r = radius;
    let total = 8.0 * r;
    let sa = perimeter_param(center, r, a);
    let sb = perimeter_param(center, r, b);
    let ccw_len = (sb - sa).rem_euclid(total);
    let cw_len = total - ccw_len;
    // Shorter way around; counterclockwise wins ties.
    let ccw = ccw_len <= cw_len;
    let walk_len = if ccw { ccw_len } else { cw_len };

    let mut waypoints: Vec<Point> = vec![a.clone()];
    if ccw {
        // First corner parameter strictly after sa.
        let mut k = (sa / (2.0 * r)).floor() as i64 + 1;
        loop {
            let sc = ((k as f64) * 2.0 * r).rem_euclid(total);
            let off = (sc - sa).rem_euclid(total);
            if off <= 0.0 || off >= walk_len {
                break;
            }
            waypoints.push(corner(center, r, k.rem_euclid(4) as usize));
            k += 1;
        }
    } else {
        let mut k = (sa / (2.0 * r)).ceil() as i64 - 1;
        loop {
            let sc = ((k as f64) * 2.0 * r).rem_euclid(total);
            let off = (sa - sc).rem_euclid(total);
            if off <= 0.0 || off >= walk_len {
                break;
            }
            waypoints.push(corner(center, r, k.rem_euclid(4) as usize));
            k -= 1;
        }
    }
    waypoints.push(b.clone());

    // Collapse near-duplicate consecutive waypoints (a or b sitting on a
    // corner) before building the polyline.
    let eps = 1e-12 * r.max(1.0);
    let mut pts: Vec<Point> = Vec::with_capacity(waypoints.len());
    for p in waypoints {
        if let Some(last) = pts.last() {
            let gap = last
                .coords
                .iter()
                .zip(&p.coords)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            if gap <= eps {
                continue;
            }
        }
        pts.push(p);
    }
    if pts.len() < 2 {
        // a and b collapsed onto the same perimeter location.
        return Ok(Curve::single(Piece::Constant { at: a.clone() }, 0.0, 1.0));
    }
    // Endpoints must remain bit-exact copies of the inputs.
    *pts.last_mut().unwrap() = b.clone();
    pts[0] = a.clone();
    Ok(Curve::polyline(&pts))
}

//! Piecewise curves: evaluation, sphere crossings, and splicing.
//!
//! A [`Curve`] is a list of [`PlacedPiece`]s — linear segments, circular
//! arcs, or constant points — covering contiguous parameter subintervals.
//! Adjacent pieces share their joint value *exactly* (the stored end point of
//! one piece is a bit-for-bit copy of the next piece's start point), and
//! evaluation at a declared endpoint returns the stored point rather than
//! re-deriving it, so downstream exact-equality checks are meaningful.
//!
//! [`sphere_crossings`] finds the parameters where a curve meets a sphere
//! `{q : d(center, q) = radius}`. Linear pieces under the euclidean metric
//! are solved in closed form (stable quadratic); linear pieces under the max
//! or line metric reduce to a piecewise-linear sign scan over the active
//! faces; everything else falls back to sign-change bracketing plus
//! bisection. Every reported crossing is verified against a residual
//! tolerance before it is returned.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{dot, lerp, sub, Point, Space, SpaceKind};

/// Default residual tolerance for root acceptance: a crossing parameter `t`
/// must satisfy `|d(curve(t), center) - radius| <= tol`.
pub const DEFAULT_TOL_ROOT: f64 = 1e-10;

/// Hard iteration cap for bisection refinement.
pub const BISECT_MAX_ITER: usize = 200;

/// Brackets per piece for the generic sign-change scan.
const BRACKET_STEPS: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("parameter {t} outside the curve range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("no crossing of the sphere inside the window")]
    NoCrossing,
    #[error("splice windows must be non-degenerate, sorted, pairwise disjoint, and strictly inside the curve range")]
    OverlappingWindows,
    #[error("splice insert endpoints must equal the curve's values at the window edges exactly")]
    EndpointMismatch,
    #[error("a curve needs at least one piece")]
    Empty,
}

/// A circular arc lying on the sphere `{q : |q - center| = radius}` of a
/// euclidean space.
///
/// Parameterized as `center + radius*(cos(angle*s)*start_dir +
/// sin(angle*s)*sweep_dir)` for `s` in `[0, 1]`, with the declared `from`
/// and `to` returned verbatim at the ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularArc {
    pub center: Point,
    pub radius: f64,
    /// Unit vector from `center` toward `from`.
    pub start_dir: Vec<f64>,
    /// Unit vector orthogonal to `start_dir` in the arc's plane; the sweep
    /// bends toward it.
    pub sweep_dir: Vec<f64>,
    /// Total sweep in radians, in `(0, 2*pi]`.
    pub angle: f64,
    pub from: Point,
    pub to: Point,
}

impl CircularArc {
    fn eval(&self, s: f64) -> Point {
        if s == 0.0 {
            return self.from.clone();
        }
        if s == 1.0 {
            return self.to.clone();
        }
        let alpha = self.angle * s;
        let (sin, cos) = alpha.sin_cos();
        Point::new(
            self.center
                .coords
                .iter()
                .zip(self.start_dir.iter().zip(&self.sweep_dir))
                .map(|(c, (u, w))| c + self.radius * (cos * u + sin * w))
                .collect(),
        )
    }

    pub fn arc_length(&self) -> f64 {
        self.radius * self.angle
    }

    /// The sub-arc between local parameters `s0 < s1`, with freshly rotated
    /// frame vectors; endpooints are evaluated once and stored.
    fn slice(&self, s0: f64, s1: f64) -> CircularArc {
        let rotate = |s: f64| -> (Vec<f64>, Vec<f64>) {
            let (sin, cos) = (self.angle * s).sin_cos();
            let u: Vec<f64> =
                self.start_dir.iter().zip(&self.sweep_dir).map(|(u, w)| cos * u + sin * w).collect();
            let w: Vec<f64> = self
                .start_dir
                .iter()
                .zip(&self.sweep_dir)
                .map(|(u, w)| -sin * u + cos * w)
                .collect();
            (u, w)
        };
        let from = self.eval(s0);
        let to = self.eval(s1);
        let (u, w) = if s0 == 0.0 {
            (self.start_dir.clone(), self.sweep_dir.clone())
        } else {
            rotate(s0)
        };
        CircularArc {
            center: self.center.clone(),
            radius: self.radius,
            start_dir: u,
            sweep_dir: w,
            angle: self.angle * (s1 - s0),
            from,
            to,
        }
    }
}

/// One geometric piece of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Piece {
    Linear { from: Point, to: Point },
    Arc(CircularArc),
    Constant { at: Point },
}

impl Piece {
    pub fn start(&self) -> &Point {
        match self {
            Piece::Linear { from, .. } => from,
            Piece::Arc(a) => &a.from,
            Piece::Constant { at } => at,
        }
    }

    pub fn end(&self) -> &Point {
        match self {
            Piece::Linear { to, .. } => to,
            Piece::Arc(a) => &a.to,
            Piece::Constant { at } => at,
        }
    }

    /// Evaluate at local parameter `s` in `[0, 1]`; the declared endpoints
    /// are returned verbatim at `s = 0` and `s = 1`.
    pub fn eval(&self, s: f64) -> Point {
        match self {
            Piece::Linear { from, to } => {
                if s == 0.0 {
                    from.clone()
                } else if s == 1.0 {
                    to.clone()
                } else {
                    lerp(from, to, s)
                }
            }
            Piece::Arc(a) => a.eval(s),
            Piece::Constant { at } => at.clone(),
        }
    }

    /// Geometric length used for parameter budgeting when an insert is laid
    /// into a splice window (euclidean length; exact for arcs and segments).
    pub fn geom_length(&self) -> f64 {
        match self {
            Piece::Linear { from, to } => {
                from.coords.iter().zip(&to.coords).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
            }
            Piece::Arc(a) => a.arc_length(),
            Piece::Constant { .. } => 0.0,
        }
    }

    /// The sub-piece between local parameters `s0 <= s1`.
    fn slice(&self, s0: f64, s1: f64) -> Piece {
        match self {
            Piece::Linear { .. } => {
                Piece::Linear { from: self.eval(s0), to: self.eval(s1) }
            }
            Piece::Arc(a) => Piece::Arc(a.slice(s0, s1)),
            Piece::Constant { at } => Piece::Constant { at: at.clone() },
        }
    }
}

/// A piece together with its global parameter subinterval `[t0, t1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedPiece {
    #[serde(flatten)]
    pub piece: Piece,
    pub t0: f64,
    pub t1: f64,
}

impl PlacedPiece {
    fn local(&self, t: f64) -> f64 {
        if self.t1 > self.t0 {
            (t - self.t0) / (self.t1 - self.t0)
        } else {
            0.0
        }
    }
}

/// A continuous piecewise curve over a closed parameter interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Curve {
    pieces: Vec<PlacedPiece>,
}

impl Curve {
    /// A single-piece curve on `[t0, t1]`.
    pub fn single(piece: Piece, t0: f64, t1: f64) -> Curve {
        assert!(t0 <= t1);
        Curve { pieces: vec![PlacedPiece { piece, t0, t1 }] }
    }

    /// A polyline through `pts` over `[0, 1]`, parameter shares proportional
    /// to segment length. Consecutive duplicate points are collapsed; a
    /// single (surviving) point yields a constant curve.
    pub fn polyline(pts: &[Point]) -> Curve {
        Self::try_polyline(pts).expect("polyline needs at least one point")
    }

    /// Fallible form of [`Curve::polyline`].
    pub fn try_polyline(pts: &[Point]) -> Result<Curve, CurveError> {
        if pts.is_empty() {
            return Err(CurveError::Empty);
        }
        let mut kept: Vec<&Point> = vec![&pts[0]];
        for p in &pts[1..] {
            if p != *kept.last().unwrap() {
                kept.push(p);
            }
        }
        if kept.len() == 1 {
            return Ok(Curve::single(Piece::Constant { at: kept[0].clone() }, 0.0, 1.0));
        }
        let lengths: Vec<f64> = kept
            .windows(2)
            .map(|w| {
                w[0].coords
                    .iter()
                    .zip(&w[1].coords)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        let total: f64 = lengths.iter().sum();
        let mut pieces = Vec::with_capacity(kept.len() - 1);
        let mut t = 0.0;
        let mut acc = 0.0;
        for (i, len) in lengths.iter().enumerate() {
            acc += len;
            let t_next = if i + 1 == lengths.len() { 1.0 } else { acc / total };
            pieces.push(PlacedPiece {
                piece: Piece::Linear { from: kept[i].clone(), to: kept[i + 1].clone() },
                t0: t,
                t1: t_next,
            });
            t = t_next;
        }
        Ok(Curve { pieces })
    }

    /// Build from pre-placed pieces. Pieces must be contiguous in parameter
    /// and continuous at joints (checked).
    pub fn from_placed(pieces: Vec<PlacedPiece>) -> Result<Curve, CurveError> {
        if pieces.is_empty() {
            return Err(CurveError::Empty);
        }
        for w in pieces.windows(2) {
            if w[0].t1 != w[1].t0 || w[0].piece.end() != w[1].piece.start() {
                return Err(CurveError::EndpointMismatch);
            }
        }
        for p in &pieces {
            if p.t0 > p.t1 || (p.t0 == p.t1 && !matches!(p.piece, Piece::Constant { .. })) {
                return Err(CurveError::OverlappingWindows);
            }
        }
        Ok(Curve { pieces })
    }

    pub fn pieces(&self) -> &[PlacedPiece] {
        &self.pieces
    }

    /// The closed parameter interval the curve is defined on.
    pub fn range(&self) -> (f64, f64) {
        (self.pieces[0].t0, self.pieces.last().unwrap().t1)
    }

    pub fn start(&self) -> &Point {
        self.pieces[0].piece.start()
    }

    pub fn end(&self) -> &Point {
        self.pieces.last().unwrap().piece.end()
    }

    fn piece_index(&self, t: f64) -> usize {
        // Last piece whose subinterval starts at or before t; joints resolve
        // to the later piece, whose stored start point equals the earlier
        // piece's stored end point.
        let idx = self.pieces.partition_point(|p| p.t0 <= t);
        idx.saturating_sub(1).min(self.pieces.len() - 1)
    }

    /// Evaluate at a global parameter. Deterministic: identical `t` always
    /// yields identical bits.
    pub fn evaluate(&self, t: f64) -> Result<Point, CurveError> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(CurveError::OutOfRange { t, lo, hi });
        }
        Ok(self.eval_unchecked(t))
    }

    /// Evaluate at a global parameter, clamping to the nearest end of the
    /// range instead of erroring. Handy for sampling loops.
    pub fn eval_unchecked(&self, t: f64) -> Point {
        let pp = &self.pieces[self.piece_index(t)];
        pp.piece.eval(pp.local(t).clamp(0.0, 1.0))
    }

    /// Uniform parameter grid of `n` points plus every piece joint, sorted
    /// and deduplicated. Used by the validation oracles.
    pub fn sample_params(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.range();
        let n = n.max(2);
        let mut ts: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        for p in &self.pieces {
            ts.push(p.t0);
            ts.push(p.t1);
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }

    /// The sub-curve on `[a, b]`, keeping the original parameterization.
    pub fn extract(&self, a: f64, b: f64) -> Result<Curve, CurveError> {
        let (lo, hi) = self.range();
        if !(a >= lo && b <= hi && a < b) {
            return Err(CurveError::OutOfRange { t: a, lo, hi });
        }
        let mut out = Vec::new();
        self.append_extract(&mut out, a, b);
        Curve::from_placed(out)
    }

    fn append_extract(&self, out: &mut Vec<PlacedPiece>, a: f64, b: f64) {
        if a >= b {
            return;
        }
        for pp in &self.pieces {
            if pp.t1 <= a || pp.t0 >= b {
                continue;
            }
            let left = pp.t0.max(a);
            let right = pp.t1.min(b);
            if left == pp.t0 && right == pp.t1 {
                out.push(pp.clone());
            } else {
                let s0 = pp.local(left).clamp(0.0, 1.0);
                let s1 = pp.local(right).clamp(0.0, 1.0);
                out.push(PlacedPiece { piece: pp.piece.slice(s0, s1), t0: left, t1: right });
            }
        }
    }

    /// Replace the windows with the given insert curves.
    ///
    /// Windows must be non-degenerate, sorted, pairwise disjoint, and
    /// strictly inside the curve's range, and each insert's endpoints must
    /// equal `evaluate(window.0)` / `evaluate(window.1)` *exactly* — callers
    /// obtain them from `evaluate`, so this is a bit-equality check, and it
    /// is what makes the result exactly continuous at the seams.
    ///
    /// The result keeps the original parameter interval: untouched portions
    /// keep their original parameterization, and each insert is laid into its
    /// window with per-piece parameter shares proportional to geometric
    /// length.
    pub fn splice(&self, inserts: &[SpliceInsert]) -> Result<Curve, CurveError> {
        let (lo, hi) = self.range();
        let mut prev = lo;
        for (i, ins) in inserts.iter().enumerate() {
            let (u, v) = ins.window;
            let inside = u < v && u > lo && v < hi && (i == 0 || u > prev);
            if !inside {
                return Err(CurveError::OverlappingWindows);
            }
            prev = v;
            if *ins.curve.start() != self.eval_unchecked(u)
                || *ins.curve.end() != self.eval_unchecked(v)
            {
                return Err(CurveError::EndpointMismatch);
            }
        }
        let mut out = Vec::new();
        let mut cursor = lo;
        for ins in inserts {
            let (u, v) = ins.window;
            self.append_extract(&mut out, cursor, u);
            append_reparam(&mut out, &ins.curve, u, v);
            cursor = v;
        }
        self.append_extract(&mut out, cursor, hi);
        Curve::from_placed(out)
    }
}

/// A replacement window plus the curve to lay into it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpliceInsert {
    pub window: (f64, f64),
    pub curve: Curve,
}

/// Lay `ins`'s pieces into `[u, v]` with parameter shares proportional to
/// geometric length (equal shares if the insert is all constants).
fn append_reparam(out: &mut Vec<PlacedPiece>, ins: &Curve, u: f64, v: f64) {
    let pieces = ins.pieces();
    let weights: Vec<f64> = pieces.iter().map(|p| p.piece.geom_length()).collect();
    let total: f64 = weights.iter().sum();
    let n = pieces.len();
    let mut t = u;
    let mut acc = 0.0;
    for (i, pp) in pieces.iter().enumerate() {
        let t_next = if i + 1 == n {
            v
        } else {
            acc += if total > 0.0 { weights[i] / total } else { 1.0 / n as f64 };
            u + (v - u) * acc
        };
        out.push(PlacedPiece { piece: pp.piece.clone(), t0: t, t1: t_next });
        t = t_next;
    }
}

/// Which solver produced a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingSolver {
    /// Closed-form quadratic (euclidean metric, linear piece).
    Quadratic,
    /// Piecewise-linear face scan (max/line metric, linear piece).
    Faces,
    /// Sign-change bracketing plus bisection.
    Bisection,
    /// Accepted directly because the residual already vanished (constant
    /// pieces on the sphere, grid nodes on the sphere, plateau edges).
    Residual,
}

/// One verified crossing parameter with bracketing metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub t: f64,
    /// Index of the piece the crossing lies on.
    pub piece: usize,
    pub solver: CrossingSolver,
}

/// Sorted, deduplicated crossings of one sphere inside one window.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossingSet {
    pub crossings: Vec<Crossing>,
}

impl CrossingSet {
    pub fn params(&self) -> Vec<f64> {
        self.crossings.iter().map(|c| c.t).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn first(&self) -> Option<f64> {
        self.crossings.first().map(|c| c.t)
    }

    pub fn last(&self) -> Option<f64> {
        self.crossings.last().map(|c| c.t)
    }
}

/// All parameters in `window` where the curve meets the sphere
/// `{q : d(center, q) = radius}`, each verified to satisfy
/// `|d(curve(t), center) - radius| <= tol_root`.
///
/// The window is closed and must lie inside the curve's range. Where a whole
/// subinterval lies on the sphere (possible for constant pieces, and for
/// linear pieces running along a face of a max-metric sphere), the
/// subinterval's two edges are reported.
pub fn sphere_crossings(
    curve: &Curve,
    space: &Space,
    center: &Point,
    radius: f64,
    window: (f64, f64),
    tol_root: f64,
) -> Result<CrossingSet, CurveError> {
    let (lo, hi) = curve.range();
    let (w0, w1) = window;
    if !(w0 >= lo && w1 <= hi && w0 <= w1) {
        return Err(CurveError::OutOfRange { t: w0, lo, hi });
    }
    let mut found: Vec<Crossing> = Vec::new();
    for (idx, pp) in curve.pieces().iter().enumerate() {
        if pp.t1 < w0 || pp.t0 > w1 {
            continue;
        }
        let s_lo = pp.local(pp.t0.max(w0)).clamp(0.0, 1.0);
        let s_hi = pp.local(pp.t1.min(w1)).clamp(0.0, 1.0);
        if s_lo > s_hi {
            continue;
        }
        let locals: Vec<(f64, CrossingSolver)> = match (&pp.piece, space.kind) {
            (Piece::Constant { at }, _) => {
                if (space.dist(at, center) - radius).abs() <= tol_root {
                    vec![(s_lo, CrossingSolver::Residual), (s_hi, CrossingSolver::Residual)]
                } else {
                    vec![]
                }
            }
            (Piece::Linear { from, to }, SpaceKind::Euclidean) => {
                quadratic_crossings(from, to, center, radius, s_lo, s_hi)
            }
            (Piece::Linear { from, to }, SpaceKind::Chebyshev)
            | (Piece::Linear { from, to }, SpaceKind::Line) => {
                face_crossings(from, to, center, radius, s_lo, s_hi, tol_root)
            }
            (piece, _) => bracketed_crossings(piece, space, center, radius, s_lo, s_hi, tol_root),
        };
        for (s, solver) in locals {
            let t = if s <= 0.0 {
                pp.t0.max(w0)
            } else if s >= 1.0 {
                pp.t1.min(w1)
            } else {
                pp.t0 + s * (pp.t1 - pp.t0)
            };
            let t = t.clamp(w0, w1);
            found.push(Crossing { t, piece: idx, solver });
        }
    }
    found.sort_by(|a, b| a.t.total_cmp(&b.t));
    // Residual gate plus deduplication of joint/plateau repeats.
    let span = (hi - lo).max(1.0);
    let mut set = CrossingSet::default();
    for c in found {
        let p = curve.eval_unchecked(c.t);
        if (space.dist(&p, center) - radius).abs() > tol_root {
            continue;
        }
        if let Some(last) = set.crossings.last() {
            if (c.t - last.t).abs() <= 1e-13 * span {
                continue;
            }
        }
        set.crossings.push(c);
    }
    Ok(set)
}

/// Smallest crossing parameter in the window.
pub fn first_crossing(
    curve: &Curve,
    space: &Space,
    center: &Point,
    radius: f64,
    window: (f64, f64),
    tol_root: f64,
) -> Result<f64, CurveError> {
    sphere_crossings(curve, space, center, radius, window, tol_root)?
        .first()
        .ok_or(CurveError::NoCrossing)
}

/// Largest crossing parameter in the window.
pub fn last_crossing(
    curve: &Curve,
    space: &Space,
    center: &Point,
    radius: f64,
    window: (f64, f64),
    tol_root: f64,
) -> Result<f64, CurveError> {
    sphere_crossings(curve, space, center, radius, window, tol_root)?
        .last()
        .ok_or(CurveError::NoCrossing)
}

/// Closed-form roots of `|A + s*(B - A) - center|^2 = radius^2` within
/// `[s_lo, s_hi]`, via the cancellation-stable quadratic formula. A
/// discriminant within rounding of zero is snapped to a tangency (one root).
fn quadratic_crossings(
    a: &Point,
    b: &Point,
    center: &Point,
    radius: f64,
    s_lo: f64,
    s_hi: f64,
) -> Vec<(f64, CrossingSolver)> {
    let u = sub(b, a);
    let w0 = sub(a, center);
    let qa = dot(&u, &u);
    if qa == 0.0 {
        return vec![];
    }
    let qb = 2.0 * dot(&w0, &u);
    let qc = dot(&w0, &w0) - radius * radius;
    let mut disc = qb * qb - 4.0 * qa * qc;
    let scale = qb * qb + (4.0 * qa * qc).abs();
    if disc < 0.0 && disc >= -1e-12 * scale {
        disc = 0.0;
    }
    if disc < 0.0 {
        return vec![];
    }
    let roots: Vec<f64> = if disc == 0.0 {
        vec![-qb / (2.0 * qa)]
    } else {
        let sq = disc.sqrt();
        let q = if qb >= 0.0 { -0.5 * (qb + sq) } else { -0.5 * (qb - sq) };
        let mut r = vec![q / qa, qc / q];
        r.sort_by(f64::total_cmp);
        r
    };
    let eps = 1e-12;
    roots
        .into_iter()
        .filter(|s| *s >= s_lo - eps && *s <= s_hi + eps)
        .map(|s| (s.clamp(s_lo, s_hi), CrossingSolver::Quadratic))
        .collect()
}

/// Roots of `max_i |A_i + s*u_i - c_i| = radius` on `[s_lo, s_hi]`.
///
/// The left side is a piecewise-linear function of `s`; its breakpoints are
/// where a single face's offset vanishes or where two faces exchange the
/// maximum. Between consecutive breakpoints the function is affine, so each
/// root is a single linear solve. Subintervals lying entirely on the sphere
/// (a segment running along a face) contribute their two edges.
fn face_crossings(
    a: &Point,
    b: &Point,
    center: &Point,
    radius: f64,
    s_lo: f64,
    s_hi: f64,
    tol_root: f64,
) -> Vec<(f64, CrossingSolver)> {
    let dim = a.dim();
    let off: Vec<f64> = (0..dim).map(|i| a.coords[i] - center.coords[i]).collect();
    let slope: Vec<f64> = (0..dim).map(|i| b.coords[i] - a.coords[i]).collect();
    let f = |s: f64| -> f64 {
        (0..dim).map(|i| (off[i] + s * slope[i]).abs()).fold(0.0, f64::max) - radius
    };

    let mut nodes = vec![s_lo, s_hi];
    let push = |nodes: &mut Vec<f64>, s: f64| {
        if s > s_lo && s < s_hi {
            nodes.push(s);
        }
    };
    for i in 0..dim {
        if slope[i] != 0.0 {
            push(&mut nodes, -off[i] / slope[i]);
        }
        for j in (i + 1)..dim {
            for sig in [1.0, -1.0] {
                let den = slope[i] - sig * slope[j];
                if den != 0.0 {
                    push(&mut nodes, (sig * off[j] - off[i]) / den);
                }
            }
        }
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();

    let vals: Vec<f64> = nodes.iter().map(|&s| f(s)).collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < nodes.len() {
        if vals[k].abs() <= tol_root {
            // A maximal stretch of on-sphere nodes is one interval riding
            // the sphere (the function is affine between nodes): report its
            // two edges, or the single node of an isolated tangency.
            let mut j = k;
            while j + 1 < nodes.len() && vals[j + 1].abs() <= tol_root {
                j += 1;
            }
            out.push((nodes[k], CrossingSolver::Residual));
            if j > k {
                out.push((nodes[j], CrossingSolver::Residual));
            }
            k = j + 1;
        } else {
            if k + 1 < nodes.len() && vals[k + 1].abs() > tol_root {
                let (f0, f1) = (vals[k], vals[k + 1]);
                if f0 * f1 < 0.0 {
                    let s = nodes[k] + (nodes[k + 1] - nodes[k]) * f0 / (f0 - f1);
                    out.push((s, CrossingSolver::Faces));
                }
            }
            k += 1;
        }
    }
    out
}

/// Generic fallback: scan for sign changes on a fixed bracket grid, refine
/// each by bisection; grid nodes already on the sphere are taken verbatim.
fn bracketed_crossings(
    piece: &Piece,
    space: &Space,
    center: &Point,
    radius: f64,
    s_lo: f64,
    s_hi: f64,
    tol_root: f64,
) -> Vec<(f64, CrossingSolver)> {
    let f = |s: f64| -> f64 { space.dist(&piece.eval(s), center) - radius };
    let n = BRACKET_STEPS;
    let xs: Vec<f64> = (0..=n).map(|i| s_lo + (s_hi - s_lo) * i as f64 / n as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&s| f(s)).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i <= n {
        if fs[i].abs() <= tol_root {
            // Collapse a stretch of on-sphere grid nodes to its edges.
            let mut j = i;
            while j < n && fs[j + 1].abs() <= tol_root {
                j += 1;
            }
            out.push((xs[i], CrossingSolver::Residual));
            if j > i {
                out.push((xs[j], CrossingSolver::Residual));
            }
            i = j + 1;
        } else {
            if i < n && fs[i + 1].abs() > tol_root && fs[i] * fs[i + 1] < 0.0 {
                out.push((bisect(xs[i], xs[i + 1], fs[i] > 0.0, &f), CrossingSolver::Bisection));
            }
            i += 1;
        }
    }
    out
}

/// Plain bisection on a bracketing interval; `lo_positive` is the sign of
/// `f(lo)`. Runs to floating-point exhaustion or the iteration cap.
fn bisect(mut lo: f64, mut hi: f64, lo_positive: bool, f: &dyn Fn(f64) -> f64) -> f64 {
    for _ in 0..BISECT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::boundary_path;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Curve {
        Curve::polyline(&[Point::xy(ax, ay), Point::xy(bx, by)])
    }

    /// Independent dense-sampling crossing oracle: sign changes refined by
    /// bisection on raw segment arithmetic (no Curve involvement).
    fn oracle_segment_crossings(
        a: (f64, f64),
        b: (f64, f64),
        c: (f64, f64),
        r: f64,
        samples: usize,
    ) -> Vec<f64> {
        let f = |t: f64| -> f64 {
            let x = a.0 + t * (b.0 - a.0) - c.0;
            let y = a.1 + t * (b.1 - a.1) - c.1;
            (x * x + y * y).sqrt() - r
        };
        let mut roots = Vec::new();
        let mut prev_t = 0.0;
        let mut prev_f = f(0.0);
        for i in 1..=samples {
            let t = i as f64 / samples as f64;
            let ft = f(t);
            if prev_f == 0.0 {
                roots.push(prev_t);
            } else if prev_f * ft < 0.0 {
                let (mut lo, mut hi) = (prev_t, t);
                let lo_pos = prev_f > 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (f(mid) > 0.0) == lo_pos {
                        lo = mid;
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

    #[test]
    fn crossing_params_frozen_for_horizontal_segment() {
        // Segment (-2,0) -> (2,0) against the sphere of radius 1/2 at the
        // origin: enters at t = 0.375, leaves at t = 0.625.
        let c = seg(-2.0, 0.0, 2.0, 0.0);
        let s = Space::euclidean(2);
        let set =
            sphere_crossings(&c, &s, &Point::xy(0.0, 0.0), 0.5, (0.0, 1.0), 1e-10).unwrap();
        assert_eq!(set.params(), vec![0.375, 0.625]);
        assert!(set.crossings.iter().all(|c| c.solver == CrossingSolver::Quadratic));

        // Cross-check against the independent sampling oracle.
        let oracle = oracle_segment_crossings((-2.0, 0.0), (2.0, 0.0), (0.0, 0.0), 0.5, 1_000_000);
        assert_eq!(oracle.len(), 2);
        for (got, want) in set.params().iter().zip(&oracle) {
            assert!((got - want).abs() <= 1e-9);
        }
    }

    #[test]
    fn crossing_empty_when_sphere_swallows_segment() {
        let c = seg(-2.0, 0.0, 2.0, 0.0);
        let s = Space::euclidean(2);
        let set = sphere_crossings(&c, &s, &Point::xy(0.0, 0.0), 5.0, (0.0, 1.0), 1e-10).unwrap();
        assert!(set.is_empty());
        assert_eq!(
            first_crossing(&c, &s, &Point::xy(0.0, 0.0), 5.0, (0.0, 1.0), 1e-10).unwrap_err(),
            CurveError::NoCrossing
        );
    }

    #[test]
    fn tangent_segment_reports_one_crossing() {
        let c = seg(-2.0, 0.5, 2.0, 0.5);
        let s = Space::euclidean(2);
        let set = sphere_crossings(&c, &s, &Point::xy(0.0, 0.0), 0.5, (0.0, 1.0), 1e-10).unwrap();
        assert_eq!(set.params(), vec![0.5]);
    }

    #[test]
    fn window_restricts_crossings() {
        let c = seg(-2.0, 0.0, 2.0, 0.0);
        let s = Space::euclidean(2);
        let set = sphere_crossings(&c, &s, &Point::xy(0.0, 0.0), 0.5, (0.0, 0.5), 1e-10).unwrap();
        assert_eq!(set.params(), vec![0.375]);
        assert_eq!(
            last_crossing(&c, &s, &Point::xy(0.0, 0.0), 0.5, (0.0, 0.5), 1e-10).unwrap(),
            0.375
        );
    }

    #[test]
    fn chebyshev_crossings_solve_the_active_faces() {
        // Same segment against the max-norm sphere (a square) of radius 1/2:
        // |x| = 1/2 with |y| <= 1/2 gives t = 0.375 and 0.625 again.
        let c = seg(-2.0, 0.0, 2.0, 0.0);
        let s = Space::chebyshev();
        let set = sphere_crossings(&c, &s, &Point::xy(0.0, 0.0), 0.5, (0.0, 1.0), 1e-10).unwrap();
        assert_eq!(set.params(), vec![0.375, 0.625]);

        // A segment running along the face x = 1/2 lies on the sphere over a
        // whole subinterval; its edges are reported.
        let along = seg(0.5, -2.0, 0.5, 2.0);
        let set =
            sphere_crossings(&along, &s, &Point::xy(0.0, 0.0), 0.5, (0.0, 1.0), 1e-10).unwrap();
        let ps = set.params();
        assert_eq!(ps.len(), 2, "expected the two edges of the on-sphere run, got {:?}", ps);
        assert!((ps[0] - 0.375).abs() < 1e-9 && (ps[1] - 0.625).abs() < 1e-9);
    }

    #[test]
    fn arc_crossings_via_bisection() {
        // Upper unit semicircle around the origin against a sphere centered
        // at its apex: crossings symmetric about t = 0.5.
        let s = Space::euclidean(2);
        let arc = boundary_path(
            &s,
            &Point::xy(0.0, 0.0),
            1.0,
            &Point::xy(-1.0, 0.0),
            &Point::xy(1.0, 0.0),
            1e-9,
        )
        .unwrap();
        let set =
            sphere_crossings(&arc, &s, &Point::xy(0.0, 1.0), 0.5, (0.0, 1.0), 1e-10).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.crossings.iter().all(|c| c.solver == CrossingSolver::Bisection));
        let ps = set.params();
        assert!((ps[0] + ps[1] - 1.0).abs() < 1e-9, "symmetric crossings, got {:?}", ps);
        for t in ps {
            let p = arc.evaluate(t).unwrap();
            assert!((s.dist(&p, &Point::xy(0.0, 1.0)) - 0.5).abs() <= 1e-10);
        }
    }

    #[test]
    fn evaluate_is_exact_at_joints_and_ends() {
        let pts =
            [Point::xy(0.0, 0.0), Point::xy(1.0, 1.0), Point::xy(3.0, -1.0), Point::xy(4.0, 0.0)];
        let c = Curve::polyline(&pts);
        assert_eq!(c.start(), &pts[0]);
        assert_eq!(c.end(), &pts[3]);
        for pp in c.pieces() {
            assert_eq!(&c.evaluate(pp.t0).unwrap(), pp.piece.start());
        }
        assert_eq!(&c.evaluate(1.0).unwrap(), &pts[3]);
        assert!(c.evaluate(1.5).is_err());
    }

    #[test]
    fn polyline_parameter_shares_follow_length() {
        let c = Curve::polyline(&[Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), Point::xy(4.0, 0.0)]);
        let pieces = c.pieces();
        assert_eq!(pieces.len(), 2);
        assert!((pieces[0].t1 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn splice_replaces_window_and_stays_continuous() {
        let c = seg(-2.0, 0.0, 2.0, 0.0);
        let s = Space::euclidean(2);
        let u = 0.375;
        let v = 0.625;
        let a = c.evaluate(u).unwrap();
        let b = c.evaluate(v).unwrap();
        let arc = boundary_path(&s, &Point::xy(0.0, 0.0), 0.5, &a, &b, 1e-9).unwrap();
        let out = c.splice(&[SpliceInsert { window: (u, v), curve: arc }]).unwrap();
        assert_eq!(out.range(), (0.0, 1.0));
        assert_eq!(out.start(), c.start());
        assert_eq!(out.end(), c.end());
        // Exact joins at every seam.
        for w in out.pieces().windows(2) {
            assert_eq!(w[0].piece.end(), w[1].piece.start());
            assert_eq!(w[0].t1, w[1].t0);
        }
        // Outside the window the original parameterization survives.
        assert_eq!(out.evaluate(0.1).unwrap(), c.evaluate(0.1).unwrap());
        assert_eq!(out.evaluate(0.9).unwrap(), c.evaluate(0.9).unwrap());
    }

    #[test]
    fn splice_rejects_bad_windows_and_mismatched_inserts() {
        let c = seg(-2.0, 0.0, 2.0, 0.0);
        let flat = seg(0.0, 0.0, 1.0, 0.0);
        // Window touching the range edge.
        let err = c
            .splice(&[SpliceInsert { window: (0.0, 0.5), curve: flat.clone() }])
            .unwrap_err();
        assert_eq!(err, CurveError::OverlappingWindows);
        // Mismatched endpoints.
        let err = c.splice(&[SpliceInsert { window: (0.25, 0.5), curve: flat }]).unwrap_err();
        assert_eq!(err, CurveError::EndpointMismatch);
    }

    #[test]
    fn extract_keeps_parameterization() {
        let c = seg(-2.0, 0.0, 2.0, 0.0);
        let part = c.extract(0.25, 0.75).unwrap();
        assert_eq!(part.range(), (0.25, 0.75));
        assert_eq!(part.evaluate(0.5).unwrap(), c.evaluate(0.5).unwrap());
    }
}

//! Repair a path in a metric space so it avoids a set of removed interior
//! points, by splicing in detours that ride the boundaries of small balls
//! around each offending point.
//!
//! Given a domain `U` in a supported space (Euclidean `R^n`, the max-metric
//! plane, or the line as a deliberate counterexample), a path between two
//! surviving points, and a set `M` of removed interior points — finite, or
//! countable and discrete behind a region query — [`puncture`] finds every
//! parameter where the path touches `M`, sizes a *working ball* around each
//! touched point (small enough to stay inside `U`, to contain no other
//! obstacle and neither endpoint, and to keep the balls pairwise disjoint),
//! and replaces each offending stretch with a path along the ball's
//! boundary sphere. The repaired curve keeps the original endpoints,
//! coincides with the original path outside the replaced windows, and keeps
//! a strictly positive clearance from every removed point — which is why
//! removing `M` from a path-connected `U` leaves it path-connected.
//!
//! [`validate`] re-derives everything from the problem statement and
//! measures the result (clearances, containment, endpoint preservation,
//! sphere-crossing counts); the `detour` binary wraps the pipeline in
//! `repair`, `check`, and `demo` subcommands over JSON problem and result
//! files.
//!
//! # Runnable examples
//!
//! Each major capability has a narrated example under `examples/`:
//!
//! - `single_obstacle` — repair a straight path through one removed point
//!   and inspect the three-piece result.
//! - `multi_obstacle` — two obstacles, the touch schedule, per-obstacle
//!   radius bounds, and both splice windows.
//! - `lattice` — a countably infinite obstacle set (the integer grid)
//!   behind a [`RegionQuery`].
//! - `corollary` — distinct entry and exit branches: why a bent path
//!   through a removed point must cross its sphere at least twice.
//! - `chebyshev` — square balls and perimeter detours under the max metric.
//! - `line_negative` — the one-dimensional counterexample the construction
//!   rejects, and the exit code the CLI maps it to.
//! - `oracle_splice` — bridging two removed points with a caller-supplied
//!   connector, trimmed back to the working spheres.
//! - `modes` — scheduled versus one-at-a-time repair on the same instance.
//! - `svg_plot` — render a repair to SVG.
//!
//! Run one with `cargo run --example <name>`.

pub mod cli;
pub mod curve;
pub mod format;
pub mod repair;
pub mod space;
pub mod svg;
pub mod verify;

pub use curve::{
    first_crossing, last_crossing, sphere_crossings, CircularArc, Crossing, CrossingSet,
    CrossingSolver, Curve, CurveError, Piece, PlacedPiece, SpliceInsert,
};
pub use repair::{
    compute_radii, hit_schedule, prop_delta0, puncture, puncture_one, splice_via_oracle,
    DetourOracle, DetourRadii, HitRecord, HitSchedule, LatticeGenerator, ObstacleSet, Options,
    PunctureMode, RadiusEntry, RegionQuery, RepairError, RepairProblem, SegmentOracle,
    SpliceExtent, SpliceRecord,
};
pub use space::{
    boundary_path, Domain, DomainShape, Point, Space, SpaceError, SpaceKind,
};
pub use verify::{brute_force_crossings, check_hypotheses, validate, RepairReport, Violation};

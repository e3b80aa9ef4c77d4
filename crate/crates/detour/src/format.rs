//! JSON problem and result files.
//!
//! A *problem file* states an instance: the space, the domain, the path
//! waypoints, the obstacle set, and optional knobs. A *result file* records
//! a repair: the repaired curve piece by piece, the working radii with every
//! term of their bounds, the splice schedule, and the validation report.
//! Numbers round-trip losslessly (shortest-representation printing);
//! infinite values (unbounded interior radii, isolation of a lone obstacle,
//! clearance with no obstacle in sight) are encoded as `null`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Curve, PlacedPiece};
use crate::repair::{
    LatticeGenerator, ObstacleSet, Options, RepairProblem, SpliceRecord,
};
use crate::space::{Domain, Point, Space, SpaceKind};
use crate::verify::RepairReport;

pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { field, message: message.into() }
}

/// Domain description as written in problem files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    All,
    Ball {
        center: Point,
        radius: f64,
        #[serde(default)]
        open: bool,
    },
    Box {
        min: Point,
        max: Point,
    },
}

/// Obstacle description as written in problem files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObstacleSpec {
    /// An explicit list of removed points.
    Finite { points: Vec<Point> },
    /// The grid `origin + step * Z^dim`, queried by region on demand.
    Lattice {
        step: f64,
        #[serde(default)]
        origin: Option<Point>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub waypoints: Vec<Point>,
}

/// A repair instance as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: String,
    pub space: Space,
    pub domain: DomainSpec,
    pub path: PathSpec,
    pub obstacles: ObstacleSpec,
    #[serde(default)]
    pub options: Options,
}

impl ProblemFile {
    /// Validate the spelled-out instance and build the in-memory problem.
    pub fn to_problem(&self) -> Result<RepairProblem, FormatError> {
        if self.version != FORMAT_VERSION {
            return Err(invalid(
                "version",
                format!("expected {FORMAT_VERSION:?}, got {:?}", self.version),
            ));
        }
        let space = self.space;
        match space.kind {
            SpaceKind::Euclidean if space.dim >= 1 => {}
            SpaceKind::Chebyshev if space.dim == 2 => {}
            SpaceKind::Line if space.dim == 1 => {}
            _ => {
                return Err(invalid(
                    "space.dim",
                    format!("dimension {} is not valid for {:?}", space.dim, space.kind),
                ))
            }
        }
        let check_point = |field: &'static str, p: &Point| -> Result<(), FormatError> {
            if p.dim() != space.dim {
                return Err(invalid(
                    field,
                    format!("expected {} coordinates, got {}", space.dim, p.dim()),
                ));
            }
            if !p.is_finite() {
                return Err(invalid(field, "coordinates must be finite"));
            }
            Ok(())
        };

        let domain = match &self.domain {
            DomainSpec::All => Domain::all(space),
            DomainSpec::Ball { center, radius, open } => {
                check_point("domain.center", center)?;
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(invalid("domain.radius", "must be positive and finite"));
                }
                if *open {
                    Domain::open_ball(space, center.clone(), *radius)
                } else {
                    Domain::ball(space, center.clone(), *radius)
                }
            }
            DomainSpec::Box { min, max } => {
                check_point("domain.min", min)?;
                check_point("domain.max", max)?;
                for i in 0..space.dim {
                    if !(min.coords[i] < max.coords[i]) {
                        return Err(invalid("domain.max", "must exceed `min` coordinatewise"));
                    }
                }
                Domain::bbox(space, min.clone(), max.clone())
            }
        };

        if self.path.waypoints.len() < 2 {
            return Err(invalid("path.waypoints", "need at least two waypoints"));
        }
        for p in &self.path.waypoints {
            check_point("path.waypoints", p)?;
        }
        let path = Curve::polyline(&self.path.waypoints);

        let obstacles = match &self.obstacles {
            ObstacleSpec::Finite { points } => {
                for p in points {
                    check_point("obstacles.points", p)?;
                }
                ObstacleSet::finite(points.clone())
            }
            ObstacleSpec::Lattice { step, origin } => {
                if !(*step > 0.0 && step.is_finite()) {
                    return Err(invalid("obstacles.step", "must be positive and finite"));
                }
                let origin = match origin {
                    Some(o) => {
                        check_point("obstacles.origin", o)?;
                        o.clone()
                    }
                    None => Point::new(vec![0.0; space.dim]),
                };
                ObstacleSet::generator(Arc::new(LatticeGenerator::new(space, origin, *step)))
            }
        };

        Ok(RepairProblem { space, domain, path, obstacles, options: self.options })
    }
}

fn to_nullable(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn from_nullable(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::INFINITY)
}

/// One working-ball radius with every term of its bound; `null` means
/// "unbounded" (the minimum absorbs it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusDto {
    pub obstacle: Point,
    pub interior: Option<f64>,
    pub isolation: Option<f64>,
    pub separation: Option<f64>,
    pub formula: f64,
    pub working: f64,
}

impl RadiusDto {
    pub fn interior_radius(&self) -> f64 {
        from_nullable(self.interior)
    }
    pub fn isolation_radius(&self) -> f64 {
        from_nullable(self.isolation)
    }
    pub fn separation_distance(&self) -> f64 {
        from_nullable(self.separation)
    }
}

/// One splice: where the path touched the obstacle and where the detour cuts
/// in and out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDto {
    pub obstacle: Point,
    pub hit_first: f64,
    pub hit_last: f64,
    pub entry: f64,
    pub exit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingCountDto {
    pub obstacle: Point,
    pub crossings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDto {
    pub endpoints_ok: bool,
    pub continuity_modulus: f64,
    pub min_clearance: Option<f64>,
    pub containment_ok: bool,
    pub crossing_counts: Vec<CrossingCountDto>,
    pub violations: Vec<String>,
}

impl From<&RepairReport> for ReportDto {
    fn from(r: &RepairReport) -> Self {
        ReportDto {
            endpoints_ok: r.endpoints_ok,
            continuity_modulus: r.continuity_modulus,
            min_clearance: to_nullable(r.min_clearance),
            containment_ok: r.containment_ok,
            crossing_counts: r
                .crossing_counts
                .iter()
                .map(|(p, c)| CrossingCountDto { obstacle: p.clone(), crossings: *c })
                .collect(),
            violations: r.violations.iter().map(|v| v.to_string()).collect(),
        }
    }
}

/// A repair as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub version: String,
    pub pieces: Vec<PlacedPiece>,
    pub radii: Vec<RadiusDto>,
    pub schedule: Vec<ScheduleDto>,
    pub report: ReportDto,
}

impl ResultFile {
    pub fn new(curve: &Curve, records: &[SpliceRecord], report: &RepairReport) -> Self {
        ResultFile {
            version: FORMAT_VERSION.to_string(),
            pieces: curve.pieces().to_vec(),
            radii: records
                .iter()
                .map(|r| RadiusDto {
                    obstacle: r.radius.obstacle.clone(),
                    interior: to_nullable(r.radius.interior),
                    isolation: to_nullable(r.radius.isolation),
                    separation: to_nullable(r.radius.separation),
                    formula: r.radius.formula,
                    working: r.radius.working,
                })
                .collect(),
            schedule: records
                .iter()
                .map(|r| ScheduleDto {
                    obstacle: r.obstacle.clone(),
                    hit_first: r.hit_first,
                    hit_last: r.hit_last,
                    entry: r.entry_param,
                    exit: r.exit_param,
                })
                .collect(),
            report: ReportDto::from(report),
        }
    }

    /// Reassemble the stored pieces into a curve, re-checking contiguity.
    pub fn to_curve(&self) -> Result<Curve, FormatError> {
        if self.version != FORMAT_VERSION {
            return Err(invalid(
                "version",
                format!("expected {FORMAT_VERSION:?}, got {:?}", self.version),
            ));
        }
        Curve::from_placed(self.pieces.clone())
            .map_err(|e| invalid("pieces", e.to_string()))
    }
}

pub fn read_problem(path: &Path) -> Result<ProblemFile, FormatError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_result(path: &Path) -> Result<ResultFile, FormatError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-printed JSON with a trailing newline; field order is fixed by the
/// struct definitions, so identical inputs produce identical bytes.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    std::fs::write(path, to_json_string(value))?;
    Ok(())
}

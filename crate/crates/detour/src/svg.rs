//! Plain-SVG rendering of two-dimensional instances: the domain outline,
//! the obstacles and their working balls, and the path before and after the
//! repair. Output is deterministic (pure `Display` formatting, fixed element
//! order), so re-rendering the same repair produces identical bytes.

use std::fmt::Write as _;

use crate::curve::Curve;
use crate::repair::{RepairProblem, SpliceRecord};
use crate::space::{DomainShape, Point, SpaceKind};

const WIDTH: f64 = 640.0;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn map(&self, p: &Point) -> (f64, f64) {
        (
            (p.coords[0] - self.min_x) * self.scale,
            (self.max_y - p.coords[1]) * self.scale,
        )
    }
}

/// Render a repaired two-dimensional instance. Panics if the space is not
/// two-dimensional.
pub fn render(
    problem: &RepairProblem,
    original: &Curve,
    repaired: &Curve,
    records: &[SpliceRecord],
) -> String {
    assert_eq!(problem.space.dim, 2, "only two-dimensional instances can be rendered");
    let square_balls = problem.space.kind == SpaceKind::Chebyshev;

    // Gather everything that must fit in the picture.
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut cover = |p: &Point, pad: f64| {
        xs.push(p.coords[0] - pad);
        xs.push(p.coords[0] + pad);
        ys.push(p.coords[1] - pad);
        ys.push(p.coords[1] + pad);
    };
    match &problem.domain.shape {
        DomainShape::All => {}
        DomainShape::Ball { center, radius, .. } => cover(center, *radius),
        DomainShape::Box { min, max } => {
            cover(min, 0.0);
            cover(max, 0.0);
        }
    }
    for r in records {
        cover(&r.obstacle, r.radius.working);
    }
    let orig_pts: Vec<Point> =
        original.sample_params(512).iter().map(|&t| original.eval_unchecked(t)).collect();
    let rep_pts: Vec<Point> =
        repaired.sample_params(1024).iter().map(|&t| repaired.eval_unchecked(t)).collect();
    for p in orig_pts.iter().chain(&rep_pts) {
        cover(p, 0.0);
    }
    let (min_x, max_x) = bounds(&xs);
    let (min_y, max_y) = bounds(&ys);
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let pad = 0.05 * span_x.max(span_y);
    let frame = Frame {
        min_x: min_x - pad,
        max_y: max_y + pad,
        scale: WIDTH / (span_x + 2.0 * pad),
    };
    let height = (span_y + 2.0 * pad) * frame.scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    match &problem.domain.shape {
        DomainShape::All => {}
        DomainShape::Ball { center, radius, .. } => {
            push_ball(&mut out, &frame, center, *radius, square_balls, "#999999", None);
        }
        DomainShape::Box { min, max } => {
            let (x0, y1) = frame.map(min);
            let (x1, y0) = frame.map(max);
            let _ = writeln!(
                out,
                r##"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="#999999" stroke-width="1.5"/>"##,
                x1 - x0,
                y1 - y0
            );
        }
    }

    polyline(&mut out, &frame, &orig_pts, "#bbbbbb", 1.0);
    for r in records {
        push_ball(
            &mut out,
            &frame,
            &r.obstacle,
            r.radius.working,
            square_balls,
            "#cc3333",
            Some("5 4"),
        );
    }
    polyline(&mut out, &frame, &rep_pts, "#117755", 2.0);
    for r in records {
        let (cx, cy) = frame.map(&r.obstacle);
        let a = 4.0;
        let _ = writeln!(
            out,
            r##"<path d="M {} {} L {} {} M {} {} L {} {}" stroke="#cc3333" stroke-width="1.5"/>"##,
            cx - a,
            cy - a,
            cx + a,
            cy + a,
            cx - a,
            cy + a,
            cx + a,
            cy - a
        );
    }
    for p in [repaired.start(), repaired.end()] {
        let (cx, cy) = frame.map(p);
        let _ = writeln!(out, r##"<circle cx="{cx}" cy="{cy}" r="3" fill="#117755"/>"##);
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() && hi.is_finite() {
        (lo, hi)
    } else {
        (-1.0, 1.0)
    }
}

fn polyline(out: &mut String, frame: &Frame, pts: &[Point], stroke: &str, width: f64) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = frame.map(p);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
        coords.join(" ")
    );
}

fn push_ball(
    out: &mut String,
    frame: &Frame,
    center: &Point,
    radius: f64,
    square: bool,
    stroke: &str,
    dash: Option<&str>,
) {
    let dash_attr =
        dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
    if square {
        // A max-metric ball is an axis-aligned square.
        let (x, y) = frame.map(&Point::xy(center.coords[0] - radius, center.coords[1] + radius));
        let side = 2.0 * radius * frame.scale;
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{y}" width="{side}" height="{side}" fill="none" stroke="{stroke}" stroke-width="1.5"{dash_attr}/>"#
        );
    } else {
        let (cx, cy) = frame.map(center);
        let r = radius * frame.scale;
        let _ = writeln!(
            out,
            r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="{stroke}" stroke-width="1.5"{dash_attr}/>"#
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repair::{puncture, ObstacleSet, Options};
    use crate::space::{Domain, Space};

    #[test]
    fn renders_deterministic_svg_with_one_ball_per_record() {
        let space = Space::euclidean(2);
        let problem = RepairProblem {
            space,
            domain: Domain::ball(space, Point::xy(0.0, 0.0), 10.0),
            path: Curve::polyline(&[Point::xy(-3.0, 0.0), Point::xy(3.0, 0.0)]),
            obstacles: ObstacleSet::finite(vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)]),
            options: Options::default(),
        };
        let (curve, records, _) = puncture(&problem).unwrap();
        let svg = render(&problem, &problem.path, &curve, &records);
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("stroke-dasharray").count(), records.len());
        assert_eq!(svg, render(&problem, &problem.path, &curve, &records));
    }

    #[test]
    fn chebyshev_balls_render_as_squares() {
        let space = Space::chebyshev();
        let problem = RepairProblem {
            space,
            domain: Domain::ball(space, Point::xy(0.0, 0.0), 8.0),
            path: Curve::polyline(&[Point::xy(-3.0, 0.0), Point::xy(3.0, 0.0)]),
            obstacles: ObstacleSet::finite(vec![Point::xy(0.0, 0.0)]),
            options: Options::default(),
        };
        let (curve, records, _) = puncture(&problem).unwrap();
        let svg = render(&problem, &problem.path, &curve, &records);
        // Domain square + one dashed working square; no circles except the
        // two endpoint dots.
        assert!(svg.matches("<rect").count() >= 2);
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}

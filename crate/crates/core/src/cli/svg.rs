//! Minimal SVG overlay writer. Planar only; 3D input is drawn in its xy
//! projection.

use std::fmt::Write as _;

use crate::geometry::{EmbeddedNetwork, Point};
use crate::tube::BoundaryPiece;

/// Margin added on each side, as a fraction of the larger extent.
const MARGIN: f64 = 0.05;

#[derive(Debug, Default, Clone)]
pub struct Scene {
    /// Points of `M`, drawn as crosses.
    pub points: Vec<Point>,
    /// Constraint or covering disks, drawn dashed.
    pub disks: Vec<(Point, f64)>,
    /// Networks and curves, drawn as solid polylines.
    pub networks: Vec<EmbeddedNetwork>,
    /// Tube boundary pieces, drawn thin.
    pub boundary: Vec<BoundaryPiece>,
    /// Witness points, drawn as filled dots.
    pub witnesses: Vec<Point>,
}

impl Scene {
    fn is_empty(&self) -> bool {
        self.points.is_empty()
            && self.disks.is_empty()
            && self.networks.is_empty()
            && self.boundary.is_empty()
            && self.witnesses.is_empty()
    }

    /// `[min_x, min_y, max_x, max_y]` of everything drawn.
    fn extent(&self) -> [f64; 4] {
        let mut b = [
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ];
        let mut add = |p: &Point, pad: f64| {
            b[0] = b[0].min(p.x() - pad);
            b[1] = b[1].min(p.y() - pad);
            b[2] = b[2].max(p.x() + pad);
            b[3] = b[3].max(p.y() + pad);
        };
        self.points
            .iter()
            .chain(&self.witnesses)
            .for_each(|p| add(p, 0.0));
        self.disks.iter().for_each(|(c, r)| add(c, *r));
        for net in &self.networks {
            net.nodes().iter().for_each(|p| add(p, 0.0));
        }
        for piece in &self.boundary {
            match *piece {
                BoundaryPiece::Segment { from, to } => {
                    add(&from, 0.0);
                    add(&to, 0.0);
                }
                BoundaryPiece::Arc { center, radius, .. } => add(&center, radius),
            }
        }
        b
    }

    pub fn render(&self) -> String {
        let [x0, y0, x1, y1] = if self.is_empty() {
            [0.0, 0.0, 1.0, 1.0]
        } else {
            self.extent()
        };
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let m = MARGIN * span;
        let (w, h) = (x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m);
        // y-up: flip y so that the top of the picture is max_y
        let tx = |p: &Point| (p.x(), -p.y());
        let stroke = span / 400.0;
        let mark = span / 150.0;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
            num(x0 - m),
            num(-y1 - m),
            num(w),
            num(h),
            num(800.0 * h / w),
        );
        if !self.disks.is_empty() {
            let _ = writeln!(
                s,
                r#"<g class="disks" fill="none" stroke="steelblue" stroke-width="{}" stroke-dasharray="{} {}">"#,
                num(stroke),
                num(4.0 * stroke),
                num(3.0 * stroke)
            );
            for (c, r) in &self.disks {
                let (x, y) = tx(c);
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                    num(x),
                    num(y),
                    num(*r)
                );
            }
            s.push_str("</g>\n");
        }
        if !self.boundary.is_empty() {
            let _ = writeln!(
                s,
                r#"<g class="tube-boundary" fill="none" stroke="gray" stroke-width="{}">"#,
                num(stroke / 2.0)
            );
            for piece in &self.boundary {
                let _ = writeln!(s, r#"<path d="{}"/>"#, piece_path(piece, &tx));
            }
            s.push_str("</g>\n");
        }
        if !self.networks.is_empty() {
            let _ = writeln!(
                s,
                r#"<g class="sigma" fill="none" stroke="black" stroke-width="{}" stroke-linecap="round">"#,
                num(2.0 * stroke)
            );
            for net in &self.networks {
                for (a, b) in net.segments() {
                    let ((ax, ay), (bx, by)) = (tx(&a), tx(&b));
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{},{} {},{}"/>"#,
                        num(ax),
                        num(ay),
                        num(bx),
                        num(by)
                    );
                }
                if net.edges().is_empty() {
                    for p in net.nodes() {
                        let (x, y) = tx(p);
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#,
                            num(x),
                            num(y),
                            num(stroke)
                        );
                    }
                }
            }
            s.push_str("</g>\n");
        }
        if !self.points.is_empty() {
            let _ = writeln!(
                s,
                r#"<g class="m-points" stroke="crimson" stroke-width="{}">"#,
                num(stroke)
            );
            for p in &self.points {
                let (x, y) = tx(p);
                let _ = writeln!(
                    s,
                    r#"<path d="M{} {}L{} {}M{} {}L{} {}"/>"#,
                    num(x - mark),
                    num(y - mark),
                    num(x + mark),
                    num(y + mark),
                    num(x - mark),
                    num(y + mark),
                    num(x + mark),
                    num(y - mark)
                );
            }
            s.push_str("</g>\n");
        }
        if !self.witnesses.is_empty() {
            s.push_str("<g class=\"witnesses\" fill=\"darkorange\">\n");
            for p in &self.witnesses {
                let (x, y) = tx(p);
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                    num(x),
                    num(y),
                    num(mark)
                );
            }
            s.push_str("</g>\n");
        }
        s.push_str("</svg>\n");
        s
    }
}

fn piece_path(piece: &BoundaryPiece, tx: &impl Fn(&Point) -> (f64, f64)) -> String {
    match *piece {
        BoundaryPiece::Segment { from, to } => {
            let ((ax, ay), (bx, by)) = (tx(&from), tx(&to));
            format!("M{} {}L{} {}", num(ax), num(ay), num(bx), num(by))
        }
        BoundaryPiece::Arc {
            center,
            radius,
            start,
            end,
        } => {
            let at = |t: f64| tx(&(center + Point::new2(t.cos(), t.sin()) * radius));
            let (ax, ay) = at(start);
            let sweep = end - start;
            // full circles cannot be drawn as one arc command
            if sweep >= std::f64::consts::TAU - 1e-12 {
                let (mx, my) = at(start + std::f64::consts::PI);
                return format!(
                    "M{} {}A{r} {r} 0 0 0 {} {}A{r} {r} 0 0 0 {} {}",
                    num(ax),
                    num(ay),
                    num(mx),
                    num(my),
                    num(ax),
                    num(ay),
                    r = num(radius)
                );
            }
            let (bx, by) = at(end);
            let large = u8::from(sweep > std::f64::consts::PI);
            // counterclockwise in y-up is sweep-flag 0 after the flip
            format!(
                "M{} {}A{r} {r} 0 {large} 0 {} {}",
                num(ax),
                num(ay),
                num(bx),
                num(by),
                r = num(radius)
            )
        }
    }
}

/// Shortest round-trip decimal; small scenes need every digit.
fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_compact() {
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1e-7), "0.0000001");
    }

    #[test]
    fn empty_scene_is_still_a_document() {
        let s = Scene::default().render();
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(!s.contains("<g"));
    }

    #[test]
    fn y_axis_points_up() {
        let scene = Scene {
            witnesses: vec![Point::new2(0.0, 2.0)],
            points: vec![Point::new2(0.0, 0.0)],
            ..Scene::default()
        };
        let s = scene.render();
        assert!(s.contains(r#"cy="-2""#), "{s}");
    }
}

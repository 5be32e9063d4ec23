use serde::{Deserialize, Serialize};

use super::check_dim;
use super::network::EmbeddedNetwork;
use super::point::Point;
use crate::error::{invalid, Error, Result};

/// Polyline with an arc-length parametrization.
///
/// A curve whose last vertex equals its first is treated as closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct PolyCurve {
    vertices: Vec<Point>,
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    vertices: Vec<Point>,
}

impl TryFrom<RawCurve> for PolyCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        PolyCurve::new(raw.vertices)
    }
}

impl From<PolyCurve> for RawCurve {
    fn from(c: PolyCurve) -> Self {
        RawCurve {
            vertices: c.vertices,
        }
    }
}

impl PolyCurve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidCurve(
                "a curve needs at least two vertices".into(),
            ));
        }
        let dim = vertices[0].dim();
        check_dim(dim)?;
        if let Some(p) = vertices.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidCurve("non-finite coordinate".into()));
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        cumulative.push(0.0);
        for (i, w) in vertices.windows(2).enumerate() {
            let len = w[0].dist(&w[1]);
            if len == 0.0 {
                return Err(Error::InvalidCurve(format!(
                    "vertices {i} and {} coincide",
                    i + 1
                )));
            }
            cumulative.push(cumulative[i] + len);
        }
        Ok(PolyCurve {
            vertices,
            cumulative,
        })
    }

    /// Polygonal arc of the circle `center + radius (cos θ, sin θ)`, θ from
    /// `from` to `to`, with `segments` equal chords. A full turn yields a
    /// closed curve.
    pub fn arc(center: Point, radius: f64, from: f64, to: f64, segments: usize) -> Result<Self> {
        if segments == 0 {
            return Err(invalid("segments", "must be positive"));
        }
        let mut vertices: Vec<Point> = (0..=segments)
            .map(|i| {
                let t = from + (to - from) * i as f64 / segments as f64;
                center + Point::new2(radius * t.cos(), radius * t.sin())
            })
            .collect();
        if ((to - from).abs() - std::f64::consts::TAU).abs() < 1e-12 {
            vertices[segments] = vertices[0];
        }
        PolyCurve::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Cumulative arc length at each vertex.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segment(&self, i: usize) -> (Point, Point) {
        (self.vertices[i], self.vertices[i + 1])
    }

    pub fn max_segment_length(&self) -> f64 {
        self.cumulative
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 2 && self.vertices.first() == self.vertices.last()
    }

    /// Arc-length parameter of the point at `param` along segment `seg`.
    pub fn arc_param(&self, seg: usize, param: f64) -> f64 {
        self.cumulative[seg] + param * (self.cumulative[seg + 1] - self.cumulative[seg])
    }

    /// γ(t) for arc length `t`, clamped to `[0, length]`.
    pub fn point_at(&self, t: f64) -> Point {
        let t = t.clamp(0.0, self.length());
        let seg = self.segment_at(t);
        let (a, b) = self.segment(seg);
        let len = self.cumulative[seg + 1] - self.cumulative[seg];
        a.lerp(&b, ((t - self.cumulative[seg]) / len).clamp(0.0, 1.0))
    }

    /// Index of the segment containing arc length `t`.
    pub fn segment_at(&self, t: f64) -> usize {
        let idx = self.cumulative.partition_point(|&c| c <= t);
        idx.saturating_sub(1).min(self.segment_count() - 1)
    }

    /// Sub-curve γ([s, t]) (requires `s < t`).
    pub fn sub_curve(&self, s: f64, t: f64) -> Result<PolyCurve> {
        let (s, t) = (s.max(0.0), t.min(self.length()));
        if s >= t {
            return Err(invalid("t", "empty parameter interval"));
        }
        let mut vertices = vec![self.point_at(s)];
        for (v, c) in self.vertices.iter().zip(&self.cumulative) {
            if *c > s && *c < t && *v != *vertices.last().unwrap() {
                vertices.push(*v);
            }
        }
        let end = self.point_at(t);
        if end != *vertices.last().unwrap() {
            vertices.push(end);
        }
        if vertices.len() < 2 {
            // interval shorter than floating resolution
            return Ok(PolyCurve {
                cumulative: vec![0.0],
                vertices,
            });
        }
        PolyCurve::new(vertices)
    }

    /// The curve as a network (closed curves get their closing edge).
    pub fn to_network(&self) -> EmbeddedNetwork {
        let n = self.vertices.len();
        let (nodes, edges) = if self.is_closed() {
            let m = n - 1;
            (
                self.vertices[..m].to_vec(),
                (0..m).map(|i| (i, (i + 1) % m)).collect(),
            )
        } else {
            (self.vertices.clone(), (1..n).map(|i| (i - 1, i)).collect())
        };
        EmbeddedNetwork::new(nodes, edges).expect("validated curve is a valid network")
    }
}

/// Subdivides every segment into equal pieces no longer than `h`.
///
/// Vertices of the input are kept, so the length is preserved up to rounding.
pub fn resample(curve: &PolyCurve, h: f64) -> Result<PolyCurve> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid("h", format!("must be positive, got {h}")));
    }
    let mut vertices = vec![curve.vertices[0]];
    for i in 0..curve.segment_count() {
        let (a, b) = curve.segment(i);
        let pieces = (a.dist(&b) / h).ceil().max(1.0) as usize;
        for k in 1..pieces {
            vertices.push(a.lerp(&b, k as f64 / pieces as f64));
        }
        vertices.push(b);
    }
    PolyCurve::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_segment() -> PolyCurve {
        PolyCurve::new(vec![Point::new2(0.0, 0.0), Point::new2(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn resample_unit_segment() {
        let c = resample(&unit_segment(), 0.25).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.vertices()[4], Point::new2(1.0, 0.0));
    }

    #[test]
    fn resample_quarter_circle_length() {
        let fine = PolyCurve::arc(Point::new2(0.0, 0.0), 1.0, 0.0, PI / 2.0, 10_000).unwrap();
        let c = resample(&fine, 0.01).unwrap();
        assert!((c.length() - PI / 2.0).abs() < 1e-4);
        assert!(c.max_segment_length() <= 0.01);
    }

    #[test]
    fn resample_coarse_is_identity() {
        let c = resample(&unit_segment(), 2.0).unwrap();
        assert_eq!(c, unit_segment());
        assert!(resample(&unit_segment(), 0.0).is_err());
        assert!(resample(&unit_segment(), -1.0).is_err());
    }

    #[test]
    fn point_at_and_sub_curve() {
        let c = PolyCurve::new(vec![
            Point::new2(1.0, 0.0),
            Point::new2(0.0, 0.0),
            Point::new2(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(c.length(), 2.0);
        assert_eq!(c.point_at(0.5), Point::new2(0.5, 0.0));
        assert_eq!(c.point_at(1.5), Point::new2(0.0, 0.5));
        let s = c.sub_curve(0.5, 1.5).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.length() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(PolyCurve::new(vec![Point::new2(0.0, 0.0)]).is_err());
        assert!(PolyCurve::new(vec![Point::new2(0.0, 0.0), Point::new2(0.0, 0.0)]).is_err());
        assert!(PolyCurve::new(vec![Point::new2(0.0, 0.0), Point::new3(1.0, 0.0, 0.0)]).is_err());
        let c: PolyCurve = serde_json::from_str(r#"{"vertices": [[0,0],[3,4]]}"#).unwrap();
        assert_eq!(c.length(), 5.0);
    }

    #[test]
    fn closed_curve_network() {
        let c = PolyCurve::new(vec![
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(0.0, 1.0),
            Point::new2(0.0, 0.0),
        ])
        .unwrap();
        assert!(c.is_closed());
        let n = c.to_network();
        assert_eq!((n.nodes().len(), n.edges().len()), (3, 3));
        assert!(n.has_cycle());
    }
}

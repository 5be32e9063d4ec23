//! Dimension-generic primitives: points, polylines, embedded networks,
//! point-to-network distances, planar convex hulls and resampling.

mod bvh;
mod curve;
mod hull;
mod network;
mod point;

pub use bvh::SegmentIndex;
pub use curve::{resample, PolyCurve};
pub use hull::{convex_hull_2d, polygon_area, polygon_perimeter};
pub use network::{dist_to_network, dist_to_network_with, EmbeddedNetwork, Foot, NetworkDistance};
pub use point::{Aabb, Point};

use crate::error::{Error, Result};

/// Default tie tolerance on distances when deciding that two feet are
/// equally near.
pub const TIE_DISTANCE: f64 = 1e-9;

/// How close two candidate nearest points may be before they count as one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TieTolerance {
    /// Absolute slack on distance.
    pub distance: f64,
    /// Minimum separation between feet for them to be distinct.
    pub separation: f64,
}

impl Default for TieTolerance {
    fn default() -> Self {
        TieTolerance {
            distance: TIE_DISTANCE,
            separation: 1e-9,
        }
    }
}

/// Distance from `p` to the segment `[a, b]` and the parameter of the foot
/// `a + t (b - a)`, `t ∈ [0, 1]`.
pub fn dist_point_segment(p: &Point, a: &Point, b: &Point) -> Result<(f64, f64)> {
    if a == b {
        return Err(Error::DegenerateSegment);
    }
    Ok(segment_foot(p, a, b))
}

/// Like [`dist_point_segment`] but a degenerate segment is treated as a point.
#[inline]
pub(crate) fn segment_foot(p: &Point, a: &Point, b: &Point) -> (f64, f64) {
    let ab = *b - *a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return (p.dist(a), 0.0);
    }
    let t = ((*p - *a).dot(&ab) / len_sq).clamp(0.0, 1.0);
    let foot = if t == 0.0 {
        *a
    } else if t == 1.0 {
        *b
    } else {
        *a + ab * t
    };
    (p.dist(&foot), t)
}

/// Squared distance between segments `[p1, q1]` and `[p2, q2]` in R^3.
pub(crate) fn segment_segment_dist_sq(p1: &Point, q1: &Point, p2: &Point, q2: &Point) -> f64 {
    segment_segment_closest(p1, q1, p2, q2).0
}

/// Squared distance between two segments and the parameters `(s, t)` of a
/// closest pair `p1 + s (q1 - p1)`, `p2 + t (q2 - p2)`.
pub(crate) fn segment_segment_closest(
    p1: &Point,
    q1: &Point,
    p2: &Point,
    q2: &Point,
) -> (f64, f64, f64) {
    // Closest points of two segments (Ericson, Real-Time Collision Detection 5.1.9).
    let d1 = *q1 - *p1;
    let d2 = *q2 - *p2;
    let r = *p1 - *p2;
    let a = d1.norm_sq();
    let e = d2.norm_sq();
    let f = d2.dot(&r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return (p1.dist_sq(p2), 0.0, 0.0);
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let c1 = *p1 + d1 * s;
    let c2 = *p2 + d2 * t;
    (c1.dist_sq(&c2), s, t)
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

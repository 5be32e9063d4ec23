use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{
    segment_foot, segment_segment_closest, segment_segment_dist_sq, Point, PolyCurve,
};

/// Radius of the circle through three points; `+∞` when they are collinear.
pub fn circumradius(a: &Point, b: &Point, c: &Point) -> f64 {
    let ab = *b - *a;
    let ac = *c - *a;
    let cross = ab.cross(&ac).norm();
    if cross == 0.0 {
        return f64::INFINITY;
    }
    ab.norm() * ac.norm() * (*c - *b).norm() / (2.0 * cross)
}

/// Discrete curvature radius: the smallest circumradius over consecutive
/// vertex triples (wrapping around for closed curves).
pub fn curvature_radius_estimate(curve: &PolyCurve) -> Result<f64> {
    let v = curve.vertices();
    if v.len() < 3 {
        return Err(Error::InvalidCurve(
            "curvature needs at least three vertices".into(),
        ));
    }
    let mut min = v
        .windows(3)
        .map(|w| circumradius(&w[0], &w[1], &w[2]))
        .fold(f64::INFINITY, f64::min);
    if curve.is_closed() {
        let n = v.len();
        min = min.min(circumradius(&v[n - 2], &v[0], &v[1]));
    }
    Ok(min)
}

/// Fails with [`Error::SelfIntersecting`] when two non-adjacent segments touch
/// or two adjacent segments fold back onto each other.
pub fn check_simple(curve: &PolyCurve) -> Result<()> {
    let m = curve.segment_count();
    let closed = curve.is_closed();
    let tol = 1e-12 * curve.length();
    let tol_sq = tol * tol;
    let bounds: Vec<_> = (0..m)
        .map(|i| {
            let (a, b) = curve.segment(i);
            crate::geometry::Aabb::from_points([&a, &b], curve.dim()).inflate(tol)
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| bounds[i].min.x().total_cmp(&bounds[j].min.x()));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if bounds[j].min.x() > bounds[i].max.x() {
                break;
            }
            let (i, j) = (i.min(j), i.max(j));
            let (a, b) = curve.segment(i);
            let (c, d) = curve.segment(j);
            let adjacent = j == i + 1 || (closed && i == 0 && j == m - 1);
            if adjacent {
                // shared vertex; only a fold-back counts
                let (u, w) = if j == i + 1 {
                    (a - b, d - c)
                } else {
                    (b - a, c - d)
                };
                if u.cross(&w).norm() <= 1e-12 * u.norm() * w.norm() && u.dot(&w) > 0.0 {
                    return Err(Error::SelfIntersecting);
                }
                continue;
            }
            if segment_segment_dist_sq(&a, &b, &c, &d) <= tol_sq {
                return Err(Error::SelfIntersecting);
            }
        }
    }
    Ok(())
}

/// Admissible tube radius `min(ε₁, R)` for a simple curve, where `R` is the
/// discrete curvature radius capped at the curve length and
/// `ε₁ = ½ min |γ(t) − γ(s)|` over parameter pairs at least `πR` apart.
pub fn admissible_radius(curve: &PolyCurve) -> Result<f64> {
    check_simple(curve)?;
    let curvature = if curve.len() >= 3 {
        curvature_radius_estimate(curve)?
    } else {
        f64::INFINITY
    };
    let total = curve.length();
    let r = curvature.min(total);
    let lo = PI * r;
    // closed curves measure separation around the loop
    let hi = if curve.is_closed() {
        total - lo
    } else {
        f64::INFINITY
    };
    if lo > total || lo > hi {
        return Ok(r);
    }
    let min_dist = separated_min_distance(curve, lo, hi);
    if !min_dist.is_finite() {
        return Ok(r);
    }
    Ok((0.5 * min_dist).min(r))
}

/// `min |γ(t) − γ(s)|` over `lo ≤ s − t ≤ hi`.
fn separated_min_distance(curve: &PolyCurve, lo: f64, hi: f64) -> f64 {
    let cum = curve.cumulative();
    let m = curve.segment_count();
    let mut best = f64::INFINITY;
    for i in 0..m {
        let (a, b) = curve.segment(i);
        let (t0, t1) = (cum[i], cum[i + 1]);
        for j in i..m {
            let (s0, s1) = (cum[j], cum[j + 1]);
            if s1 - t0 < lo {
                continue;
            }
            if s0 - t1 > hi {
                break;
            }
            let (c, d) = curve.segment(j);
            best = best.min(pair_min(&a, &b, t0, t1, &c, &d, s0, s1, lo, hi));
        }
    }
    best
}

/// Minimum of the convex function `|P(t) − Q(s)|` over the rectangle of the
/// two segments intersected with the band `lo ≤ s − t ≤ hi`.
#[allow(clippy::too_many_arguments)]
fn pair_min(
    a: &Point,
    b: &Point,
    t0: f64,
    t1: f64,
    c: &Point,
    d: &Point,
    s0: f64,
    s1: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    let p_at = |t: f64| a.lerp(b, ((t - t0) / (t1 - t0)).clamp(0.0, 1.0));
    let q_at = |s: f64| c.lerp(d, ((s - s0) / (s1 - s0)).clamp(0.0, 1.0));
    let mut best = f64::INFINITY;

    let (dsq, u, v) = segment_segment_closest(a, b, c, d);
    let gap = (s0 + v * (s1 - s0)) - (t0 + u * (t1 - t0));
    if gap >= lo && gap <= hi {
        return dsq.sqrt();
    }
    // rectangle sides clipped to the band
    for t in [t0, t1] {
        let (from, to) = (s0.max(t + lo), s1.min(t + hi));
        if from <= to {
            best = best.min(segment_foot(&p_at(t), &q_at(from), &q_at(to)).0);
        }
    }
    for s in [s0, s1] {
        let (from, to) = (t0.max(s - hi), t1.min(s - lo));
        if from <= to {
            best = best.min(segment_foot(&q_at(s), &p_at(from), &p_at(to)).0);
        }
    }
    // band lines s = t + δ: both points move linearly in t
    for delta in [lo, hi] {
        if !delta.is_finite() {
            continue;
        }
        let (from, to) = (t0.max(s0 - delta), t1.min(s1 - delta));
        if from > to {
            continue;
        }
        let w0 = q_at(from + delta) - p_at(from);
        let w1 = q_at(to + delta) - p_at(to);
        best = best.min(segment_foot(&Point::zero(a.dim()), &w0, &w1).0);
    }
    best
}

use super::point::Point;
use crate::error::{Error, Result};

/// Convex hull of planar points, counterclockwise, without collinear
/// boundary points (monotone chain).
pub fn convex_hull_2d(points: &[Point]) -> Result<Vec<Point>> {
    if points.iter().any(|p| p.dim() != 2) {
        return Err(Error::NonPlanar);
    }
    if points.is_empty() {
        return Err(Error::InvalidPoint("empty point set".into()));
    }
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }
    let turn = |o: &Point, a: &Point, b: &Point| (*a - *o).cross2(&(*b - *o));
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for p in &pts {
        while hull.len() >= 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    Ok(hull)
}

/// Signed area of a closed polygon (positive when counterclockwise).
pub fn polygon_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross2(&vertices[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

/// Perimeter of a closed polygon.
pub fn polygon_perimeter(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    if n < 2 {
        return 0.0;
    }
    (0..n)
        .map(|i| vertices[i].dist(&vertices[(i + 1) % n]))
        .sum()
}

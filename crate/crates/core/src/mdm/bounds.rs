use std::f64::consts::PI;

use super::check_radius;
use crate::error::{invalid, Error, Result};
use crate::geometry::{convex_hull_2d, polygon_perimeter, Point};
use crate::tube::unit_ball_volume;

/// Length lower bound for any set whose `r`-neighborhood covers a set of
/// measure `measure` in `R^d`.
pub fn lower_bound_volume(measure: f64, r: f64, d: usize) -> Result<f64> {
    check_radius(r)?;
    if !(measure >= 0.0) || !measure.is_finite() {
        return Err(invalid(
            "measure",
            format!("must be non-negative and finite, got {measure}"),
        ));
    }
    if d == 0 {
        return Err(Error::UnsupportedDimension(d));
    }
    let d = d as i32;
    let ball = unit_ball_volume(d)? * r.powi(d);
    let slab = unit_ball_volume(d - 1)? * r.powi(d - 1);
    Ok(((measure - ball) / slab).max(0.0))
}

/// Length lower bound for a set covering the convex polygon `polygon`:
/// `(perimeter − 2πr) / 2`, clamped at zero.
pub fn lower_bound_perimeter(polygon: &[Point], r: f64) -> Result<f64> {
    check_radius(r)?;
    let hull = convex_hull_2d(polygon)?;
    if !is_same_cycle(polygon, &hull) {
        return Err(invalid("polygon", "not a convex polygon in boundary order"));
    }
    Ok(((polygon_perimeter(&hull) - 2.0 * PI * r) / 2.0).max(0.0))
}

/// True when `polygon` lists exactly the hull vertices in cyclic order,
/// ignoring collinear boundary points and the direction of traversal.
fn is_same_cycle(polygon: &[Point], hull: &[Point]) -> bool {
    // drop a repeated closing vertex and collinear boundary points
    let mut poly: Vec<Point> = polygon.to_vec();
    if poly.len() > 1 && poly.first() == poly.last() {
        poly.pop();
    }
    let reduced: Vec<Point> = (0..poly.len())
        .filter(|&i| {
            let n = poly.len();
            let (a, b, c) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
            hull.contains(&b)
                || (b - a).cross2(&(c - b)).abs() > 1e-12 * (b - a).norm() * (c - b).norm()
        })
        .map(|i| poly[i])
        .collect();
    if reduced.len() != hull.len() {
        return false;
    }
    let Some(start) = reduced.iter().position(|p| *p == hull[0]) else {
        return false;
    };
    let n = hull.len();
    let forward = (0..n).all(|k| reduced[(start + k) % n] == hull[k]);
    let backward = (0..n).all(|k| reduced[(start + n - k) % n] == hull[k]);
    forward || backward
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_bound_arithmetic() {
        let b = lower_bound_volume(PI, 0.1, 2).unwrap();
        assert!((b - PI * 0.99 / 0.2).abs() < 1e-12);
        assert!((b - 15.55088).abs() < 1e-5);
        assert_eq!(lower_bound_volume(PI * 0.01, 0.1, 2).unwrap(), 0.0);
        let ball = 4.0 * PI / 3.0;
        let b3 = lower_bound_volume(ball, 0.2, 3).unwrap();
        assert!((b3 - (ball - 4.0 * PI * 0.008 / 3.0) / (PI * 0.04)).abs() < 1e-12);
        assert!((b3 - 33.067).abs() < 1e-3);
        assert!(lower_bound_volume(1.0, 0.0, 2).is_err());
        assert!(lower_bound_volume(-1.0, 0.1, 2).is_err());
    }

    #[test]
    fn perimeter_bound_of_square() {
        let sq = [
            Point::new2(0.0, 0.0),
            Point::new2(2.0, 0.0),
            Point::new2(2.0, 2.0),
            Point::new2(0.0, 2.0),
        ];
        let b = lower_bound_perimeter(&sq, 0.1).unwrap();
        assert!((b - (8.0 - 0.2 * PI) / 2.0).abs() < 1e-12);
        let mut cw = sq.to_vec();
        cw.reverse();
        assert_eq!(lower_bound_perimeter(&cw, 0.1).unwrap(), b);
        assert_eq!(lower_bound_perimeter(&sq, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_convex_polygons() {
        let dart = [
            Point::new2(0.0, 0.0),
            Point::new2(2.0, 0.0),
            Point::new2(1.0, 0.5),
            Point::new2(1.0, 2.0),
        ];
        assert!(lower_bound_perimeter(&dart, 0.1).is_err());
        let crossed = [
            Point::new2(0.0, 0.0),
            Point::new2(2.0, 2.0),
            Point::new2(2.0, 0.0),
            Point::new2(0.0, 2.0),
        ];
        assert!(lower_bound_perimeter(&crossed, 0.1).is_err());
    }

    #[test]
    fn collinear_boundary_points_are_allowed() {
        let sq = [
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(2.0, 0.0),
            Point::new2(2.0, 2.0),
            Point::new2(0.0, 2.0),
            Point::new2(0.0, 0.0),
        ];
        assert!((lower_bound_perimeter(&sq, 0.1).unwrap() - (8.0 - 0.2 * PI) / 2.0).abs() < 1e-12);
    }
}

use nalgebra::{Matrix3, Vector3};

use super::{check_radius, Instance};
use crate::error::{Error, Result};
use crate::geometry::{EmbeddedNetwork, Point};
use crate::steiner::{
    best_over_topologies, check_disjoint, check_points, steiner_tree, Disk, Realization,
    TerminalSpec, Topology, MAX_TERMINALS,
};

/// Smallest closed ball containing `points`, as `(center, radius)`.
///
/// Exhaustive over the balls spanned by 1 to `d + 1` points, so only meant
/// for small sets.
pub fn minimal_enclosing_ball(points: &[Point]) -> Result<(Point, f64)> {
    let dim = check_points(points)?;
    let n = points.len();
    let mut best: Option<(Point, f64)> = None;
    let mut consider = |c: Point, rad: f64| {
        let slack = rad * (1.0 + 1e-12) + 1e-300;
        if best.is_none_or(|(_, b)| rad < b) && points.iter().all(|p| p.dist(&c) <= slack) {
            best = Some((c, rad));
        }
    };
    if n == 1 {
        return Ok((points[0], 0.0));
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = points[i].midpoint(&points[j]);
            consider(c, c.dist(&points[i]));
            for k in j + 1..n {
                if let Some(c) = circumcenter3(&points[i], &points[j], &points[k]) {
                    consider(c, c.dist(&points[i]));
                }
                if dim == 3 {
                    for l in k + 1..n {
                        if let Some(c) =
                            circumcenter4(&points[i], &points[j], &points[k], &points[l])
                        {
                            consider(c, c.dist(&points[i]));
                        }
                    }
                }
            }
        }
    }
    Ok(best.expect("the diametral pair ball always contains the set"))
}

/// Center of the circle through three points, in their plane.
fn circumcenter3(a: &Point, b: &Point, c: &Point) -> Option<Point> {
    let (u, v) = (*b - *a, *c - *a);
    let w = u.cross(&v);
    let w2 = w.norm_sq();
    if w2 <= 1e-24 * u.norm_sq() * v.norm_sq() {
        return None;
    }
    let num = (v * u.norm_sq() - u * v.norm_sq()).cross(&w);
    Some(*a + num.with_dim(a.dim()) * (1.0 / (2.0 * w2)))
}

/// Center of the sphere through four points in space.
fn circumcenter4(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let rows: Vec<Point> = [b, c, d].iter().map(|p| **p - *a).collect();
    let m = Matrix3::from_fn(|i, j| rows[i].coords()[j]);
    let rhs = Vector3::from_fn(|i, _| rows[i].norm_sq() / 2.0);
    let x = m.lu().solve(&rhs)?;
    let p = *a + Point::new3(x[0], x[1], x[2]);
    p.is_finite().then_some(p)
}

/// Shortest connected sets whose closed `r`-neighborhood covers the finite
/// set of `inst`, for 1 to 8 points. Ties are all returned.
///
/// When all disks share a point the answer is that point. Two points are
/// solved in closed form; three or more require pairwise disjoint disks and
/// are solved as Steiner trees with disk-constrained terminals.
pub fn solve_finite_m(inst: &Instance) -> Result<Vec<Realization>> {
    let m = inst.finite_points()?;
    let r = inst.r;
    let n = m.len();
    if !(1..=MAX_TERMINALS).contains(&n) {
        return Err(Error::OutOfRange {
            what: "point count",
            value: n as i64,
            allowed: "1..=8",
        });
    }
    check_points(m)?;
    let disks: Vec<Disk> = m.iter().map(|&center| Disk { center, radius: r }).collect();
    let (center, radius) = minimal_enclosing_ball(m)?;
    if radius <= r {
        let topology = Topology::new(n, 0, (1..n).map(|i| (i - 1, i)).collect())?;
        let mut s = Realization::from_coords(topology, vec![center; n])?;
        s.terminal_constraints = Some(disks);
        return Ok(vec![s]);
    }
    if n == 2 {
        let u = (m[1] - m[0]) * (1.0 / m[0].dist(&m[1]));
        let topology = Topology::new(2, 0, vec![(0, 1)])?;
        let mut s = Realization::from_coords(topology, vec![m[0] + u * r, m[1] - u * r])?;
        s.terminal_constraints = Some(disks);
        return Ok(vec![s]);
    }
    let terminals: Vec<TerminalSpec> = disks.into_iter().map(TerminalSpec::Disk).collect();
    check_disjoint(&terminals)?;
    best_over_topologies(&terminals)
}

/// The Steiner tree of `points` with every terminal edge shortened by `r`.
///
/// Requires a unique, full Steiner tree whose terminal edges are all longer
/// than `r`.
pub fn truncate_full_steiner(points: &[Point], r: f64) -> Result<EmbeddedNetwork> {
    check_radius(r)?;
    let trees = steiner_tree(points)?;
    if trees.len() > 1 {
        return Err(Error::TiedSteinerTrees(trees.len()));
    }
    let st = &trees[0];
    let topo = &st.topology;
    if !topo.is_full() {
        return Err(Error::NonFullSteinerTree);
    }
    let n = topo.n_terminals();
    let q = if n == 2 {
        st.length / 2.0
    } else {
        (0..n)
            .map(|t| st.coords[t].dist(&st.coords[topo.neighbors(t)[0]]))
            .fold(f64::INFINITY, f64::min)
    };
    if r >= q {
        return Err(Error::RadiusTooLarge { r, q });
    }
    let mut coords = st.coords.clone();
    for (t, c) in coords.iter_mut().enumerate().take(n) {
        let w = st.coords[topo.neighbors(t)[0]];
        *c = *c + (w - *c) * (r / c.dist(&w));
    }
    EmbeddedNetwork::new(coords, topo.edges().to_vec())
}

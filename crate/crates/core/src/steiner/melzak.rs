use std::f64::consts::PI;

use super::{Realization, Topology};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Angles at Steiner nodes must be this close to 2π/3 for a reconstruction
/// to count as valid.
const ANGLE_TOL: f64 = 1e-7;

/// One merge step: the Steiner node, the merged points of its two children
/// and the equilateral point replacing them.
#[derive(Clone, Copy)]
struct Merge {
    node: usize,
    a: Point,
    b: Point,
    e: Point,
}

/// Planar realization of a full topology by Melzak's merge/unmerge
/// construction, or `None` if the topology is not realizable for these
/// terminals.
///
/// Both orientations of every equilateral point are tried; a candidate is
/// accepted only if each reconstructed Steiner point lies strictly inside
/// its segment and all Steiner angles equal 2π/3.
pub fn melzak_realize_2d(topology: &Topology, terminals: &[Point]) -> Result<Option<Realization>> {
    if terminals.iter().any(|p| p.dim() != 2) {
        return Err(Error::NonPlanar);
    }
    if !topology.is_full() {
        return Err(Error::InvalidTopology("topology is not full".into()));
    }
    if terminals.len() != topology.n_terminals() {
        return Err(Error::InvalidTopology(format!(
            "{} terminals for a topology on {}",
            terminals.len(),
            topology.n_terminals()
        )));
    }
    let n = topology.n_terminals();
    if n == 2 {
        return Realization::from_coords(topology.clone(), terminals.to_vec()).map(Some);
    }
    // post-order of Steiner nodes with the tree rooted at terminal 0
    let root = topology.neighbors(0)[0];
    let mut order = Vec::new();
    let mut stack = vec![(root, 0usize, false)];
    while let Some((v, parent, done)) = stack.pop() {
        if done {
            order.push((v, parent));
            continue;
        }
        stack.push((v, parent, true));
        for c in topology.neighbors(v) {
            if c != parent && topology.is_steiner(c) {
                stack.push((c, v, false));
            }
        }
    }
    let k = order.len();
    let mut best: Option<Realization> = None;
    for sides in 0u32..(1 << k) {
        if let Some(r) = attempt(topology, terminals, &order, sides) {
            if best.as_ref().is_none_or(|b| r.length < b.length) {
                best = Some(r);
            }
        }
    }
    Ok(best)
}

fn attempt(
    topology: &Topology,
    terminals: &[Point],
    order: &[(usize, usize)],
    sides: u32,
) -> Option<Realization> {
    let n_nodes = topology.n_nodes();
    let mut merged: Vec<Option<Point>> = vec![None; n_nodes];
    for (t, p) in terminals.iter().enumerate() {
        merged[t] = Some(*p);
    }
    let mut merges = Vec::with_capacity(order.len());
    for (bit, &(v, parent)) in order.iter().enumerate() {
        let ch: Vec<usize> = topology
            .neighbors(v)
            .into_iter()
            .filter(|&c| c != parent)
            .collect();
        let (a, b) = (merged[ch[0]]?, merged[ch[1]]?);
        let angle = if sides >> bit & 1 == 0 {
            PI / 3.0
        } else {
            -PI / 3.0
        };
        let e = a + (b - a).rotate2(angle);
        merged[v] = Some(e);
        merges.push(Merge { node: v, a, b, e });
    }
    let mut coords: Vec<Option<Point>> = vec![None; n_nodes];
    for (t, p) in terminals.iter().enumerate() {
        coords[t] = Some(*p);
    }
    // unmerge from the root down
    let mut parent_of = vec![0usize; n_nodes];
    for &(v, parent) in order {
        parent_of[v] = parent;
    }
    for m in merges.iter().rev() {
        let from = coords[parent_of[m.node]]?;
        let center = (m.a + m.b + m.e) * (1.0 / 3.0);
        let rho_sq = m.a.dist_sq(&m.b) / 3.0;
        let d = m.e - from;
        let u = (from.dist_sq(&center) - rho_sq) / d.norm_sq();
        if !(u > 0.0 && u < 1.0) {
            return None;
        }
        let x = from + d * u;
        coords[m.node] = Some(x);
    }
    let coords: Vec<Point> = coords.into_iter().collect::<Option<_>>()?;
    for &(v, _) in order {
        let dirs: Vec<Point> = topology
            .neighbors(v)
            .iter()
            .map(|&w| coords[w] - coords[v])
            .collect();
        if dirs.iter().any(|d| d.norm() == 0.0) {
            return None;
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if (dirs[i].angle_to(&dirs[j]) - 2.0 * PI / 3.0).abs() > ANGLE_TOL {
                    return None;
                }
            }
        }
    }
    Realization::from_coords(topology.clone(), coords).ok()
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_full_topologies, realize_convex, TerminalSpec};
    use super::*;

    #[test]
    fn equilateral_triangle() {
        let pts = vec![
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(0.5, 3f64.sqrt() / 2.0),
        ];
        let t = &enumerate_full_topologies(3).unwrap()[0];
        let r = melzak_realize_2d(t, &pts).unwrap().unwrap();
        assert!((r.length - 3f64.sqrt()).abs() < 1e-12);
        assert!(r.coords[3].dist(&Point::new2(0.5, 3f64.sqrt() / 6.0)) < 1e-12);
        let fixed: Vec<_> = pts.iter().copied().map(TerminalSpec::Fixed).collect();
        let c = realize_convex(t, &fixed).unwrap();
        assert!((c.length - r.length).abs() < 1e-9);
    }

    #[test]
    fn unit_square_topologies() {
        let pts = vec![
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(1.0, 1.0),
            Point::new2(0.0, 1.0),
        ];
        let mut lengths = Vec::new();
        for t in enumerate_full_topologies(4).unwrap() {
            if let Some(r) = melzak_realize_2d(&t, &pts).unwrap() {
                lengths.push(r.length);
            }
        }
        // two realizable topologies of length 1 + √3; the diagonal pairing is not
        assert_eq!(lengths.len(), 2);
        for l in lengths {
            assert!((l - (1.0 + 3f64.sqrt())).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let t = Topology::new(3, 0, vec![(0, 1), (1, 2)]).unwrap();
        let pts = [
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(2.0, 1.0),
        ];
        assert!(melzak_realize_2d(&t, &pts).is_err());
        let full = &enumerate_full_topologies(3).unwrap()[0];
        let space = [
            Point::new3(0.0, 0.0, 0.0),
            Point::new3(1.0, 0.0, 0.0),
            Point::new3(0.0, 1.0, 0.0),
        ];
        assert_eq!(melzak_realize_2d(full, &space), Err(Error::NonPlanar));
    }
}

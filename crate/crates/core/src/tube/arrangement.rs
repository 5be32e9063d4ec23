//! Exact boundary of a planar tube `B_r(S)` as an arrangement of offset
//! segments and vertex circles.

use std::f64::consts::TAU;

use serde::Serialize;

use super::mc::check_radius;
use crate::error::{Error, Result};
use crate::geometry::{Aabb, EmbeddedNetwork, Point, SegmentIndex};

/// Relative band below `r` inside which a boundary candidate still counts as
/// lying on the tube boundary.
const ON_BOUNDARY: f64 = 1e-9;
const SAME_PARAM: f64 = 1e-14;

/// One piece of the tube boundary, oriented with the tube on its left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryPiece {
    Segment {
        from: Point,
        to: Point,
    },
    /// Counterclockwise arc from angle `start` to `end` (`end > start`).
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl BoundaryPiece {
    pub fn length(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => from.dist(&to),
            BoundaryPiece::Arc {
                radius, start, end, ..
            } => radius * (end - start),
        }
    }

    /// Contribution to `∮ x dy − y dx`.
    fn green(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => from.cross2(&to),
            BoundaryPiece::Arc {
                center,
                radius: r,
                start,
                end,
            } => {
                r * center.x() * (end.sin() - start.sin())
                    - r * center.y() * (end.cos() - start.cos())
                    + r * r * (end - start)
            }
        }
    }

    pub fn midpoint(&self) -> Point {
        match *self {
            BoundaryPiece::Segment { from, to } => from.midpoint(&to),
            BoundaryPiece::Arc {
                center,
                radius,
                start,
                end,
            } => on_circle(center, radius, 0.5 * (start + end)),
        }
    }
}

/// The boundary of `B_r(S)` for a planar network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeBoundary {
    pub radius: f64,
    pub pieces: Vec<BoundaryPiece>,
}

impl TubeBoundary {
    pub fn length(&self) -> f64 {
        self.pieces.iter().map(BoundaryPiece::length).sum()
    }

    /// Area enclosed by the boundary (Green's formula; holes count negatively).
    pub fn area(&self) -> f64 {
        0.5 * self.pieces.iter().map(BoundaryPiece::green).sum::<f64>()
    }
}

fn on_circle(center: Point, r: f64, angle: f64) -> Point {
    center + Point::new2(r * angle.cos(), r * angle.sin())
}

fn norm_angle(a: f64) -> f64 {
    let a = a.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

#[derive(Debug, Clone)]
enum Candidate {
    /// `ends` are the candidate indices of the edge's end circles, which the
    /// offset segment touches tangentially at its own endpoints.
    Seg {
        a: Point,
        b: Point,
        ends: [usize; 2],
        splits: Vec<f64>,
    },
    Circle {
        c: Point,
        splits: Vec<f64>,
    },
}

impl Candidate {
    fn bounds(&self, r: f64) -> Aabb {
        match self {
            Candidate::Seg { a, b, .. } => Aabb::from_points([a, b], 2),
            Candidate::Circle { c, .. } => Aabb::from_points([c], 2).inflate(r),
        }
    }
}

/// Computes the boundary of the closed `r`-neighbourhood of a planar network.
pub fn tube_boundary_2d(network: &EmbeddedNetwork, r: f64) -> Result<TubeBoundary> {
    if network.dim() != 2 {
        return Err(Error::NonPlanar);
    }
    check_radius(r)?;
    let nodes = network.nodes();
    let mut cands = Vec::with_capacity(2 * network.edges().len() + nodes.len());
    let mut circle_of = vec![usize::MAX; nodes.len()];
    for (i, c) in nodes.iter().enumerate() {
        if let Some(j) = (0..i).find(|&j| nodes[j] == *c) {
            circle_of[i] = circle_of[j];
            continue;
        }
        circle_of[i] = cands.len();
        cands.push(Candidate::Circle {
            c: *c,
            splits: Vec::new(),
        });
    }
    for e in 0..network.edges().len() {
        let (a, b) = network.edge_points(e);
        let n = (b - a)
            .normalized()
            .expect("edges have positive length")
            .perp2();
        let off = n * r;
        let (i, j) = network.edges()[e];
        let ends = [circle_of[i], circle_of[j]];
        cands.push(Candidate::Seg {
            a: a - off,
            b: b - off,
            ends,
            splits: Vec::new(),
        });
        cands.push(Candidate::Seg {
            a: b + off,
            b: a + off,
            ends,
            splits: Vec::new(),
        });
        // tangency points of the offset lines with the end circles
        for node in [i, j] {
            if let Candidate::Circle { splits, .. } = &mut cands[circle_of[node]] {
                splits.push(norm_angle(n.y().atan2(n.x())));
                splits.push(norm_angle((-n.y()).atan2(-n.x())));
            }
        }
    }

    split_pairs(&mut cands, r);

    let index = network.segment_index();
    let mut pieces = Vec::new();
    for cand in &cands {
        for piece in sub_pieces(cand, r) {
            if is_on_boundary(&index, &piece, r) {
                pieces.push(piece);
            }
        }
    }
    Ok(TubeBoundary {
        radius: r,
        pieces: dedup_segments(pieces),
    })
}

/// Length of the boundary of `B_r(S)`.
pub fn boundary_length_2d(network: &EmbeddedNetwork, r: f64) -> Result<f64> {
    Ok(tube_boundary_2d(network, r)?.length())
}

/// Exact area of `B_r(S)` in the plane.
pub fn tube_area_2d(network: &EmbeddedNetwork, r: f64) -> Result<f64> {
    Ok(tube_boundary_2d(network, r)?.area())
}

fn is_on_boundary(index: &SegmentIndex, piece: &BoundaryPiece, r: f64) -> bool {
    if piece.length() <= 0.0 {
        return false;
    }
    !index.any_closer(&piece.midpoint(), r * (1.0 - ON_BOUNDARY))
}

fn split_pairs(cands: &mut [Candidate], r: f64) {
    let bounds: Vec<Aabb> = cands.iter().map(|c| c.bounds(r)).collect();
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&i, &j| bounds[i].min.x().total_cmp(&bounds[j].min.x()));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if bounds[j].min.x() > bounds[i].max.x() {
                break;
            }
            if bounds[j].min.y() > bounds[i].max.y() || bounds[i].min.y() > bounds[j].max.y() {
                continue;
            }
            if touches_own_circle(&cands[i], j) || touches_own_circle(&cands[j], i) {
                continue;
            }
            let (pi, pj) = intersect(&cands[i], &cands[j], r);
            push_splits(&mut cands[i], pi);
            push_splits(&mut cands[j], pj);
        }
    }
}

fn touches_own_circle(c: &Candidate, circle: usize) -> bool {
    matches!(c, Candidate::Seg { ends, .. } if ends.contains(&circle))
}

fn push_splits(c: &mut Candidate, params: Vec<f64>) {
    match c {
        Candidate::Seg { splits, .. } | Candidate::Circle { splits, .. } => splits.extend(params),
    }
}

/// Split parameters on each of the two candidates (segment parameter in
/// `(0, 1)` or circle angle).
fn intersect(p: &Candidate, q: &Candidate, r: f64) -> (Vec<f64>, Vec<f64>) {
    match (p, q) {
        (Candidate::Seg { a, b, .. }, Candidate::Seg { a: c, b: d, .. }) => seg_seg(*a, *b, *c, *d),
        (Candidate::Seg { a, b, .. }, Candidate::Circle { c, .. }) => seg_circle(*a, *b, *c, r),
        (Candidate::Circle { c, .. }, Candidate::Seg { a, b, .. }) => {
            let (s, t) = seg_circle(*a, *b, *c, r);
            (t, s)
        }
        (Candidate::Circle { c: c1, .. }, Candidate::Circle { c: c2, .. }) => {
            circle_circle(*c1, *c2, r)
        }
    }
}

fn interior(t: f64) -> bool {
    t > SAME_PARAM && t < 1.0 - SAME_PARAM
}

fn seg_seg(a: Point, b: Point, c: Point, d: Point) -> (Vec<f64>, Vec<f64>) {
    let u = b - a;
    let v = d - c;
    let w = c - a;
    let denom = u.cross2(&v);
    let scale = u.norm() * v.norm();
    if denom.abs() <= 1e-14 * scale {
        // parallel: split collinear overlaps at the other segment's endpoints
        if w.cross2(&u).abs() > 1e-12 * u.norm() * (1.0 + w.norm()) {
            return (Vec::new(), Vec::new());
        }
        let proj = |p: Point, o: Point, dir: Point| (p - o).dot(&dir) / dir.norm_sq();
        let s: Vec<f64> = [c, d]
            .iter()
            .map(|&p| proj(p, a, u))
            .filter(|&t| interior(t))
            .collect();
        let t: Vec<f64> = [a, b]
            .iter()
            .map(|&p| proj(p, c, v))
            .filter(|&t| interior(t))
            .collect();
        return (s, t);
    }
    let s = w.cross2(&v) / denom;
    let t = w.cross2(&u) / denom;
    let on_s = (-SAME_PARAM..=1.0 + SAME_PARAM).contains(&s);
    let on_t = (-SAME_PARAM..=1.0 + SAME_PARAM).contains(&t);
    if on_s && on_t {
        (
            [s].into_iter().filter(|&x| interior(x)).collect(),
            [t].into_iter().filter(|&x| interior(x)).collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    }
}

fn seg_circle(a: Point, b: Point, c: Point, r: f64) -> (Vec<f64>, Vec<f64>) {
    let d = b - a;
    let f = a - c;
    let qa = d.norm_sq();
    let qb = 2.0 * f.dot(&d);
    let qc = f.norm_sq() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return (Vec::new(), Vec::new());
    }
    let sq = disc.sqrt();
    // numerically stable pair of roots
    let q = -0.5 * (qb + qb.signum() * sq);
    let roots = if q == 0.0 {
        vec![0.0]
    } else {
        vec![q / qa, qc / q]
    };
    let mut ts = Vec::new();
    let mut angles = Vec::new();
    for t in roots {
        if (-SAME_PARAM..=1.0 + SAME_PARAM).contains(&t) {
            let p = a + d * t;
            let rel = p - c;
            angles.push(norm_angle(rel.y().atan2(rel.x())));
            if interior(t) {
                ts.push(t);
            }
        }
    }
    (ts, angles)
}

fn circle_circle(c1: Point, c2: Point, r: f64) -> (Vec<f64>, Vec<f64>) {
    let dv = c2 - c1;
    let d = dv.norm();
    if d == 0.0 || d > 2.0 * r {
        return (Vec::new(), Vec::new());
    }
    let base = dv.y().atan2(dv.x());
    let half = (d / (2.0 * r)).clamp(-1.0, 1.0).acos();
    let on1 = vec![norm_angle(base + half), norm_angle(base - half)];
    let back = base + std::f64::consts::PI;
    let on2 = vec![norm_angle(back - half), norm_angle(back + half)];
    (on1, on2)
}

fn sub_pieces(cand: &Candidate, r: f64) -> Vec<BoundaryPiece> {
    match cand {
        Candidate::Seg { a, b, splits, .. } => {
            let mut ts = splits.clone();
            ts.push(0.0);
            ts.push(1.0);
            ts.sort_by(f64::total_cmp);
            ts.dedup_by(|x, y| (*x - *y).abs() <= SAME_PARAM);
            ts.windows(2)
                .map(|w| BoundaryPiece::Segment {
                    from: if w[0] == 0.0 { *a } else { a.lerp(b, w[0]) },
                    to: if w[1] == 1.0 { *b } else { a.lerp(b, w[1]) },
                })
                .collect()
        }
        Candidate::Circle { c, splits } => {
            let mut angles = splits.clone();
            angles.sort_by(f64::total_cmp);
            angles.dedup_by(|x, y| (*x - *y).abs() <= SAME_PARAM);
            if angles.len() > 1 && angles[0] + TAU - angles[angles.len() - 1] <= SAME_PARAM {
                angles.pop();
            }
            if angles.is_empty() {
                return vec![BoundaryPiece::Arc {
                    center: *c,
                    radius: r,
                    start: 0.0,
                    end: TAU,
                }];
            }
            let n = angles.len();
            (0..n)
                .map(|i| {
                    let start = angles[i];
                    let end = if i + 1 < n {
                        angles[i + 1]
                    } else {
                        angles[0] + TAU
                    };
                    BoundaryPiece::Arc {
                        center: *c,
                        radius: r,
                        start,
                        end,
                    }
                })
                .collect()
        }
    }
}

/// Drops duplicated boundary segments from overlapping collinear edges;
/// oppositely oriented duplicates have tube on both sides and are removed.
fn dedup_segments(pieces: Vec<BoundaryPiece>) -> Vec<BoundaryPiece> {
    let close = |p: &Point, q: &Point| p.dist(q) <= 1e-12 * (1.0 + p.norm());
    let mut keep = vec![true; pieces.len()];
    for i in 0..pieces.len() {
        let BoundaryPiece::Segment { from: a, to: b } = pieces[i] else {
            continue;
        };
        for j in i + 1..pieces.len() {
            if !keep[j] {
                continue;
            }
            let BoundaryPiece::Segment { from: c, to: d } = pieces[j] else {
                continue;
            };
            if close(&a, &c) && close(&b, &d) {
                keep[j] = false;
            } else if close(&a, &d) && close(&b, &c) {
                keep[i] = false;
                keep[j] = false;
            }
        }
    }
    pieces
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn stadium() {
        let seg = EmbeddedNetwork::segment(Point::new2(0.0, 0.0), Point::new2(2.0, 1.0)).unwrap();
        let b = tube_boundary_2d(&seg, 0.3).unwrap();
        let l = 5f64.sqrt();
        assert!((b.length() - (2.0 * l + 2.0 * PI * 0.3)).abs() < 1e-12);
        assert!((b.area() - (2.0 * l * 0.3 + PI * 0.09)).abs() < 1e-12);
    }

    #[test]
    fn single_point() {
        let p = EmbeddedNetwork::point(Point::new2(1.0, 2.0));
        assert!((boundary_length_2d(&p, 0.5).unwrap() - PI).abs() < 1e-15);
        assert!((tube_area_2d(&p, 0.5).unwrap() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn regular_tripod() {
        let c = Point::new2(0.0, 0.0);
        let mut nodes = vec![c];
        for k in 0..3 {
            let a = 2.0 * PI * k as f64 / 3.0 + 0.3;
            nodes.push(Point::new2(a.cos(), a.sin()));
        }
        let net = EmbeddedNetwork::new(nodes, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = 0.1;
        let expected = 6.0 - 6.0 * r / 3f64.sqrt() + 3.0 * PI * r;
        assert!((boundary_length_2d(&net, r).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn right_angle_area() {
        let net = EmbeddedNetwork::path(vec![
            Point::new2(1.0, 0.0),
            Point::new2(0.0, 0.0),
            Point::new2(0.0, 1.0),
        ])
        .unwrap();
        let r = 0.3;
        // two stadiums minus their overlap at the corner: a square of side r
        // plus three quarter disks
        let expected = 2.0 * (2.0 * r + PI * r * r) - (r * r + 0.75 * PI * r * r);
        assert!((tube_area_2d(&net, r).unwrap() - expected).abs() < 1e-12);
        assert!(tube_area_2d(&net, r).unwrap() < 1.2 + 0.09 * PI);
    }

    #[test]
    fn rejects_space_networks() {
        let seg = EmbeddedNetwork::segment(Point::new3(0.0, 0.0, 0.0), Point::new3(1.0, 0.0, 0.0))
            .unwrap();
        assert_eq!(boundary_length_2d(&seg, 0.1), Err(Error::NonPlanar));
    }
}

//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use mdmkit::geometry::{dist_to_network, EmbeddedNetwork, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p2(x: f64, y: f64) -> Point {
    Point::new2(x, y)
}

/// Distance from `(x, y)` to the segment `a b`, computed from scratch.
pub fn seg_dist(x: f64, y: f64, a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((x - a[0]) * dx + (y - a[1]) * dy) / l2).clamp(0.0, 1.0)
    };
    let (fx, fy) = (a[0] + t * dx, a[1] + t * dy);
    ((x - fx).powi(2) + (y - fy).powi(2)).sqrt()
}

fn planar_segments(net: &EmbeddedNetwork) -> Vec<([f64; 2], [f64; 2])> {
    if net.edges().is_empty() {
        return net
            .nodes()
            .iter()
            .map(|p| ([p.x(), p.y()], [p.x(), p.y()]))
            .collect();
    }
    net.segments()
        .into_iter()
        .map(|(a, b)| ([a.x(), a.y()], [b.x(), b.y()]))
        .collect()
}

pub fn net_dist(x: f64, y: f64, segs: &[([f64; 2], [f64; 2])]) -> f64 {
    segs.iter()
        .map(|(a, b)| seg_dist(x, y, *a, *b))
        .fold(f64::INFINITY, f64::min)
}

/// Distance from `p` to the network by dense sampling of every edge.
pub fn sampled_dist(p: &Point, net: &EmbeddedNetwork, per_edge: usize) -> f64 {
    let mut best = net
        .nodes()
        .iter()
        .map(|q| p.dist(q))
        .fold(f64::INFINITY, f64::min);
    for (a, b) in net.segments() {
        for i in 0..=per_edge {
            best = best.min(p.dist(&a.lerp(&b, i as f64 / per_edge as f64)));
        }
    }
    best
}

/// Area of the closed `r`-neighborhood of a planar network by counting grid
/// cell centers of side `h`.
pub fn grid_area(net: &EmbeddedNetwork, r: f64, h: f64) -> f64 {
    let segs = planar_segments(net);
    let (x0, y0, x1, y1) = bbox(&segs, r);
    let (nx, ny) = (
        ((x1 - x0) / h).ceil() as usize,
        ((y1 - y0) / h).ceil() as usize,
    );
    let mut count = 0usize;
    for i in 0..nx {
        let x = x0 + (i as f64 + 0.5) * h;
        for j in 0..ny {
            let y = y0 + (j as f64 + 0.5) * h;
            if net_dist(x, y, &segs) <= r {
                count += 1;
            }
        }
    }
    count as f64 * h * h
}

/// Length of the boundary of the `r`-neighborhood by marching squares on the
/// field `dist − r`.
pub fn marching_squares_perimeter(net: &EmbeddedNetwork, r: f64, h: f64) -> f64 {
    let segs = planar_segments(net);
    let (x0, y0, x1, y1) = bbox(&segs, r + 2.0 * h);
    let (nx, ny) = (
        ((x1 - x0) / h).ceil() as usize + 1,
        ((y1 - y0) / h).ceil() as usize + 1,
    );
    let f: Vec<Vec<f64>> = (0..nx)
        .map(|i| {
            (0..ny)
                .map(|j| net_dist(x0 + i as f64 * h, y0 + j as f64 * h, &segs) - r)
                .collect()
        })
        .collect();
    let mut total = 0.0;
    for i in 0..nx - 1 {
        for j in 0..ny - 1 {
            // corners counterclockwise from (i, j)
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let mut hits = Vec::with_capacity(4);
            for k in 0..4 {
                let (a, b) = (c[k], c[(k + 1) % 4]);
                let (fa, fb) = (f[a.0][a.1], f[b.0][b.1]);
                if (fa < 0.0) != (fb < 0.0) {
                    let t = fa / (fa - fb);
                    hits.push((
                        a.0 as f64 + t * (b.0 as f64 - a.0 as f64),
                        a.1 as f64 + t * (b.1 as f64 - a.1 as f64),
                    ));
                }
            }
            for pair in hits.chunks_exact(2) {
                total +=
                    h * ((pair[0].0 - pair[1].0).powi(2) + (pair[0].1 - pair[1].1).powi(2)).sqrt();
            }
        }
    }
    total
}

fn bbox(segs: &[([f64; 2], [f64; 2])], pad: f64) -> (f64, f64, f64, f64) {
    let mut b = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for (p, q) in segs {
        for v in [p, q] {
            b.0 = b.0.min(v[0]);
            b.1 = b.1.min(v[1]);
            b.2 = b.2.max(v[0]);
            b.3 = b.3.max(v[1]);
        }
    }
    (b.0 - pad, b.1 - pad, b.2 + pad, b.3 + pad)
}

/// Random tree in the unit square with `edges` edges: each new node hangs off
/// a uniformly chosen earlier node.
pub fn random_tree(rng: &mut impl Rng, edges: usize) -> EmbeddedNetwork {
    loop {
        let nodes: Vec<Point> = (0..=edges)
            .map(|_| p2(rng.random(), rng.random()))
            .collect();
        let e: Vec<(usize, usize)> = (1..=edges).map(|i| (rng.random_range(0..i), i)).collect();
        if let Ok(n) = EmbeddedNetwork::new(nodes, e) {
            return n;
        }
    }
}

pub fn random_points(rng: &mut impl Rng, n: usize) -> Vec<Point> {
    (0..n).map(|_| p2(rng.random(), rng.random())).collect()
}

pub fn unit_square() -> Vec<Point> {
    vec![p2(0.0, 0.0), p2(1.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)]
}

pub fn triangle() -> Vec<Point> {
    vec![p2(0.0, 0.0), p2(1.0, 0.0), p2(0.5, 3f64.sqrt() / 2.0)]
}

pub fn right_angle() -> Vec<Point> {
    vec![p2(1.0, 0.0), p2(0.0, 0.0), p2(0.0, 1.0)]
}

/// Hausdorff distance between two networks as point sets, sampling each edge
/// at `per_edge` intervals.
pub fn network_hausdorff(a: &EmbeddedNetwork, b: &EmbeddedNetwork, per_edge: usize) -> f64 {
    let one = |x: &EmbeddedNetwork, y: &EmbeddedNetwork| {
        let mut worst = x
            .nodes()
            .iter()
            .map(|p| dist_to_network(p, y).distance)
            .fold(0.0, f64::max);
        for (p, q) in x.segments() {
            for k in 1..per_edge {
                worst =
                    worst.max(dist_to_network(&p.lerp(&q, k as f64 / per_edge as f64), y).distance);
            }
        }
        worst
    };
    one(a, b).max(one(b, a))
}

use super::point::{Aabb, Point};
use super::segment_foot;

const LEAF_SIZE: usize = 4;

// Box pruning compares squared distances; widen slightly so rounding never
// discards a segment at exactly the query radius.
fn prune_sq(radius: f64) -> f64 {
    let r = radius * (1.0 + 8.0 * f64::EPSILON);
    r * r
}

#[derive(Debug, Clone)]
struct Node {
    bounds: Aabb,
    // Leaves: range into `order`. Inner nodes: children indices.
    start: usize,
    count: usize,
    left: usize,
    right: usize,
}

/// Bounding-volume hierarchy over line segments for nearest-segment and
/// fixed-radius queries. Degenerate segments behave as points.
#[derive(Debug, Clone)]
pub struct SegmentIndex {
    segments: Vec<(Point, Point)>,
    order: Vec<usize>,
    nodes: Vec<Node>,
    dim: usize,
}

impl SegmentIndex {
    pub fn new(segments: Vec<(Point, Point)>) -> Self {
        let dim = segments
            .iter()
            .map(|(a, b)| a.dim().max(b.dim()))
            .max()
            .unwrap_or(2);
        let mut index = SegmentIndex {
            order: (0..segments.len()).collect(),
            segments,
            nodes: Vec::new(),
            dim,
        };
        if !index.segments.is_empty() {
            let n = index.segments.len();
            index.build(0, n);
        }
        index
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segment(&self, id: usize) -> (Point, Point) {
        self.segments[id]
    }

    fn seg_bounds(&self, id: usize) -> Aabb {
        let (a, b) = &self.segments[id];
        Aabb::from_points([a, b], self.dim)
    }

    fn build(&mut self, start: usize, count: usize) -> usize {
        let mut bounds = Aabb::empty(self.dim);
        let mut centroid_bounds = Aabb::empty(self.dim);
        for &id in &self.order[start..start + count] {
            bounds.merge(&self.seg_bounds(id));
            let (a, b) = self.segments[id];
            centroid_bounds.include(&a.midpoint(&b));
        }
        let node_id = self.nodes.len();
        self.nodes.push(Node {
            bounds,
            start,
            count,
            left: usize::MAX,
            right: usize::MAX,
        });
        if count <= LEAF_SIZE {
            return node_id;
        }
        let axis = (0..self.dim)
            .max_by(|&a, &b| {
                centroid_bounds
                    .extent(a)
                    .total_cmp(&centroid_bounds.extent(b))
            })
            .unwrap_or(0);
        let mid = count / 2;
        let segments = &self.segments;
        self.order[start..start + count].select_nth_unstable_by(mid, |&i, &j| {
            let ci = segments[i].0.coord(axis) + segments[i].1.coord(axis);
            let cj = segments[j].0.coord(axis) + segments[j].1.coord(axis);
            ci.total_cmp(&cj)
        });
        let left = self.build(start, mid);
        let right = self.build(start + mid, count - mid);
        let node = &mut self.nodes[node_id];
        node.left = left;
        node.right = right;
        node.count = 0;
        node_id
    }

    /// Nearest segment: `(distance, segment id, foot parameter)`.
    pub fn nearest(&self, p: &Point) -> Option<(f64, usize, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (f64::INFINITY, usize::MAX, 0.0);
        let mut best_sq = f64::INFINITY;
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni];
            if node.bounds.dist_sq(p) >= best_sq {
                continue;
            }
            if node.left == usize::MAX {
                for &id in &self.order[node.start..node.start + node.count] {
                    let (a, b) = &self.segments[id];
                    let (d, t) = segment_foot(p, a, b);
                    if d < best.0 {
                        best = (d, id, t);
                        best_sq = prune_sq(d);
                    }
                }
            } else {
                let dl = self.nodes[node.left].bounds.dist_sq(p);
                let dr = self.nodes[node.right].bounds.dist_sq(p);
                // visit the closer child first
                if dl <= dr {
                    stack.push(node.right);
                    stack.push(node.left);
                } else {
                    stack.push(node.left);
                    stack.push(node.right);
                }
            }
        }
        Some(best)
    }

    /// Calls `f(id, distance, param)` for every segment within `radius` (inclusive).
    pub fn for_each_within(&self, p: &Point, radius: f64, mut f: impl FnMut(usize, f64, f64)) {
        if self.nodes.is_empty() {
            return;
        }
        let r_sq = prune_sq(radius);
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni];
            if node.bounds.dist_sq(p) > r_sq {
                continue;
            }
            if node.left == usize::MAX {
                for &id in &self.order[node.start..node.start + node.count] {
                    let (a, b) = &self.segments[id];
                    let (d, t) = segment_foot(p, a, b);
                    if d <= radius {
                        f(id, d, t);
                    }
                }
            } else {
                stack.push(node.left);
                stack.push(node.right);
            }
        }
    }

    /// Whether some segment lies within `radius` of `p`.
    pub fn any_within(&self, p: &Point, radius: f64) -> bool {
        self.any_where(p, radius, |d| d <= radius)
    }

    /// Whether some segment lies strictly closer than `radius`.
    pub fn any_closer(&self, p: &Point, radius: f64) -> bool {
        self.any_where(p, radius, |d| d < radius)
    }

    fn any_where(&self, p: &Point, radius: f64, accept: impl Fn(f64) -> bool) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let r_sq = prune_sq(radius);
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni];
            if node.bounds.dist_sq(p) > r_sq {
                continue;
            }
            if node.left == usize::MAX {
                for &id in &self.order[node.start..node.start + node.count] {
                    let (a, b) = &self.segments[id];
                    if accept(segment_foot(p, a, b).0) {
                        return true;
                    }
                }
            } else {
                stack.push(node.left);
                stack.push(node.right);
            }
        }
        false
    }
}

use serde::{Deserialize, Serialize};

use super::bvh::SegmentIndex;
use super::point::{Aabb, Point};
use super::{check_dim, segment_foot, TieTolerance};
use crate::error::{Error, Result};

/// A finite graph embedded in R^d with straight edges.
///
/// Curves are the special case where every node has degree at most two. A
/// network with a single node and no edges represents a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNetwork", into = "RawNetwork")]
pub struct EmbeddedNetwork {
    nodes: Vec<Point>,
    edges: Vec<(usize, usize)>,
    dim: usize,
    tree: bool,
}

#[derive(Serialize, Deserialize)]
struct RawNetwork {
    nodes: Vec<Point>,
    #[serde(default)]
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawNetwork> for EmbeddedNetwork {
    type Error = Error;
    fn try_from(raw: RawNetwork) -> Result<Self> {
        EmbeddedNetwork::new(
            raw.nodes,
            raw.edges.into_iter().map(|[i, j]| (i, j)).collect(),
        )
    }
}

impl From<EmbeddedNetwork> for RawNetwork {
    fn from(n: EmbeddedNetwork) -> Self {
        RawNetwork {
            nodes: n.nodes,
            edges: n.edges.into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl EmbeddedNetwork {
    pub fn new(nodes: Vec<Point>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let first = nodes.first().ok_or(Error::EmptyNetwork)?;
        let dim = first.dim();
        check_dim(dim)?;
        if let Some(p) = nodes.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if nodes.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidNetwork("non-finite coordinate".into()));
        }
        for &(i, j) in &edges {
            if i >= nodes.len() || j >= nodes.len() {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({i}, {j}) has an invalid endpoint"
                )));
            }
            if nodes[i] == nodes[j] {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({i}, {j}) has zero length"
                )));
            }
        }
        let tree = is_tree(nodes.len(), &edges);
        Ok(EmbeddedNetwork {
            nodes,
            edges,
            dim,
            tree,
        })
    }

    pub fn point(p: Point) -> Self {
        EmbeddedNetwork {
            dim: p.dim(),
            nodes: vec![p],
            edges: Vec::new(),
            tree: true,
        }
    }

    /// Open polyline through `vertices`.
    pub fn path(vertices: Vec<Point>) -> Result<Self> {
        let edges = (1..vertices.len()).map(|i| (i - 1, i)).collect();
        EmbeddedNetwork::new(vertices, edges)
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        EmbeddedNetwork::new(vec![a, b], vec![(0, 1)])
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the graph is connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.tree
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self.nodes.len(), &self.edges) == 1
    }

    pub fn has_cycle(&self) -> bool {
        // a forest has exactly V - C edges
        self.edges.len() + connected_components(self.nodes.len(), &self.edges) > self.nodes.len()
    }

    pub fn edge_points(&self, e: usize) -> (Point, Point) {
        let (i, j) = self.edges[e];
        (self.nodes[i], self.nodes[j])
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let (a, b) = self.edge_points(e);
        a.dist(&b)
    }

    /// Total length (one-dimensional measure).
    pub fn length(&self) -> f64 {
        (0..self.edges.len()).map(|e| self.edge_length(e)).sum()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j)| i == node || j == node)
            .count()
    }

    /// Neighbour node indices of `node`, in edge order.
    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(i, j)| {
                if i == node {
                    Some(j)
                } else if j == node {
                    Some(i)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn bounds(&self) -> Aabb {
        Aabb::from_points(&self.nodes, self.dim)
    }

    /// Segments for spatial queries; a point network yields one degenerate segment.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        if self.edges.is_empty() {
            self.nodes.iter().map(|p| (*p, *p)).collect()
        } else {
            (0..self.edges.len()).map(|e| self.edge_points(e)).collect()
        }
    }

    pub fn segment_index(&self) -> SegmentIndex {
        SegmentIndex::new(self.segments())
    }
}

fn connected_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

fn is_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    n > 0 && edges.len() + 1 == n && connected_components(n, edges) == 1
}

/// A nearest point of a network: edge index (`None` for an isolated node),
/// foot parameter along the edge and the foot itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Foot {
    pub edge: Option<usize>,
    pub param: f64,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkDistance {
    pub distance: f64,
    /// All distinct nearest points within the tie tolerance.
    pub nearest: Vec<Foot>,
}

pub fn dist_to_network(p: &Point, network: &EmbeddedNetwork) -> NetworkDistance {
    dist_to_network_with(p, network, &TieTolerance::default())
}

/// Exact distance from `p` to the network together with every foot whose
/// distance is within `tol.distance` of the minimum. Feet closer than
/// `tol.separation` to an already listed foot are merged (this removes the
/// duplicate foot at a shared vertex).
pub fn dist_to_network_with(
    p: &Point,
    network: &EmbeddedNetwork,
    tol: &TieTolerance,
) -> NetworkDistance {
    if network.edges.is_empty() {
        let mut best = NetworkDistance {
            distance: f64::INFINITY,
            nearest: Vec::new(),
        };
        let dists: Vec<f64> = network.nodes.iter().map(|q| p.dist(q)).collect();
        best.distance = dists.iter().copied().fold(f64::INFINITY, f64::min);
        for (q, d) in network.nodes.iter().zip(&dists) {
            if *d <= best.distance + tol.distance {
                push_distinct(
                    &mut best.nearest,
                    Foot {
                        edge: None,
                        param: 0.0,
                        point: *q,
                    },
                    tol.separation,
                );
            }
        }
        return best;
    }
    let cands: Vec<(f64, Foot)> = (0..network.edges.len())
        .map(|e| {
            let (a, b) = network.edge_points(e);
            let (d, t) = segment_foot(p, &a, &b);
            (
                d,
                Foot {
                    edge: Some(e),
                    param: t,
                    point: a.lerp(&b, t),
                },
            )
        })
        .collect();
    let distance = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let mut nearest = Vec::new();
    for (d, foot) in cands {
        if d <= distance + tol.distance {
            push_distinct(&mut nearest, foot, tol.separation);
        }
    }
    NetworkDistance { distance, nearest }
}

fn push_distinct(list: &mut Vec<Foot>, foot: Foot, separation: f64) {
    if list.iter().all(|f| f.point.dist(&foot.point) > separation) {
        list.push(foot);
    }
}

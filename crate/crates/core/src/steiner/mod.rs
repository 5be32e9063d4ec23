//! Steiner topologies, planar Melzak realization, convex realization with
//! fixed or disk-constrained terminals, exhaustive Steiner-tree solving for
//! small terminal sets and local-minimality checks.

mod melzak;
mod optimize;
mod topology;
mod validate;

pub use melzak::melzak_realize_2d;
pub use topology::{enumerate_full_topologies, Topology, MAX_TERMINALS};
pub(crate) use validate::{angle_violations, incident_directions};
pub use validate::{locally_minimal_violations, Violation};

pub(crate) use topology::check_terminal_count;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dim, EmbeddedNetwork, Point};

/// Edges shorter than this fraction of the instance diameter are collapsed.
pub const COLLAPSE_RTOL: f64 = 1e-8;
/// Relative length window within which optima count as tied.
pub const TIE_RTOL: f64 = 1e-9;

/// Closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

/// Where a terminal may sit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TerminalSpec {
    Fixed(Point),
    Disk(Disk),
}

impl TerminalSpec {
    pub fn center(&self) -> Point {
        match self {
            TerminalSpec::Fixed(p) => *p,
            TerminalSpec::Disk(d) => d.center,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            TerminalSpec::Fixed(_) => 0.0,
            TerminalSpec::Disk(d) => d.radius,
        }
    }
}

/// A topology embedded with coordinates for every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    #[serde(flatten)]
    pub topology: Topology,
    pub coords: Vec<Point>,
    pub length: f64,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal_constraints: Option<Vec<Disk>>,
}

impl Realization {
    /// Builds a realization from explicit coordinates, computing the length.
    pub fn from_coords(topology: Topology, coords: Vec<Point>) -> Result<Self> {
        if coords.len() != topology.n_nodes() {
            return Err(Error::InvalidTopology(format!(
                "{} coordinates for {} nodes",
                coords.len(),
                topology.n_nodes()
            )));
        }
        let length = tree_length(topology.edges(), &coords);
        Ok(Realization {
            topology,
            coords,
            length,
            converged: true,
            terminal_constraints: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords[0].dim()
    }

    /// Network view; zero-length edges (coincident nodes) are merged.
    pub fn to_network(&self) -> EmbeddedNetwork {
        if self.coords.len() == 1 {
            return EmbeddedNetwork::point(self.coords[0]);
        }
        let mut nodes: Vec<Point> = Vec::new();
        let mut map = Vec::with_capacity(self.coords.len());
        for p in &self.coords {
            match nodes.iter().position(|q| q == p) {
                Some(i) => map.push(i),
                None => {
                    map.push(nodes.len());
                    nodes.push(*p);
                }
            }
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &(i, j) in self.topology.edges() {
            let (a, b) = (map[i], map[j]);
            if a != b && !edges.contains(&(a, b)) && !edges.contains(&(b, a)) {
                edges.push((a, b));
            }
        }
        if edges.is_empty() {
            return EmbeddedNetwork::point(nodes[0]);
        }
        EmbeddedNetwork::new(nodes, edges).expect("merged realization is a valid network")
    }

    /// Merges nodes joined by edges shorter than `eps`. Terminals are never
    /// merged with each other; a merged group takes the terminal's position
    /// if it has one, the mean position otherwise.
    pub fn collapse(&self, eps: f64) -> Realization {
        let topo = &self.topology;
        let n = topo.n_nodes();
        let nt = topo.n_terminals();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut has_terminal: Vec<bool> = (0..n).map(|v| v < nt).collect();
        let mut order: Vec<usize> = (0..topo.edges().len()).collect();
        order.sort_by(|&a, &b| {
            let len = |e: usize| {
                let (i, j) = topo.edges()[e];
                self.coords[i].dist(&self.coords[j])
            };
            len(a).total_cmp(&len(b))
        });
        let mut merged_any = false;
        for e in order {
            let (i, j) = topo.edges()[e];
            if self.coords[i].dist(&self.coords[j]) >= eps {
                break;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a == b || (has_terminal[a] && has_terminal[b]) {
                continue;
            }
            // keep the terminal (or lower index) as the root
            let (root, child) = if has_terminal[b] || (!has_terminal[a] && b < a) {
                (b, a)
            } else {
                (a, b)
            };
            parent[child] = root;
            has_terminal[root] |= has_terminal[child];
            merged_any = true;
        }
        if !merged_any {
            return self.clone();
        }
        // terminals keep indices 0..nt; surviving Steiner groups follow
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut new_index = vec![usize::MAX; n];
        let mut coords = Vec::new();
        for t in 0..nt {
            new_index[roots[t]] = t;
            coords.push(self.coords[t]);
        }
        for v in nt..n {
            let r = roots[v];
            if new_index[r] == usize::MAX {
                new_index[r] = coords.len();
                let members: Vec<usize> = (nt..n).filter(|&w| roots[w] == r).collect();
                let mut c = Point::zero(self.dim());
                for &w in &members {
                    c += self.coords[w] * (1.0 / members.len() as f64);
                }
                coords.push(c);
            }
        }
        let mut edges = Vec::new();
        for &(i, j) in topo.edges() {
            let (a, b) = (new_index[roots[i]], new_index[roots[j]]);
            if a != b {
                edges.push((a, b));
            }
        }
        let n_steiner = coords.len() - nt;
        let topology =
            Topology::new(nt, n_steiner, edges).expect("collapsing a tree yields a tree");
        let length = tree_length(topology.edges(), &coords);
        Realization {
            topology,
            coords,
            length,
            converged: self.converged,
            terminal_constraints: self.terminal_constraints.clone(),
        }
    }

    /// Same embedded tree up to node relabelling, within `tol`.
    pub fn same_tree(&self, other: &Realization, tol: f64) -> bool {
        let segs = |r: &Realization| -> Vec<(Point, Point)> {
            r.topology
                .edges()
                .iter()
                .map(|&(i, j)| (r.coords[i], r.coords[j]))
                .collect()
        };
        let (a, b) = (segs(self), segs(other));
        if a.len() != b.len() {
            return false;
        }
        let mut used = vec![false; b.len()];
        a.iter().all(|(p, q)| {
            let hit = b.iter().enumerate().position(|(k, (u, v))| {
                !used[k]
                    && ((p.dist(u) <= tol && q.dist(v) <= tol)
                        || (p.dist(v) <= tol && q.dist(u) <= tol))
            });
            hit.map(|k| used[k] = true).is_some()
        })
    }
}

pub(crate) fn tree_length(edges: &[(usize, usize)], coords: &[Point]) -> f64 {
    edges.iter().map(|&(i, j)| coords[i].dist(&coords[j])).sum()
}

pub(crate) fn instance_diameter(terminals: &[TerminalSpec]) -> f64 {
    let mut diam: f64 = 0.0;
    for (i, a) in terminals.iter().enumerate() {
        for b in &terminals[i + 1..] {
            diam = diam.max(a.center().dist(&b.center()) + a.radius() + b.radius());
        }
    }
    diam
}

pub(crate) fn check_points(points: &[Point]) -> Result<usize> {
    let dim = points.first().ok_or(Error::EmptyNetwork)?.dim();
    check_dim(dim)?;
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidPoint("non-finite coordinate".into()));
    }
    Ok(dim)
}

/// Rejects pairs of intersecting (or touching) constraint disks.
pub(crate) fn check_disjoint(terminals: &[TerminalSpec]) -> Result<()> {
    for (i, a) in terminals.iter().enumerate() {
        for (j, b) in terminals.iter().enumerate().skip(i + 1) {
            if let (TerminalSpec::Disk(da), TerminalSpec::Disk(db)) = (a, b) {
                if da.center.dist(&db.center) <= da.radius + db.radius {
                    return Err(Error::IntersectingDisks(i, j));
                }
            }
        }
    }
    Ok(())
}

/// Minimum-length embedding of `topology` with terminal `i` placed according
/// to `terminals[i]`, followed by the degenerate-edge collapse.
pub fn realize_convex(topology: &Topology, terminals: &[TerminalSpec]) -> Result<Realization> {
    realize_convex_seeded(topology, terminals, 0)
}

/// [`realize_convex`] with a seed for the initial Steiner positions.
pub fn realize_convex_seeded(
    topology: &Topology,
    terminals: &[TerminalSpec],
    seed: u64,
) -> Result<Realization> {
    check_disjoint(terminals)?;
    realize_unchecked(topology, terminals, seed)
}

pub(crate) fn realize_unchecked(
    topology: &Topology,
    terminals: &[TerminalSpec],
    seed: u64,
) -> Result<Realization> {
    if terminals.len() != topology.n_terminals() {
        return Err(Error::InvalidTopology(format!(
            "{} terminals for a topology on {}",
            terminals.len(),
            topology.n_terminals()
        )));
    }
    let centers: Vec<Point> = terminals.iter().map(TerminalSpec::center).collect();
    let dim = check_points(&centers)?;
    for t in terminals {
        if let TerminalSpec::Disk(d) = t {
            if !(d.radius > 0.0) || !d.radius.is_finite() {
                return Err(crate::error::invalid(
                    "r",
                    format!("disk radius must be positive, got {}", d.radius),
                ));
            }
        }
    }
    let out = optimize::minimize_length(topology.n_nodes(), topology.edges(), terminals, dim, seed);
    let disks: Vec<Disk> = terminals
        .iter()
        .filter_map(|t| match t {
            TerminalSpec::Disk(d) => Some(*d),
            TerminalSpec::Fixed(_) => None,
        })
        .collect();
    let realization = Realization {
        length: tree_length(topology.edges(), &out.coords),
        topology: topology.clone(),
        coords: out.coords,
        converged: out.converged,
        terminal_constraints: (disks.len() == terminals.len()).then_some(disks),
    };
    let eps = COLLAPSE_RTOL * instance_diameter(terminals).max(f64::MIN_POSITIVE);
    Ok(realization.collapse(eps))
}

/// Realizes every full topology and keeps the shortest trees. Distinct trees
/// within [`TIE_RTOL`] of the minimum are all returned, shortest first.
pub(crate) fn best_over_topologies(terminals: &[TerminalSpec]) -> Result<Vec<Realization>> {
    let n = terminals.len();
    let topologies = enumerate_full_topologies(n)?;
    let mut all: Vec<(usize, Realization)> = topologies
        .par_iter()
        .enumerate()
        .map(|(k, t)| realize_unchecked(t, terminals, k as u64).map(|r| (k, r)))
        .collect::<Result<_>>()?;
    all.sort_by(|a, b| a.1.length.total_cmp(&b.1.length).then(a.0.cmp(&b.0)));
    let best = all[0].1.length;
    let same = 1e-7 * instance_diameter(terminals).max(f64::MIN_POSITIVE);
    let mut optima: Vec<Realization> = Vec::new();
    for (_, r) in all {
        if r.length > best * (1.0 + TIE_RTOL) + f64::MIN_POSITIVE {
            break;
        }
        if !optima.iter().any(|o| o.same_tree(&r, same)) {
            optima.push(r);
        }
    }
    Ok(optima)
}

/// Shortest Steiner trees for 2 to 8 points. More than one entry means the
/// minimum is attained by several distinct trees.
pub fn steiner_tree(points: &[Point]) -> Result<Vec<Realization>> {
    check_terminal_count(points.len())?;
    check_points(points)?;
    let terminals: Vec<TerminalSpec> = points.iter().copied().map(TerminalSpec::Fixed).collect();
    best_over_topologies(&terminals)
}

/// Local-minimality violations of a realization (see
/// [`locally_minimal_violations`]).
pub fn validate_locally_minimal(s: &Realization, tol: f64) -> Vec<Violation> {
    let coincident = s
        .topology
        .edges()
        .iter()
        .any(|&(i, j)| s.coords[i] == s.coords[j]);
    let net = s.to_network();
    // merged coincident nodes keep the terminal indices in front
    let n_terminals = if coincident {
        0
    } else {
        s.topology.n_terminals()
    };
    locally_minimal_violations(&net, n_terminals, tol)
}

/// Length of the network with node positions `α x₀ + (1 − α) x₁`.
pub fn length_interpolation(s0: &Realization, s1: &Realization, alpha: f64) -> Result<f64> {
    if s0.topology != s1.topology || s0.terminal_constraints != s1.terminal_constraints {
        return Err(Error::TopologyMismatch);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(crate::error::invalid(
            "alpha",
            format!("must lie in [0, 1], got {alpha}"),
        ));
    }
    if alpha == 0.0 {
        return Ok(s1.length);
    }
    if alpha == 1.0 {
        return Ok(s0.length);
    }
    let coords: Vec<Point> = s0
        .coords
        .iter()
        .zip(&s1.coords)
        .map(|(a, b)| *a * alpha + *b * (1.0 - alpha))
        .collect();
    Ok(tree_length(s0.topology.edges(), &coords))
}

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_TERMINALS: usize = 8;

/// Tree over `n` labelled terminals (nodes `0..n`) and unlabelled Steiner
/// nodes (nodes `n..`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Topology {
    n_terminals: usize,
    n_steiner: usize,
    edges: Vec<(usize, usize)>,
}

impl Topology {
    /// Validates that the graph is a tree, Steiner nodes have degree at least
    /// three and there are at most `n − 2` of them.
    pub fn new(n_terminals: usize, n_steiner: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let total = n_terminals + n_steiner;
        if n_terminals == 0 {
            return Err(Error::InvalidTopology("no terminals".into()));
        }
        if n_steiner > n_terminals.saturating_sub(2) {
            return Err(Error::InvalidTopology(format!(
                "{n_steiner} Steiner nodes for {n_terminals} terminals"
            )));
        }
        if edges.len() + 1 != total {
            return Err(Error::InvalidTopology(format!(
                "{} edges for {total} nodes",
                edges.len()
            )));
        }
        let mut degree = vec![0usize; total];
        for &(i, j) in &edges {
            if i >= total || j >= total || i == j {
                return Err(Error::InvalidTopology(format!("bad edge ({i}, {j})")));
            }
            degree[i] += 1;
            degree[j] += 1;
        }
        let t = Topology {
            n_terminals,
            n_steiner,
            edges,
        };
        if !t.is_connected() {
            return Err(Error::InvalidTopology("not connected".into()));
        }
        if total > 1 && degree[..n_terminals].contains(&0) {
            return Err(Error::InvalidTopology("isolated terminal".into()));
        }
        if let Some(s) = degree[n_terminals..].iter().position(|&d| d < 3) {
            return Err(Error::InvalidTopology(format!(
                "Steiner node s{} has degree {}",
                s + 1,
                degree[n_terminals + s]
            )));
        }
        Ok(t)
    }

    pub fn n_terminals(&self) -> usize {
        self.n_terminals
    }

    pub fn n_steiner(&self) -> usize {
        self.n_steiner
    }

    pub fn n_nodes(&self) -> usize {
        self.n_terminals + self.n_steiner
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_steiner(&self, node: usize) -> bool {
        node >= self.n_terminals
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j)| i == node || j == node)
            .count()
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(i, j)| match node {
                _ if i == node => Some(j),
                _ if j == node => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Full: `n − 2` Steiner nodes of degree 3 and every terminal a leaf.
    pub fn is_full(&self) -> bool {
        if self.n_terminals == 2 {
            return self.n_steiner == 0;
        }
        self.n_steiner + 2 == self.n_terminals
            && (0..self.n_terminals).all(|t| self.degree(t) == 1)
            && (self.n_terminals..self.n_nodes()).all(|s| self.degree(s) == 3)
    }

    fn is_connected(&self) -> bool {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn label(&self, node: usize) -> String {
        if node < self.n_terminals {
            format!("t{}", node + 1)
        } else {
            format!("s{}", node - self.n_terminals + 1)
        }
    }

    fn parse_label(&self, label: &str, n_steiner: usize) -> Result<usize> {
        let bad = || Error::InvalidTopology(format!("bad node label `{label}`"));
        let (kind, num) = label.split_at_checked(1).ok_or_else(bad)?;
        let k: usize = num.parse().map_err(|_| bad())?;
        match kind {
            "t" if (1..=self.n_terminals).contains(&k) => Ok(k - 1),
            "s" if (1..=n_steiner).contains(&k) => Ok(self.n_terminals + k - 1),
            _ => Err(bad()),
        }
    }

    /// Same tree with the edge list in a canonical order, for comparisons.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .edges
            .iter()
            .map(|&(i, j)| (i.min(j), i.max(j)))
            .collect();
        e.sort_unstable();
        e
    }
}

#[derive(Serialize, Deserialize)]
struct RawTopology {
    n: usize,
    edges: Vec<[String; 2]>,
}

impl Serialize for Topology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawTopology {
            n: self.n_terminals,
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| [self.label(i), self.label(j)])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Topology {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTopology::deserialize(d)?;
        let n_steiner = raw
            .edges
            .iter()
            .flatten()
            .filter_map(|l| l.strip_prefix('s').and_then(|k| k.parse::<usize>().ok()))
            .max()
            .unwrap_or(0);
        let probe = Topology {
            n_terminals: raw.n,
            n_steiner,
            edges: Vec::new(),
        };
        let edges = raw
            .edges
            .iter()
            .map(|[a, b]| {
                Ok((
                    probe.parse_label(a, n_steiner)?,
                    probe.parse_label(b, n_steiner)?,
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Topology::new(raw.n, n_steiner, edges).map_err(D::Error::custom)
    }
}

pub(crate) fn check_terminal_count(n: usize) -> Result<()> {
    if (2..=MAX_TERMINALS).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "terminal count",
            value: n as i64,
            allowed: "2..=8",
        })
    }
}

/// All full Steiner topologies on `n` labelled terminals: `(2n − 5)!!` of
/// them for `n ≥ 3`, the single edge for `n = 2`.
pub fn enumerate_full_topologies(n: usize) -> Result<Vec<Topology>> {
    check_terminal_count(n)?;
    if n == 2 {
        return Ok(vec![Topology::new(2, 0, vec![(0, 1)])?]);
    }
    // Nodes during construction: terminals are 0..n, Steiner node j is n + j.
    // Terminal k is added by subdividing an edge with Steiner node k − 2.
    let start = vec![(0, n), (1, n), (2, n)];
    let mut trees = vec![start];
    for k in 3..n {
        let steiner = n + k - 2;
        let mut next = Vec::with_capacity(trees.len() * (2 * k - 3));
        for edges in &trees {
            for e in 0..edges.len() {
                let (a, b) = edges[e];
                let mut grown = edges.clone();
                grown[e] = (a, steiner);
                grown.push((steiner, b));
                grown.push((k, steiner));
                next.push(grown);
            }
        }
        trees = next;
    }
    trees
        .into_iter()
        .map(|edges| Topology::new(n, n - 2, edges))
        .collect()
}

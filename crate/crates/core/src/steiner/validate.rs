use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::geometry::{EmbeddedNetwork, Point};

/// A structural defect found by one of the validators.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Cycle,
    Disconnected,
    Degree {
        node: usize,
        degree: usize,
    },
    /// Two edges at a branching node do not meet at 2π/3.
    BranchAngle {
        node: usize,
        angle: f64,
    },
    /// Two edges at a degree-two node meet at less than 2π/3.
    CornerAngle {
        node: usize,
        angle: f64,
    },
    /// A Steiner node of degree below three.
    SteinerDegree {
        node: usize,
        degree: usize,
    },
    /// A point of `M` farther than `r` from the network.
    Uncovered {
        point: usize,
        distance: f64,
    },
    /// A corner (degree two, angle below π) with no corresponding point of `M`.
    NonEnergeticCorner {
        node: usize,
        angle: f64,
    },
    /// A leaf with no corresponding point of `M`.
    NonEnergeticLeaf {
        node: usize,
    },
    /// An energetic corner whose corresponding point is off the angle bisector.
    Bisector {
        node: usize,
        deviation: f64,
    },
    /// An energetic leaf whose edge does not point at the corresponding point.
    Radial {
        node: usize,
        deviation: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle => write!(f, "cycle"),
            Violation::Disconnected => write!(f, "disconnected"),
            Violation::Degree { node, degree } => write!(f, "degree {degree} at node {node}"),
            Violation::BranchAngle { node, angle } => {
                write!(f, "branch angle {angle:.6} != 2π/3 at node {node}")
            }
            Violation::CornerAngle { node, angle } => {
                write!(f, "angle {angle:.6} < 2π/3 at node {node}")
            }
            Violation::SteinerDegree { node, degree } => {
                write!(f, "Steiner node {node} has degree {degree}")
            }
            Violation::Uncovered { point, distance } => {
                write!(f, "point {point} at distance {distance} is not covered")
            }
            Violation::NonEnergeticCorner { node, angle } => {
                write!(f, "non-energetic corner at node {node} (angle {angle:.6})")
            }
            Violation::NonEnergeticLeaf { node } => write!(f, "non-energetic leaf at node {node}"),
            Violation::Bisector { node, deviation } => {
                write!(
                    f,
                    "corresponding point off the bisector at node {node} by {deviation:e}"
                )
            }
            Violation::Radial { node, deviation } => {
                write!(f, "leaf edge not radial at node {node} by {deviation:e}")
            }
        }
    }
}

/// Pairwise angles between the edges at `node`.
pub(crate) fn incident_directions(net: &EmbeddedNetwork, node: usize) -> Vec<Point> {
    let p = net.nodes()[node];
    net.neighbors(node)
        .iter()
        .map(|&w| net.nodes()[w] - p)
        .collect()
}

/// Checks the local conditions satisfied by every Steiner minimal tree: a
/// tree, degree at most three, branching angles of exactly 2π/3 and
/// degree-two angles of at least 2π/3. Nodes from `n_terminals` on are
/// Steiner nodes and must have degree three.
pub fn locally_minimal_violations(
    net: &EmbeddedNetwork,
    n_terminals: usize,
    tol: f64,
) -> Vec<Violation> {
    let mut out = Vec::new();
    if net.has_cycle() {
        out.push(Violation::Cycle);
    }
    if !net.is_connected() {
        out.push(Violation::Disconnected);
    }
    out.extend(angle_violations(net, tol));
    for v in n_terminals..net.nodes().len() {
        let degree = net.degree(v);
        if degree < 3 && n_terminals > 0 {
            out.push(Violation::SteinerDegree { node: v, degree });
        }
    }
    out
}

/// Degree and angle conditions shared by the Steiner and minimizer validators.
pub(crate) fn angle_violations(net: &EmbeddedNetwork, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let third = 2.0 * PI / 3.0;
    for v in 0..net.nodes().len() {
        let dirs = incident_directions(net, v);
        match dirs.len() {
            0 | 1 => {}
            2 => {
                let angle = dirs[0].angle_to(&dirs[1]);
                if angle < third - tol {
                    out.push(Violation::CornerAngle { node: v, angle });
                }
            }
            3 => {
                for i in 0..3 {
                    for j in i + 1..3 {
                        let angle = dirs[i].angle_to(&dirs[j]);
                        if (angle - third).abs() > tol {
                            out.push(Violation::BranchAngle { node: v, angle });
                        }
                    }
                }
            }
            degree => out.push(Violation::Degree { node: v, degree }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_sign_has_degree_four() {
        let net = EmbeddedNetwork::new(
            vec![
                Point::new2(0.0, 0.0),
                Point::new2(1.0, 0.0),
                Point::new2(0.0, 1.0),
                Point::new2(-1.0, 0.0),
                Point::new2(0.0, -1.0),
            ],
            vec![(0, 1), (0, 2), (0, 3), (0, 4)],
        )
        .unwrap();
        let v = locally_minimal_violations(&net, 5, 1e-6);
        assert_eq!(v, vec![Violation::Degree { node: 0, degree: 4 }]);
        assert_eq!(v[0].to_string(), "degree 4 at node 0");
    }

    #[test]
    fn right_angle_corner() {
        let net = EmbeddedNetwork::path(vec![
            Point::new2(1.0, 0.0),
            Point::new2(0.0, 0.0),
            Point::new2(0.0, 1.0),
        ])
        .unwrap();
        let v = locally_minimal_violations(&net, 3, 1e-6);
        assert_eq!(v.len(), 1);
        assert!(
            matches!(v[0], Violation::CornerAngle { node: 1, angle } if (angle - PI / 2.0).abs() < 1e-12)
        );
        assert!(v[0].to_string().starts_with("angle 1.570796 < 2π/3"));
    }
}

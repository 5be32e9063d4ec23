use std::f64::consts::PI;

use serde::Serialize;

use super::Instance;
use crate::error::{Error, Result};
use crate::geometry::{dist_to_network, EmbeddedNetwork, Point};
use crate::steiner::{angle_violations, incident_directions, Violation};

/// Relative band around `r` within which a point of `M` counts as
/// corresponding to a vertex.
pub const ENERGETIC_RTOL: f64 = 1e-6;

/// A vertex `x` of the network paired with a point `y` of `M` at distance
/// `r` whose open `r`-ball misses the network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correspondence {
    pub node: usize,
    pub x: Point,
    pub point: usize,
    pub y: Point,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub coverage_radius: f64,
    /// One flag per network vertex.
    pub energetic: Vec<bool>,
    pub corresponding_points: Vec<Correspondence>,
    pub violations: Vec<Violation>,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the necessary conditions for `network` to be a minimizer for
/// `inst`: coverage, no cycles, Steiner-type degrees and angles, and at every
/// leaf and corner a corresponding point of `M` on the edge line or on the
/// angle bisector. `tol` is the angle tolerance in radians.
pub fn validate_minimizer_structure(
    network: &EmbeddedNetwork,
    inst: &Instance,
    tol: f64,
) -> Result<StructureReport> {
    if !network.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = inst.finite_points()?;
    let r = inst.r;
    let (lo, hi) = (r * (1.0 - ENERGETIC_RTOL), r * (1.0 + ENERGETIC_RTOL));

    let dists: Vec<f64> = m
        .iter()
        .map(|y| dist_to_network(y, network).distance)
        .collect();
    let coverage_radius = dists.iter().copied().fold(0.0, f64::max);
    let mut violations = Vec::new();
    for (point, &distance) in dists.iter().enumerate() {
        if distance > hi {
            violations.push(Violation::Uncovered { point, distance });
        }
    }
    if network.has_cycle() {
        violations.push(Violation::Cycle);
    }
    violations.extend(angle_violations(network, tol));

    let nodes = network.nodes();
    let mut energetic = vec![false; nodes.len()];
    let mut corresponding_points = Vec::new();
    for (v, x) in nodes.iter().enumerate() {
        // points of M at distance r from x whose open r-ball avoids the network
        let candidates: Vec<usize> = (0..m.len())
            .filter(|&i| (lo..=hi).contains(&x.dist(&m[i])) && dists[i] >= lo)
            .collect();
        let dirs = incident_directions(network, v);
        // deviation from the local optimality condition for each candidate
        let deviation = |y: &Point| -> f64 {
            match dirs.len() {
                1 => dirs[0].angle_to(&(*x - *y)),
                2 => (dirs[0].angle_to(&(*y - *x)) - dirs[1].angle_to(&(*y - *x))).abs(),
                _ => 0.0,
            }
        };
        let best = candidates
            .iter()
            .map(|&i| (i, deviation(&m[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, dev)) = best {
            energetic[v] = true;
            corresponding_points.push(Correspondence {
                node: v,
                x: *x,
                point: i,
                y: m[i],
                distance: x.dist(&m[i]),
            });
            match dirs.len() {
                1 if dev > tol => violations.push(Violation::Radial {
                    node: v,
                    deviation: dev,
                }),
                2 if dev > tol => violations.push(Violation::Bisector {
                    node: v,
                    deviation: dev,
                }),
                _ => {}
            }
            continue;
        }
        match dirs.len() {
            1 => violations.push(Violation::NonEnergeticLeaf { node: v }),
            2 => {
                let angle = dirs[0].angle_to(&dirs[1]);
                if angle < PI - tol {
                    violations.push(Violation::NonEnergeticCorner { node: v, angle });
                }
            }
            _ => {}
        }
    }
    Ok(StructureReport {
        coverage_radius,
        energetic,
        corresponding_points,
        violations,
    })
}

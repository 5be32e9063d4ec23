//! The polyline with infinitely many corners, truncated after `k` vertices,
//! and the disk-chain length minimization that recovers it.
//!
//! Frame: the limit point of the vertices is the origin, the circle center is
//! `(0, −R)` and the vertices approach the origin from the left. Positions are
//! computed from the remaining central angle `ψ` so that tiny chords keep
//! full relative precision.

use serde::{Deserialize, Serialize};

use super::check_radius;
use crate::error::{invalid, Error, Result};
use crate::geometry::{dist_to_network, EmbeddedNetwork, Point};
use crate::steiner::{check_points, realize_unchecked, Disk, Realization, TerminalSpec, Topology};

/// Hausdorff distance within which the two runs of [`chain_solve`] must
/// agree.
pub const CHAIN_AGREEMENT: f64 = 1e-6;

/// Halvings summed beyond the last vertex when computing the limit angle.
const TAIL_TERMS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerInstance {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub r: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub k: usize,
    pub center: Point,
    /// `a_1, …, a_k` followed by the end point of the truncated minimizer.
    pub a_points: Vec<Point>,
    /// `v_1, …, v_k` followed by the truncation point.
    pub v_points: Vec<Point>,
    /// Length of the polyline through `a_points`.
    pub length: f64,
}

impl CornerInstance {
    /// Chord length `|a_i a_{i+1}|` for 1-based `i`.
    pub fn chord(&self, i: usize) -> f64 {
        self.r / self.n as f64 / 2f64.powi(i as i32 - 1)
    }

    pub fn polyline(&self) -> Result<EmbeddedNetwork> {
        EmbeddedNetwork::path(self.a_points.clone())
    }
}

/// Builds the truncated corner example: `k` vertices on the circle of radius
/// `big_r` with first chord `r / n` and each following chord half the
/// previous one, the points `v_i` at distance `r` outside each vertex, and
/// the end point chosen on the continuation of the last chord.
pub fn build_corner_instance(big_r: f64, r: f64, n: u32, k: usize) -> Result<CornerInstance> {
    check_radius(big_r)
        .map_err(|_| invalid("R", format!("must be positive and finite, got {big_r}")))?;
    check_radius(r)?;
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "truncation depth k",
            value: k as i64,
            allowed: ">= 2",
        });
    }
    if n == 0 {
        return Err(Error::CornerNTooSmall(n, "N must be positive".into()));
    }
    let c1 = r / n as f64;
    if c1 >= 2.0 * big_r {
        return Err(Error::CornerNTooSmall(
            n,
            "first chord exceeds the circle diameter".into(),
        ));
    }
    let chord = |j: usize| c1 / 2f64.powi(j as i32 - 1);
    let total = k + 1 + TAIL_TERMS;
    // theta[j] is the central angle of chord j (1-based)
    let theta: Vec<f64> = (0..=total)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                2.0 * (chord(j) / (2.0 * big_r)).asin()
            }
        })
        .collect();
    for i in 1..k {
        if theta[i] + theta[i + 1] >= std::f64::consts::PI {
            return Err(Error::CornerNTooSmall(
                n,
                format!("angle at a_{} is not obtuse", i + 1),
            ));
        }
    }
    // psi[i]: central angle from a_i to the limit point, summed smallest first
    let mut psi = vec![0.0; k + 2];
    let mut acc = 0.0;
    for j in (1..=total).rev() {
        acc += theta[j];
        if j <= k + 1 {
            psi[j] = acc;
        }
    }
    if psi[1] >= std::f64::consts::PI {
        return Err(Error::CornerNTooSmall(
            n,
            "vertices wrap past a half circle".into(),
        ));
    }
    let a = |i: usize| {
        let p = psi[i];
        let h = (p / 2.0).sin();
        Point::new2(-big_r * p.sin(), -2.0 * big_r * h * h)
    };
    // direction of chord i, from a_i to a_{i+1}
    let beta = |i: usize| (psi[i] + psi[i + 1]) / 2.0;
    let dir = |i: usize| {
        let (s, c) = beta(i).sin_cos();
        Point::new2(c, s)
    };

    let mut a_points: Vec<Point> = (1..=k).map(a).collect();
    let mut v_points = Vec::with_capacity(k + 1);
    v_points.push(a(1) - dir(1) * r);
    for i in 2..=k {
        let m = (beta(i - 1) + beta(i)) / 2.0;
        let (s, c) = m.sin_cos();
        v_points.push(a(i) + Point::new2(-s, c) * r);
    }
    // terminal point: projection of a_∞ + r·tangent onto the ray of chord k
    let ak = a(k);
    let dk = dir(k);
    let h = (beta(k) / 2.0).sin();
    let excess = -2.0 * r * h * h - ak.dot(&dk);
    if !(excess > 0.0) {
        return Err(Error::CornerNTooSmall(
            n,
            "terminal point falls inside the last disk".into(),
        ));
    }
    v_points.push(ak + dk * (excess + r));
    a_points.push(ak + dk * excess);
    if v_points[0].dist(&v_points[k]) <= 2.0 * r {
        return Err(Error::CornerNTooSmall(n, "end disks intersect".into()));
    }
    let length = (1..k).map(chord).sum::<f64>() + excess;
    Ok(CornerInstance {
        big_r,
        r,
        n,
        k,
        center: Point::new2(0.0, -big_r),
        a_points,
        v_points,
        length,
    })
}

/// Shortest polyline `u_1 … u_m` with `u_i` in the closed disk of radius `r`
/// about `centers[i]`.
///
/// The problem is solved twice from different random starts; `converged` is
/// set only if both runs converged and their polylines agree within
/// [`CHAIN_AGREEMENT`] in Hausdorff distance.
pub fn chain_solve(centers: &[Point], r: f64, seed: u64) -> Result<Realization> {
    check_radius(r)?;
    if centers.len() < 2 {
        return Err(invalid("centers", "at least two disks are required"));
    }
    check_points(centers)?;
    let m = centers.len();
    let topology = Topology::new(m, 0, (1..m).map(|i| (i - 1, i)).collect())?;
    let terminals: Vec<TerminalSpec> = centers
        .iter()
        .map(|&center| TerminalSpec::Disk(Disk { center, radius: r }))
        .collect();
    let first = realize_unchecked(&topology, &terminals, seed)?;
    let second = realize_unchecked(&topology, &terminals, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let gap = hausdorff(&first.to_network(), &second.to_network());
    log::debug!("chain_solve: runs differ by {gap:e}");
    let mut out = first;
    out.converged = out.converged && second.converged && gap <= CHAIN_AGREEMENT;
    Ok(out)
}

/// Hausdorff distance between two networks, sampled at nine points per edge.
fn hausdorff(a: &EmbeddedNetwork, b: &EmbeddedNetwork) -> f64 {
    let one_way = |x: &EmbeddedNetwork, y: &EmbeddedNetwork| {
        let mut worst: f64 = x
            .nodes()
            .iter()
            .map(|p| dist_to_network(p, y).distance)
            .fold(0.0, f64::max);
        for (p, q) in x.segments() {
            for s in 1..9 {
                worst = worst.max(dist_to_network(&p.lerp(&q, s as f64 / 9.0), y).distance);
            }
        }
        worst
    };
    one_way(a, b).max(one_way(b, a))
}

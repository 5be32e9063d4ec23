use serde::{Deserialize, Serialize};

use super::mc::{check_radius, check_samples, fold_box, McEstimate};
use crate::error::Result;
use crate::geometry::{EmbeddedNetwork, PolyCurve};

/// Non-decreasing penalty applied to the distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phi {
    Identity,
    Square,
}

impl Phi {
    pub fn apply(self, d: f64) -> f64 {
        match self {
            Phi::Identity => d,
            Phi::Square => d * d,
        }
    }
}

impl std::str::FromStr for Phi {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Phi::Identity),
            "square" => Ok(Phi::Square),
            other => Err(crate::error::invalid("phi", format!("unknown `{other}`"))),
        }
    }
}

/// Monte Carlo estimate of `∫_Ω φ(dist(x, β)) dx` with `Ω = B_R(γ)`.
///
/// Uses the same sample points for every `β` given the same domain, seed and
/// sample count, so competing networks can be compared with common random
/// numbers.
pub fn avg_distance_functional(
    beta: &EmbeddedNetwork,
    domain: &PolyCurve,
    r: f64,
    phi: Phi,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_radius(r)?;
    check_samples(samples)?;
    let omega = domain.to_network();
    let bbox = omega.bounds().inflate(r);
    let omega_index = omega.segment_index();
    let beta_index = beta.segment_index();
    let sums = fold_box(
        &bbox,
        samples,
        seed,
        || (0.0f64, 0.0f64),
        |acc, p| {
            if omega_index.any_within(&p, r) {
                let d = beta_index.nearest(&p).map_or(0.0, |n| n.0);
                let f = phi.apply(d);
                acc.0 += f;
                acc.1 += f * f;
            }
        },
    );
    let (mut s1, mut s2) = (0.0, 0.0);
    for (a, b) in sums {
        s1 += a;
        s2 += b;
    }
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0);
    let vol = bbox.volume();
    Ok(McEstimate {
        estimate: vol * mean,
        ci_halfwidth: 3.0 * vol * (var / n).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use std::f64::consts::PI;

    #[test]
    fn segment_against_itself() {
        let seg = PolyCurve::new(vec![Point::new2(0.0, 0.0), Point::new2(1.0, 0.0)]).unwrap();
        let est = avg_distance_functional(&seg.to_network(), &seg, 0.5, Phi::Identity, 200_000, 5)
            .unwrap();
        assert!(est.contains(0.25 + PI / 12.0), "{est:?}");
        // squared distance: 2 L R^3 / 3 + π R^4 / 2
        let est =
            avg_distance_functional(&seg.to_network(), &seg, 0.5, Phi::Square, 200_000, 5).unwrap();
        assert!(
            est.contains(2.0 * 0.125 / 3.0 + PI * 0.0625 / 2.0),
            "{est:?}"
        );
    }

    #[test]
    fn dense_beta_is_near_zero() {
        let seg = PolyCurve::new(vec![Point::new2(0.0, 0.0), Point::new2(1.0, 0.0)]).unwrap();
        // a comb filling the stadium at spacing 0.02
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for k in 0..=50 {
            let y = -0.5 + 0.02 * k as f64;
            nodes.push(Point::new2(-0.5, y));
            nodes.push(Point::new2(1.5, y));
            edges.push((2 * k, 2 * k + 1));
        }
        let beta = EmbeddedNetwork::new(nodes, edges).unwrap();
        let est = avg_distance_functional(&beta, &seg, 0.5, Phi::Identity, 50_000, 1).unwrap();
        assert!(est.estimate < 0.01);
    }

    #[test]
    fn phi_parses() {
        assert_eq!("square".parse::<Phi>().unwrap(), Phi::Square);
        assert!("cube".parse::<Phi>().is_err());
    }
}

//! Maximal distance minimizers: the covering functional, length lower
//! bounds, the finite-set solver, structural validation and the corner-point
//! example.

mod bounds;
mod corner;
mod finite;
mod structure;

pub use bounds::{lower_bound_perimeter, lower_bound_volume};
pub use corner::{build_corner_instance, chain_solve, CornerInstance, CHAIN_AGREEMENT};
pub use finite::{minimal_enclosing_ball, solve_finite_m, truncate_full_steiner};
pub use structure::{
    validate_minimizer_structure, Correspondence, StructureReport, ENERGETIC_RTOL,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{check_dim, dist_to_network, EmbeddedNetwork, Point};

/// The data of the covering problem: a finite set or a convex polygon `M`
/// and the radius `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    pub dim: usize,
    pub r: f64,
    pub set: PointSet,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointSet {
    Points(Vec<Point>),
    /// Convex polygon, counterclockwise or clockwise.
    Polygon(Vec<Point>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    /// Inferred from the first point when absent.
    #[serde(default)]
    dim: Option<usize>,
    r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polygon: Option<Vec<Point>>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let set = match (raw.points, raw.polygon) {
            (Some(p), None) => PointSet::Points(p),
            (None, Some(p)) => PointSet::Polygon(p),
            _ => {
                return Err(Error::Schema(
                    "exactly one of `points` and `polygon` is required".into(),
                ))
            }
        };
        let dim = raw.dim.unwrap_or_else(|| match &set {
            PointSet::Points(p) | PointSet::Polygon(p) => p.first().map_or(2, Point::dim),
        });
        Instance::new(dim, raw.r, set)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        let (points, polygon) = match inst.set {
            PointSet::Points(p) => (Some(p), None),
            PointSet::Polygon(p) => (None, Some(p)),
        };
        RawInstance {
            dim: Some(inst.dim),
            r: inst.r,
            points,
            polygon,
        }
    }
}

impl Instance {
    pub fn new(dim: usize, r: f64, set: PointSet) -> Result<Self> {
        check_dim(dim)?;
        check_radius(r)?;
        let pts = match &set {
            PointSet::Points(p) => p,
            PointSet::Polygon(p) => {
                if dim != 2 {
                    return Err(Error::NonPlanar);
                }
                p
            }
        };
        if pts.is_empty() {
            return Err(invalid("M", "must be non-empty"));
        }
        if let Some(p) = pts.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(Instance { dim, r, set })
    }

    pub fn from_points(points: Vec<Point>, r: f64) -> Result<Self> {
        let dim = points.first().map_or(2, Point::dim);
        Instance::new(dim, r, PointSet::Points(points))
    }

    pub fn points(&self) -> &[Point] {
        match &self.set {
            PointSet::Points(p) | PointSet::Polygon(p) => p,
        }
    }

    /// The finite set, or an error for polygon instances.
    pub fn finite_points(&self) -> Result<&[Point]> {
        match &self.set {
            PointSet::Points(p) => Ok(p),
            PointSet::Polygon(_) => Err(invalid("M", "a finite point set is required")),
        }
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            "r",
            format!("must be positive and finite, got {r}"),
        ))
    }
}

/// `max_{y ∈ M} dist(y, S)`: the smallest `r` for which `S` covers `M`.
pub fn coverage_radius(network: &EmbeddedNetwork, m: &[Point]) -> Result<f64> {
    if m.is_empty() {
        return Err(invalid("M", "must be non-empty"));
    }
    if let Some(p) = m.iter().find(|p| p.dim() != network.dim()) {
        return Err(Error::DimensionMismatch {
            expected: network.dim(),
            found: p.dim(),
        });
    }
    Ok(m.iter()
        .map(|y| dist_to_network(y, network).distance)
        .fold(0.0, f64::max))
}

//! One handler per subcommand. Each parses its input schema, computes, and
//! returns the JSON payload, whether violations were found, and the scene
//! for the SVG overlay.

use serde::Deserialize;
use serde_json::{json, Value};

use super::svg::Scene;
use super::{CliError, Command, RunConfig};
use crate::geometry::{
    polygon_area, polygon_perimeter, resample, EmbeddedNetwork, Point, PolyCurve,
};
use crate::mdm::{
    build_corner_instance, chain_solve, coverage_radius, lower_bound_perimeter, lower_bound_volume,
    solve_finite_m, validate_minimizer_structure, Instance, PointSet,
};
use crate::steiner::{
    locally_minimal_violations, steiner_tree, validate_locally_minimal, Violation,
};
use crate::tube::{avg_distance_functional, check_tube_equality, tube_boundary_2d, Phi};

pub struct Outcome {
    pub payload: Value,
    pub violations: bool,
    pub scene: Scene,
}

type Res = Result<Outcome, CliError>;

pub(super) fn execute(config: &RunConfig, input: &Value) -> Res {
    match config.command {
        Command::Steiner => steiner(config, input),
        Command::Solve => solve(config, input),
        Command::Bounds => bounds(config, input),
        Command::TubeCheck => tube_check(config, input),
        Command::CornerExample => corner_example(config, input),
        Command::Validate => validate(config, input),
        Command::AvgDistance => avg_distance(config, input),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(input: &Value) -> Result<T, CliError> {
    Ok(T::deserialize(input)?)
}

fn messages(violations: &[Violation]) -> Vec<String> {
    violations.iter().map(ToString::to_string).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointList {
    Bare(Vec<Point>),
    Wrapped { points: Vec<Point> },
}

fn steiner(config: &RunConfig, input: &Value) -> Res {
    let points = match parse::<PointList>(input)? {
        PointList::Bare(p) | PointList::Wrapped { points: p } => p,
    };
    let optima = steiner_tree(&points)?;
    let checks: Vec<Vec<Violation>> = optima
        .iter()
        .map(|s| validate_locally_minimal(s, config.tol()))
        .collect();
    let violations = checks.iter().any(|v| !v.is_empty());
    let payload = json!({
        "count": optima.len(),
        "length": optima[0].length,
        "optima": optima.iter().zip(&checks).map(|(s, v)| json!({
            "realization": s,
            "violations": v,
            "messages": messages(v),
        })).collect::<Vec<_>>(),
    });
    let scene = Scene {
        points: points.clone(),
        networks: optima.iter().map(|s| s.to_network()).collect(),
        ..Scene::default()
    };
    Ok(Outcome {
        payload,
        violations,
        scene,
    })
}

fn instance_with_override(config: &RunConfig, input: &Value) -> Result<Instance, CliError> {
    let inst: Instance = parse(input)?;
    Ok(match config.r {
        Some(r) => Instance::new(inst.dim, r, inst.set)?,
        None => inst,
    })
}

fn solve(config: &RunConfig, input: &Value) -> Res {
    let inst = instance_with_override(config, input)?;
    let minimizers = solve_finite_m(&inst)?;
    let m = inst.finite_points()?;
    let mut reports = Vec::new();
    let mut coverage = Vec::new();
    for s in &minimizers {
        let net = s.to_network();
        coverage.push(coverage_radius(&net, m)?);
        reports.push(validate_minimizer_structure(&net, &inst, config.tol())?);
    }
    let violations = reports.iter().any(|r| !r.is_valid());
    let payload = json!({
        "count": minimizers.len(),
        "length": minimizers[0].length,
        "coverage_radius": coverage,
        "minimizers": minimizers,
        "structure": reports,
    });
    let scene = Scene {
        points: m.to_vec(),
        disks: m.iter().map(|&c| (c, inst.r)).collect(),
        networks: minimizers.iter().map(|s| s.to_network()).collect(),
        ..Scene::default()
    };
    Ok(Outcome {
        payload,
        violations,
        scene,
    })
}

fn bounds(config: &RunConfig, input: &Value) -> Res {
    let inst = instance_with_override(config, input)?;
    let PointSet::Polygon(polygon) = &inst.set else {
        return Err(CliError::Usage(
            "bounds requires a `polygon` instance".into(),
        ));
    };
    let perimeter_bound = lower_bound_perimeter(polygon, inst.r)?;
    let area = polygon_area(polygon).abs();
    let volume_bound = lower_bound_volume(area, inst.r, 2)?;
    let payload = json!({
        "perimeter_bound": perimeter_bound,
        "volume_bound": volume_bound,
        "perimeter": polygon_perimeter(polygon),
        "area": area,
    });
    let mut cycle: Vec<(usize, usize)> = (1..polygon.len()).map(|i| (i - 1, i)).collect();
    if polygon.len() > 2 {
        cycle.push((polygon.len() - 1, 0));
    }
    let scene = Scene {
        points: polygon.clone(),
        networks: EmbeddedNetwork::new(polygon.clone(), cycle)
            .into_iter()
            .collect(),
        ..Scene::default()
    };
    Ok(Outcome {
        payload,
        violations: false,
        scene,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcSpec {
    center: Point,
    radius: f64,
    from: f64,
    to: f64,
    /// Defaults to chords of length about `h`, or 64 without `h`.
    #[serde(default)]
    segments: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TubeInput {
    #[serde(default)]
    curve: Option<PolyCurve>,
    #[serde(default)]
    arc: Option<ArcSpec>,
    #[serde(rename = "R")]
    big_r: Option<f64>,
    /// Polygonization step for `arc`; resampling step for `curve`.
    #[serde(default)]
    h: Option<f64>,
}

fn tube_check(config: &RunConfig, input: &Value) -> Res {
    let spec: TubeInput = parse(input)?;
    let curve = match (spec.curve, spec.arc) {
        (Some(c), None) => match spec.h {
            Some(h) => resample(&c, h)?,
            None => c,
        },
        (None, Some(a)) => {
            let segments = match (a.segments, spec.h) {
                (Some(n), _) => n,
                (None, Some(h)) if h > 0.0 && h.is_finite() => {
                    (a.radius * (a.to - a.from).abs() / h).ceil().max(1.0) as usize
                }
                (None, Some(h)) => {
                    return Err(crate::Error::InvalidParameter {
                        name: "h",
                        reason: format!("must be positive, got {h}"),
                    }
                    .into())
                }
                (None, None) => 64,
            };
            PolyCurve::arc(a.center, a.radius, a.from, a.to, segments)?
        }
        _ => {
            return Err(
                crate::Error::Schema("exactly one of `curve` and `arc` is required".into()).into(),
            )
        }
    };
    let r = config
        .r
        .or(spec.big_r)
        .ok_or_else(|| crate::Error::Schema("missing `R` (or pass --r)".into()))?;
    let report = check_tube_equality(&curve, r, config.samples, config.seed)?;
    let net = curve.to_network();
    let boundary = if curve.dim() == 2 {
        tube_boundary_2d(&net, r)?.pieces
    } else {
        Vec::new()
    };
    let scene = Scene {
        networks: vec![net],
        boundary,
        witnesses: report.witness.iter().map(|w| w.p).collect(),
        ..Scene::default()
    };
    Ok(Outcome {
        violations: !report.verdicts_agree,
        payload: serde_json::to_value(&report)?,
        scene,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CornerInput {
    #[serde(rename = "R")]
    big_r: f64,
    r: f64,
    #[serde(rename = "N")]
    n: u32,
    k: usize,
}

fn corner_example(config: &RunConfig, input: &Value) -> Res {
    let spec: CornerInput = parse(input)?;
    let r = config.r.unwrap_or(spec.r);
    let corner = build_corner_instance(spec.big_r, r, spec.n, spec.k)?;
    let chain = chain_solve(&corner.v_points, r, config.seed)?;
    let max_vertex_distance = chain
        .coords
        .iter()
        .zip(&corner.a_points)
        .map(|(u, a)| u.dist(a))
        .fold(0.0, f64::max);
    let inst = Instance::from_points(corner.v_points.clone(), r)?;
    let structure = validate_minimizer_structure(&corner.polyline()?, &inst, config.tol())?;
    let payload = json!({
        "instance": corner,
        "chain": {
            "coords": chain.coords,
            "length": chain.length,
            "converged": chain.converged,
            "max_vertex_distance": max_vertex_distance,
        },
        "structure": structure,
        "messages": messages(&structure.violations),
    });
    let scene = Scene {
        points: corner.v_points.clone(),
        disks: corner.v_points.iter().map(|&c| (c, r)).collect(),
        networks: vec![corner.polyline()?],
        ..Scene::default()
    };
    Ok(Outcome {
        payload,
        violations: !structure.is_valid() || !chain.converged,
        scene,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateInput {
    network: EmbeddedNetwork,
    /// When given, the network is checked as a minimizer for this instance.
    #[serde(default)]
    instance: Option<Instance>,
    /// Number of leading nodes that are terminals; the rest must be
    /// Steiner points of degree 3.
    #[serde(default)]
    terminals: Option<usize>,
}

fn validate(config: &RunConfig, input: &Value) -> Res {
    let spec: ValidateInput = parse(input)?;
    let net = spec.network;
    let mut scene = Scene {
        networks: vec![net.clone()],
        ..Scene::default()
    };
    let (payload, violations) = match spec.instance {
        Some(inst) => {
            let inst = match config.r {
                Some(r) => Instance::new(inst.dim, r, inst.set)?,
                None => inst,
            };
            let report = validate_minimizer_structure(&net, &inst, config.tol())?;
            scene.points = inst.points().to_vec();
            scene.disks = inst.points().iter().map(|&c| (c, inst.r)).collect();
            scene.witnesses = report.corresponding_points.iter().map(|c| c.x).collect();
            let payload = json!({
                "valid": report.is_valid(),
                "messages": messages(&report.violations),
                "report": report,
            });
            (payload, !report.is_valid())
        }
        None => {
            let found = locally_minimal_violations(&net, spec.terminals.unwrap_or(0), config.tol());
            let payload = json!({
                "valid": found.is_empty(),
                "messages": messages(&found),
                "violations": found,
            });
            (payload, !found.is_empty())
        }
    };
    Ok(Outcome {
        payload,
        violations,
        scene,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AvgInput {
    /// The curve whose `R`-neighborhood is the integration domain.
    domain: PolyCurve,
    #[serde(rename = "R")]
    big_r: Option<f64>,
    #[serde(default = "default_phi")]
    phi: Phi,
    /// Networks to score; the domain curve itself when omitted.
    #[serde(default)]
    beta: Option<Vec<EmbeddedNetwork>>,
}

fn default_phi() -> Phi {
    Phi::Identity
}

fn avg_distance(config: &RunConfig, input: &Value) -> Res {
    let spec: AvgInput = parse(input)?;
    let r = config
        .r
        .or(spec.big_r)
        .ok_or_else(|| crate::Error::Schema("missing `R` (or pass --r)".into()))?;
    let betas = spec.beta.unwrap_or_else(|| vec![spec.domain.to_network()]);
    let estimates = betas
        .iter()
        .map(|b| avg_distance_functional(b, &spec.domain, r, spec.phi, config.samples, config.seed))
        .collect::<crate::Result<Vec<_>>>()?;
    let best = estimates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.estimate.total_cmp(&b.1.estimate))
        .map(|(i, _)| i);
    let payload = json!({
        "phi": spec.phi,
        "radius": r,
        "estimates": estimates,
        "lengths": betas.iter().map(EmbeddedNetwork::length).collect::<Vec<_>>(),
        "best": best,
    });
    let domain = spec.domain.to_network();
    let boundary = if domain.dim() == 2 {
        tube_boundary_2d(&domain, r)?.pieces
    } else {
        Vec::new()
    };
    let scene = Scene {
        networks: betas,
        boundary,
        ..Scene::default()
    };
    Ok(Outcome {
        payload,
        violations: false,
        scene,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command) -> RunConfig {
        RunConfig::new(command)
    }

    #[test]
    fn bounds_payload() {
        let input = json!({"polygon": [[0, 0], [2, 0], [2, 2], [0, 2]], "r": 0.1});
        let out = execute(&cfg(Command::Bounds), &input).unwrap();
        let p = out.payload["perimeter_bound"].as_f64().unwrap();
        let v = out.payload["volume_bound"].as_f64().unwrap();
        assert!((p - 3.68584).abs() < 1e-5);
        assert!((v - (4.0 - 0.01 * std::f64::consts::PI) / 0.2).abs() < 1e-12);
        assert!(!out.violations);
    }

    #[test]
    fn bounds_needs_a_polygon() {
        let input = json!({"points": [[0, 0]], "r": 0.1});
        assert!(execute(&cfg(Command::Bounds), &input).is_err());
    }

    #[test]
    fn validate_flags_a_cycle() {
        let input = json!({"network": {"nodes": [[0, 0], [1, 0], [1, 1], [0, 1]], "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]}});
        let out = execute(&cfg(Command::Validate), &input).unwrap();
        assert!(out.violations);
        assert!(!out.payload["violations"].as_array().unwrap().is_empty());
    }

    #[test]
    fn radius_override() {
        let input = json!({"points": [[0, 0], [3, 4]], "r": 1.0});
        let mut c = cfg(Command::Solve);
        c.r = Some(2.0);
        let out = execute(&c, &input).unwrap();
        assert!((out.payload["length"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tube_input_needs_exactly_one_curve() {
        let both = json!({"curve": {"vertices": [[0, 0], [1, 0]]}, "arc": {"center": [0, 0], "radius": 1, "from": 0, "to": 1}, "R": 0.1});
        assert!(execute(&cfg(Command::TubeCheck), &both).is_err());
        let none = json!({"R": 0.1});
        assert!(execute(&cfg(Command::TubeCheck), &none).is_err());
    }
}

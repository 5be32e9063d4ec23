//! Length minimization over node positions with fixed or disk-constrained
//! terminals.
//!
//! The edge lengths are smoothed as `√(|e|² + μ²)` and disk constraints
//! enter through a log barrier `−τ log(ρ² − |u − c|²)`. Each continuation
//! stage runs damped Newton; `μ` and `τ` shrink by a factor of ten per stage.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Disk, TerminalSpec};
use crate::geometry::Point;

const STAGES: i32 = 14;
const NEWTON_ITERS: usize = 100;
/// Relative length change between the last two stages accepted as converged.
const LENGTH_RTOL: f64 = 1e-12;

pub(crate) struct Outcome {
    pub coords: Vec<Point>,
    pub converged: bool,
}

/// Frame that maps the instance to unit diameter around the origin.
#[derive(Clone, Copy)]
struct Frame {
    center: Point,
    scale: f64,
}

impl Frame {
    fn to_local(self, p: &Point) -> Point {
        (*p - self.center) * (1.0 / self.scale)
    }

    fn to_world(self, p: &Point) -> Point {
        self.center + *p * self.scale
    }
}

struct Problem {
    dim: usize,
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    /// Position of every fixed node (local frame).
    fixed: Vec<Option<Point>>,
    /// Disk of every constrained node (local frame).
    disks: Vec<Option<Disk>>,
    /// Variable slot of every free node.
    slot: Vec<Option<usize>>,
    n_free: usize,
}

impl Problem {
    fn positions(&self, x: &DVector<f64>) -> Vec<Point> {
        (0..self.n_nodes)
            .map(|v| match (self.fixed[v], self.slot[v]) {
                (Some(p), _) => p,
                (None, Some(s)) => self.point_at(x, s),
                _ => unreachable!("every node is fixed or free"),
            })
            .collect()
    }

    fn point_at(&self, x: &DVector<f64>, s: usize) -> Point {
        let c = &x.as_slice()[s * self.dim..(s + 1) * self.dim];
        Point::from_slice(c).unwrap_or_else(|_| Point::zero(self.dim))
    }

    fn feasible(&self, pos: &[Point]) -> bool {
        pos.iter().zip(&self.disks).all(|(p, d)| match d {
            Some(d) => p.dist_sq(&d.center) < d.radius * d.radius,
            None => true,
        })
    }

    fn energy(&self, pos: &[Point], mu: f64, tau: f64) -> Option<f64> {
        if !self.feasible(pos) {
            return None;
        }
        let mut e: f64 = self
            .edges
            .iter()
            .map(|&(i, j)| (pos[i].dist_sq(&pos[j]) + mu * mu).sqrt())
            .sum();
        for (p, d) in pos.iter().zip(&self.disks) {
            if let Some(d) = d {
                e -= tau * (d.radius * d.radius - p.dist_sq(&d.center)).ln();
            }
        }
        Some(e)
    }

    fn length(&self, pos: &[Point]) -> f64 {
        self.edges.iter().map(|&(i, j)| pos[i].dist(&pos[j])).sum()
    }

    fn gradient_hessian(&self, pos: &[Point], mu: f64, tau: f64) -> (DVector<f64>, DMatrix<f64>) {
        let d = self.dim;
        let nv = self.n_free * d;
        let mut g = DVector::zeros(nv);
        let mut h = DMatrix::zeros(nv, nv);
        for &(i, j) in &self.edges {
            let e = pos[i] - pos[j];
            let f = (e.norm_sq() + mu * mu).sqrt();
            let ec = e.coords();
            let ec = &ec[..d];
            for (node, sign) in [(i, 1.0), (j, -1.0)] {
                if let Some(s) = self.slot[node] {
                    for a in 0..d {
                        g[s * d + a] += sign * ec[a] / f;
                    }
                }
            }
            // Hessian block (I − e eᵀ / f²) / f, with ± signs between endpoints
            for (ni, si) in [(i, 1.0), (j, -1.0)] {
                for (nj, sj) in [(i, 1.0), (j, -1.0)] {
                    let (Some(a_slot), Some(b_slot)) = (self.slot[ni], self.slot[nj]) else {
                        continue;
                    };
                    for a in 0..d {
                        for b in 0..d {
                            let id = if a == b { 1.0 } else { 0.0 };
                            h[(a_slot * d + a, b_slot * d + b)] +=
                                si * sj * (id - ec[a] * ec[b] / (f * f)) / f;
                        }
                    }
                }
            }
        }
        for (v, disk) in self.disks.iter().enumerate() {
            let (Some(disk), Some(s), true) = (disk, self.slot[v], tau > 0.0) else {
                continue;
            };
            let u = pos[v] - disk.center;
            let uc = u.coords();
            let slack = disk.radius * disk.radius - u.norm_sq();
            for a in 0..d {
                g[s * d + a] += tau * 2.0 * uc[a] / slack;
                for b in 0..d {
                    let id = if a == b { 1.0 } else { 0.0 };
                    h[(s * d + a, s * d + b)] +=
                        tau * (2.0 * id / slack + 4.0 * uc[a] * uc[b] / (slack * slack));
                }
            }
        }
        (g, h)
    }

    /// Newton direction, regularizing the Hessian until it factors.
    fn newton_step(g: &DVector<f64>, h: DMatrix<f64>) -> Option<DVector<f64>> {
        let n = g.len();
        let trace = (0..n).map(|i| h[(i, i)].abs()).sum::<f64>().max(1e-300);
        let mut shift = 0.0;
        for _ in 0..30 {
            let mut m = h.clone();
            for i in 0..n {
                m[(i, i)] += shift;
            }
            if let Some(ch) = m.cholesky() {
                return Some(-ch.solve(g));
            }
            shift = if shift == 0.0 {
                1e-14 * trace
            } else {
                shift * 10.0
            };
        }
        None
    }
}

/// Minimizes the total length of `edges` over the free nodes. Nodes
/// `0..terminals.len()` are terminals; the rest are Steiner nodes.
pub(crate) fn minimize_length(
    n_nodes: usize,
    edges: &[(usize, usize)],
    terminals: &[TerminalSpec],
    dim: usize,
    seed: u64,
) -> Outcome {
    let frame = frame_of(terminals, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fixed = vec![None; n_nodes];
    let mut disks = vec![None; n_nodes];
    let mut slot = vec![None; n_nodes];
    let mut n_free = 0;
    let mut start = Vec::new();
    let mut anchor = Point::zero(dim);
    for spec in terminals {
        anchor += frame.to_local(&spec.center()) * (1.0 / terminals.len() as f64);
    }
    for v in 0..n_nodes {
        match terminals.get(v) {
            Some(TerminalSpec::Fixed(p)) => fixed[v] = Some(frame.to_local(p)),
            Some(TerminalSpec::Disk(d)) => {
                let local = Disk {
                    center: frame.to_local(&d.center),
                    radius: d.radius / frame.scale,
                };
                // random start in the inner half of the disk
                let offset =
                    random_unit(&mut rng, dim) * (0.5 * local.radius * rng.random::<f64>());
                start.push(local.center + offset);
                disks[v] = Some(local);
                slot[v] = Some(n_free);
                n_free += 1;
            }
            None => {
                start.push(anchor + random_unit(&mut rng, dim) * (0.05 * rng.random::<f64>()));
                slot[v] = Some(n_free);
                n_free += 1;
            }
        }
    }
    let problem = Problem {
        dim,
        n_nodes,
        edges: edges.to_vec(),
        fixed,
        disks,
        slot,
        n_free,
    };
    let mut x =
        DVector::from_iterator(n_free * dim, start.iter().flat_map(|p| p.coords().to_vec()));
    if n_free == 0 {
        let pos = problem.positions(&x);
        return Outcome {
            coords: pos.iter().map(|p| frame.to_world(p)).collect(),
            converged: true,
        };
    }

    let mut prev_len = f64::INFINITY;
    let mut converged = false;
    let (mut mu, mut tau) = (0.0, 0.0);
    let mut stalled = false;
    for k in 0..STAGES {
        mu = 10f64.powi(-(k + 1));
        tau = 10f64.powi(-(k + 2));
        let status = newton_stage(&problem, &mut x, mu, tau);
        let len = problem.length(&problem.positions(&x));
        converged =
            status != Stage::Failed && (len - prev_len).abs() <= LENGTH_RTOL * len.max(1e-300);
        prev_len = len;
        // one stall can be rounding noise at a kink; a second in a row means
        // the barrier has reached floating-point resolution
        if status == Stage::Stalled && stalled {
            break;
        }
        stalled = status == Stage::Stalled;
    }
    if let Some(polished) = polish(&problem, &x, mu, tau) {
        x = polished;
        converged = true;
    }
    let pos = problem.positions(&x);
    Outcome {
        coords: pos.iter().map(|p| frame.to_world(p)).collect(),
        converged,
    }
}

/// Disk constraints with relative slack below this are treated as active by
/// the polish.
const ACTIVE_RTOL: f64 = 1e-6;

/// Removes the barrier bias: Newton on the optimality system with the active
/// disk constraints as equalities, multipliers started from the barrier
/// estimate `τ / slack`. Returns `None` unless the iteration settles on a
/// feasible point with non-negative multipliers and no longer total length.
fn polish(problem: &Problem, x0: &DVector<f64>, mu: f64, tau: f64) -> Option<DVector<f64>> {
    let d = problem.dim;
    let pos0 = problem.positions(x0);
    let active: Vec<(usize, usize, Disk)> = (0..problem.n_nodes)
        .filter_map(|v| {
            let disk = problem.disks[v]?;
            let slack = disk.radius * disk.radius - pos0[v].dist_sq(&disk.center);
            (slack < ACTIVE_RTOL * disk.radius * disk.radius).then_some((v, problem.slot[v]?, disk))
        })
        .collect();
    if active.is_empty() {
        return None;
    }
    let mut lambda: Vec<f64> = active
        .iter()
        .map(|(v, _, disk)| {
            tau / (disk.radius * disk.radius - pos0[*v].dist_sq(&disk.center))
                .max(f64::MIN_POSITIVE)
        })
        .collect();
    let nv = problem.n_free * d;
    let na = active.len();
    let mut x = x0.clone();
    let mut settled = false;
    let mut prev_len = problem.length(&pos0);
    for it in 0..30 {
        let pos = problem.positions(&x);
        let (g, h) = problem.gradient_hessian(&pos, mu, 0.0);
        let mut k = DMatrix::zeros(nv + na, nv + na);
        k.view_mut((0, 0), (nv, nv)).copy_from(&h);
        let mut rhs = DVector::zeros(nv + na);
        rhs.rows_mut(0, nv).copy_from(&(-&g));
        for (j, (v, s, disk)) in active.iter().enumerate() {
            let w = pos[*v] - disk.center;
            for a in 0..d {
                k[(s * d + a, s * d + a)] += 2.0 * lambda[j];
                k[(nv + j, s * d + a)] = 2.0 * w.coords()[a];
                k[(s * d + a, nv + j)] = 2.0 * w.coords()[a];
            }
            rhs[nv + j] = disk.radius * disk.radius - w.norm_sq();
        }
        let sol = k.lu().solve(&rhs)?;
        if sol.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let dx = sol.rows(0, nv);
        x += dx;
        lambda.copy_from_slice(sol.rows(nv, na).as_slice());
        // weakly curved directions leave rounding-level jitter in x, so the
        // length is the stopping signal
        let len = problem.length(&problem.positions(&x));
        if dx.amax() <= 1e-15 * (1.0 + x.amax())
            || (it >= 2 && (len - prev_len).abs() <= 1e-14 * len)
        {
            settled = true;
            break;
        }
        prev_len = len;
    }
    let pos = problem.positions(&x);
    let feasible = (0..problem.n_nodes).all(|v| match problem.disks[v] {
        Some(disk) => pos[v].dist(&disk.center) <= disk.radius * (1.0 + 1e-12),
        None => true,
    });
    let before = problem.length(&pos0);
    let after = problem.length(&pos);
    let ok = settled
        && feasible
        && lambda.iter().all(|&l| l >= 0.0)
        && after <= before * (1.0 + LENGTH_RTOL);
    ok.then_some(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Converged,
    /// No descent possible in floating point although the decrement is not
    /// negligible.
    Stalled,
    Failed,
}

fn newton_stage(problem: &Problem, x: &mut DVector<f64>, mu: f64, tau: f64) -> Stage {
    for _ in 0..NEWTON_ITERS {
        let pos = problem.positions(x);
        let Some(e0) = problem.energy(&pos, mu, tau) else {
            return Stage::Failed;
        };
        let (g, h) = problem.gradient_hessian(&pos, mu, tau);
        let Some(p) = Problem::newton_step(&g, h) else {
            return Stage::Failed;
        };
        let decrement = -g.dot(&p);
        if !decrement.is_finite() {
            return Stage::Failed;
        }
        if decrement <= 1e-24 + 1e-20 * e0.abs() {
            return Stage::Converged;
        }
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-12 {
            let trial = &*x + &p * t;
            if let Some(e) = problem.energy(&problem.positions(&trial), mu, tau) {
                // a step that leaves the energy unchanged is rounding noise
                if e <= e0 - 1e-4 * t * decrement && e < e0 {
                    *x = trial;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            return if decrement <= 1e-16 * (1.0 + e0.abs()) {
                Stage::Converged
            } else {
                Stage::Stalled
            };
        }
    }
    Stage::Failed
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    loop {
        let c: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let p = Point::from_slice(&c).expect("finite");
        let n = p.norm();
        if n > 1e-3 && n <= 1.0 {
            return p * (1.0 / n);
        }
    }
}

fn frame_of(terminals: &[TerminalSpec], dim: usize) -> Frame {
    let centers: Vec<Point> = terminals.iter().map(|t| t.center()).collect();
    let mut center = Point::zero(dim);
    for c in &centers {
        center += *c * (1.0 / centers.len() as f64);
    }
    let mut diam: f64 = 0.0;
    for (i, a) in terminals.iter().enumerate() {
        for b in &terminals[i + 1..] {
            diam = diam.max(a.center().dist(&b.center()) + a.radius() + b.radius());
        }
        diam = diam.max(2.0 * a.radius());
    }
    Frame {
        center,
        scale: if diam > 0.0 { diam } else { 1.0 },
    }
}

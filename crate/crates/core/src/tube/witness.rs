use serde::Serialize;

use super::curvature::check_simple;
use super::mc::{check_radius, fold_box};
use crate::error::Result;
use crate::geometry::{segment_foot, Point, PolyCurve, TIE_DISTANCE};

/// Candidates kept from the sampling phase for refinement.
const REFINE: usize = 16;
/// Minimum foot separation in units of the resolution `h`.
const SEPARATION_STEPS: f64 = 10.0;

/// A point with two distinct nearest points on a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleNearestWitness {
    pub p: Point,
    pub t1: f64,
    pub t2: f64,
    pub common_distance: f64,
}

impl DoubleNearestWitness {
    pub fn separation(&self) -> f64 {
        self.t2 - self.t1
    }
}

#[derive(Debug, Clone, Copy)]
struct LocalMin {
    dist: f64,
    arc: f64,
}

/// Evaluates distance local minima along a curve.
pub(crate) struct Feet<'a> {
    curve: &'a PolyCurve,
    closed: bool,
    min_sep: f64,
}

impl<'a> Feet<'a> {
    pub(crate) fn new(curve: &'a PolyCurve) -> Self {
        let h = curve.max_segment_length().min(curve.length() / 1000.0);
        Feet {
            curve,
            closed: curve.is_closed(),
            min_sep: SEPARATION_STEPS * h,
        }
    }

    fn separation(&self, s: f64, t: f64) -> f64 {
        let d = (s - t).abs();
        if self.closed {
            d.min(self.curve.length() - d)
        } else {
            d
        }
    }

    /// Strict local minima of `t ↦ |p − γ(t)|`.
    fn local_minima(&self, p: &Point) -> Vec<LocalMin> {
        let m = self.curve.segment_count();
        let cum = self.curve.cumulative();
        let feet: Vec<(f64, f64)> = (0..m)
            .map(|i| {
                let (a, b) = self.curve.segment(i);
                segment_foot(p, &a, &b)
            })
            .collect();
        let mut out = Vec::new();
        for (i, &(d, t)) in feet.iter().enumerate() {
            if t > 0.0 && t < 1.0 {
                out.push(LocalMin {
                    dist: d,
                    arc: self.curve.arc_param(i, t),
                });
            }
            // vertex at the end of segment i
            if t == 1.0 {
                let next = if i + 1 < m {
                    Some(i + 1)
                } else if self.closed {
                    Some(0)
                } else {
                    None
                };
                if next.is_none_or(|j| feet[j].1 == 0.0) {
                    out.push(LocalMin {
                        dist: d,
                        arc: cum[i + 1],
                    });
                }
            }
        }
        if !self.closed && feet[0].1 == 0.0 {
            out.push(LocalMin {
                dist: feet[0].0,
                arc: 0.0,
            });
        }
        out
    }

    /// Gap between the nearest distance and the nearest well-separated local
    /// minimum, with the two arc parameters. `None` if no separated minimum.
    fn gap(&self, p: &Point) -> Option<(f64, f64, f64, f64)> {
        let mins = self.local_minima(p);
        let best = mins.iter().min_by(|a, b| a.dist.total_cmp(&b.dist))?;
        let other = mins
            .iter()
            .filter(|m| self.separation(m.arc, best.arc) >= self.min_sep)
            .min_by(|a, b| a.dist.total_cmp(&b.dist))?;
        Some((other.dist - best.dist, best.dist, best.arc, other.arc))
    }

    fn objective(&self, p: &Point, r: f64) -> f64 {
        match self.gap(p) {
            Some((g, d, _, _)) if d < r => g,
            Some((g, d, _, _)) => 1.0 + g + (d - r),
            None => f64::INFINITY,
        }
    }
}

/// Searches for a point within distance `r` of the curve that has two nearest
/// points separated by at least `10 h` in arc length.
///
/// Candidates come from `samples` uniform points of the tube's bounding box;
/// the best ones are refined with Nelder–Mead on the distance gap followed by
/// a golden-section polish. Returns the accepted witness with the largest
/// foot separation.
pub fn find_double_nearest_witness(
    curve: &PolyCurve,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<Option<DoubleNearestWitness>> {
    check_radius(r)?;
    check_simple(curve)?;
    let feet = Feet::new(curve);
    let bbox = curve.to_network().bounds().inflate(r);

    let chunks = fold_box(
        &bbox,
        samples,
        seed,
        Vec::new,
        |acc: &mut Vec<(f64, Point)>, p| {
            if let Some((g, d, _, _)) = feet.gap(&p) {
                if d < r {
                    acc.push((g, p));
                    if acc.len() > 4 * REFINE {
                        keep_best(acc);
                    }
                }
            }
        },
    );
    let mut cands: Vec<(f64, Point)> = chunks.into_iter().flatten().collect();
    keep_best(&mut cands);

    let mut best: Option<DoubleNearestWitness> = None;
    for (_, start) in cands {
        let p = refine(&feet, start, r);
        let Some((g, d, s, t)) = feet.gap(&p) else {
            continue;
        };
        if g > TIE_DISTANCE || d >= r {
            continue;
        }
        let w = DoubleNearestWitness {
            p,
            t1: s.min(t),
            t2: s.max(t),
            common_distance: d,
        };
        if best.is_none_or(|b| w.separation() > b.separation()) {
            best = Some(w);
        }
    }
    Ok(best)
}

fn keep_best(cands: &mut Vec<(f64, Point)>) {
    // stable sort keeps chunk order among equal gaps
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    cands.truncate(REFINE);
}

fn refine(feet: &Feet, start: Point, r: f64) -> Point {
    let f = |p: &Point| feet.objective(p, r);
    let scale = feet
        .gap(&start)
        .map_or(feet.min_sep, |g| g.0.max(feet.min_sep / 10.0));
    let p = nelder_mead(&f, start, scale, 2000);
    golden_polish(feet, p, r)
}

/// Line search along the direction joining the two feet, where the gap is a
/// V-shaped function of the offset.
fn golden_polish(feet: &Feet, p: Point, r: f64) -> Point {
    let Some((g, _, s, t)) = feet.gap(&p) else {
        return p;
    };
    let Some(dir) = (feet.curve.point_at(t) - feet.curve.point_at(s)).normalized() else {
        return p;
    };
    let f = |x: f64| feet.objective(&(p + dir * x), r);
    let (mut lo, mut hi) = (-2.0 * g, 2.0 * g);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    while hi - lo > 1e-12 * (1.0 + p.norm()) {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if f(a) <= f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let q = p + dir * (0.5 * (lo + hi));
    if f(0.5 * (lo + hi)) <= g {
        q
    } else {
        p
    }
}

/// Plain Nelder–Mead in the point's own dimension.
pub(crate) fn nelder_mead(
    f: &impl Fn(&Point) -> f64,
    start: Point,
    scale: f64,
    max_iter: usize,
) -> Point {
    let dim = start.dim();
    let mut simplex: Vec<(Point, f64)> = vec![(start, f(&start))];
    for k in 0..dim {
        let q = start + unit(dim, k) * scale;
        simplex.push((q, f(&q)));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let size = simplex[1..]
            .iter()
            .map(|(q, _)| q.dist(&simplex[0].0))
            .fold(0.0, f64::max);
        if size < 1e-14 * (1.0 + simplex[0].0.norm()) || simplex[0].1 == 0.0 {
            break;
        }
        let worst = simplex[dim];
        let mut centroid = Point::zero(dim);
        for (q, _) in &simplex[..dim] {
            centroid += *q * (1.0 / dim as f64);
        }
        let reflect = centroid + (centroid - worst.0);
        let fr = f(&reflect);
        if fr < simplex[0].1 {
            let expand = centroid + (reflect - centroid) * 2.0;
            let fe = f(&expand);
            simplex[dim] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflect, fr);
        } else {
            let contract = if fr < worst.1 {
                centroid + (reflect - centroid) * 0.5
            } else {
                centroid + (worst.0 - centroid) * 0.5
            };
            let fc = f(&contract);
            if fc < worst.1.min(fr) {
                simplex[dim] = (contract, fc);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    v.0 = best + (v.0 - best) * 0.5;
                    v.1 = f(&v.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0].0
}

fn unit(dim: usize, k: usize) -> Point {
    let mut c = [0.0; 3];
    c[k] = 1.0;
    Point::from_slice(&c[..dim]).expect("finite")
}

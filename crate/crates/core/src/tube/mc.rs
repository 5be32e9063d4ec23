use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::{Aabb, EmbeddedNetwork, Point};

/// Samples per RNG stream. Work is split on these boundaries regardless of
/// the number of threads, which keeps results bit-identical.
pub(crate) const CHUNK: usize = 16_384;

pub const MIN_SAMPLES: usize = 10_000;

/// Monte Carlo estimate with a 3σ half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub ci_halfwidth: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (self.estimate - value).abs() <= self.ci_halfwidth
    }
}

pub(crate) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub(crate) fn random_point(rng: &mut impl Rng, bbox: &Aabb) -> Point {
    let dim = bbox.dim();
    let mut u = [0.0; 3];
    for v in u.iter_mut().take(dim) {
        *v = rng.random::<f64>();
    }
    bbox.lerp(u)
}

/// Folds `f` over `samples` uniform points of `bbox`. Chunks run in parallel;
/// the per-chunk accumulators are returned in chunk order.
pub(crate) fn fold_box<T, I, F>(bbox: &Aabb, samples: usize, seed: u64, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, Point) + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut acc = init();
            for _ in 0..n {
                f(&mut acc, random_point(&mut rng, bbox));
            }
            acc
        })
        .collect()
}

pub(crate) fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(invalid(
            "samples",
            format!("at least {MIN_SAMPLES} required, got {samples}"),
        ));
    }
    Ok(())
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(
            "R",
            format!("must be positive and finite, got {r}"),
        ));
    }
    Ok(())
}

/// Sampling box for `B_R(S)`: the bounding box of `S` inflated by `R`.
pub fn tube_box(network: &EmbeddedNetwork, r: f64) -> Aabb {
    network.bounds().inflate(r)
}

/// Monte Carlo estimate of the volume of `B_R(S)` (closed neighbourhood).
pub fn tube_volume_mc(
    network: &EmbeddedNetwork,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_radius(r)?;
    check_samples(samples)?;
    let bbox = tube_box(network, r);
    let index = network.segment_index();
    let hits: usize = fold_box(
        &bbox,
        samples,
        seed,
        || 0usize,
        |acc, p| {
            if index.any_within(&p, r) {
                *acc += 1;
            }
        },
    )
    .into_iter()
    .sum();
    Ok(binomial_estimate(hits, samples, bbox.volume()))
}

pub(crate) fn binomial_estimate(hits: usize, samples: usize, box_volume: f64) -> McEstimate {
    let n = samples as f64;
    let p = hits as f64 / n;
    McEstimate {
        estimate: box_volume * p,
        ci_halfwidth: 3.0 * box_volume * (p * (1.0 - p) / n).sqrt(),
        samples,
    }
}

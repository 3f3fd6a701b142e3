//! Seeded random instances and lotteries.
//!
//! Each trial draws from its own ChaCha stream (`seed`, `trial`), so results
//! do not depend on how trials are scheduled across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Dim, Point};
use crate::model::{Atom, Instance, Lottery};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Source of random instances for the estimators.
pub trait InstanceSampler: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Instance;
}

impl<F> InstanceSampler for F
where
    F: Fn(&mut ChaCha8Rng) -> Instance + Sync,
{
    fn sample(&self, rng: &mut ChaCha8Rng) -> Instance {
        self(rng)
    }
}

/// Uniform reports in a randomly placed, randomly scaled square (or
/// interval): center in `[-10, 10]^d`, half-width `10^u` with `u` uniform in
/// `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomInstances {
    pub dim: Dim,
    pub min_agents: usize,
    pub max_agents: usize,
}

impl RandomInstances {
    pub fn line(min_agents: usize, max_agents: usize) -> Self {
        RandomInstances { dim: Dim::Line, min_agents, max_agents }
    }

    pub fn two_agent_line() -> Self {
        Self::line(2, 2)
    }

    pub fn plane(min_agents: usize, max_agents: usize) -> Self {
        RandomInstances { dim: Dim::Plane, min_agents, max_agents }
    }
}

impl InstanceSampler for RandomInstances {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Instance {
        let n = rng.gen_range(self.min_agents.max(1)..=self.max_agents.max(self.min_agents.max(1)));
        let scale = 10f64.powf(rng.gen_range(-1.0..=1.0));
        let (cx, cy) = (rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0));
        let points = (0..n)
            .map(|_| match self.dim {
                Dim::Line => Point::line(cx + scale * rng.gen_range(-1.0..=1.0)),
                Dim::Plane => {
                    Point::plane(cx + scale * rng.gen_range(-1.0..=1.0), cy + scale * rng.gen_range(-1.0..=1.0))
                }
            })
            .collect();
        Instance::new(self.dim, points).expect("finite sampled reports")
    }
}

/// A 1-D lottery with 1 to `max_support` atoms uniform in `[lo, hi]` and
/// weights from a normalised positive sample.
pub fn random_line_lottery(rng: &mut ChaCha8Rng, lo: f64, hi: f64, max_support: usize) -> Lottery {
    let k = rng.gen_range(1..=max_support.max(1));
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..=1.0)).collect();
    let total: f64 = weights.iter().sum();
    let atoms = weights
        .iter()
        .map(|w| Atom { point: Point::line(rng.gen_range(lo..=hi)), prob: w / total })
        .collect();
    Lottery::new(atoms).expect("normalised weights")
}

/// All subsets of `0..n` of size 2 and 3, in lexicographic order.
pub fn small_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(vec![i, j]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(vec![i, j, k]);
            }
        }
    }
    out
}

/// `count` random subsets of `0..n` with size 2 or 3.
pub fn sampled_subsets(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vec<usize>> {
    (0..count)
        .map(|_| {
            let size = if n >= 3 { rng.gen_range(2..=3) } else { 2 };
            rand::seq::index::sample(rng, n, size).into_vec()
        })
        .collect()
}

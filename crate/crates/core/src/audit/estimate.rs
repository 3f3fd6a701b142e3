use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::mechanism::{Mechanism, MixedDelta, PredictionKind};
use super::truth::{box_grid, scaled_box};
use crate::error::{Error, Result};
use crate::geometry::{Dim, Point};
use crate::line::MixtureParam;
use crate::model::{self, Instance, Prediction};
use crate::sampling::{self, trial_rng, InstanceSampler, RandomInstances};

/// Worst ratio seen by an estimator and where it occurred.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub max_ratio: f64,
    pub evaluations: usize,
    pub worst_instance: Instance,
    pub worst_prediction: Prediction,
}

struct Worst {
    ratio: f64,
    evals: usize,
    inst: Instance,
    pred: Prediction,
}

/// Larger ratio wins; ties keep the earlier trial, so the reduction does not
/// depend on scheduling.
fn worse(a: (usize, Worst), b: (usize, Worst)) -> (usize, Worst) {
    let evals = a.1.evals + b.1.evals;
    let (t, mut w) = if b.1.ratio > a.1.ratio || (b.1.ratio == a.1.ratio && b.0 < a.0) { b } else { a };
    w.evals = evals;
    (t, w)
}

fn ratio_against(mech: &(impl Mechanism + ?Sized), inst: &Instance, pred: &Prediction, opt: f64) -> Result<f64> {
    let l = mech.run(inst, pred)?;
    Ok(model::ratio_of(model::egalitarian_cost(&l, inst)?, opt))
}

fn run_trials<M, S, P>(mech: &M, sampler: &S, trials: usize, seed: u64, preds: P) -> Result<RatioEstimate>
where
    M: Mechanism + ?Sized,
    S: InstanceSampler + ?Sized,
    P: Fn(&Instance, &mut ChaCha8Rng) -> Result<Vec<Prediction>> + Sync,
{
    if trials == 0 {
        return Err(Error::Empty);
    }
    let (_, w) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let inst = sampler.sample(&mut rng);
            let opt = model::optimal_solution(&inst).cost;
            let mut worst = Worst { ratio: f64::NEG_INFINITY, evals: 0, inst: inst.clone(), pred: Prediction::None };
            for pred in preds(&inst, &mut rng)? {
                let r = ratio_against(mech, &inst, &pred, opt)?;
                worst.evals += 1;
                if r > worst.ratio {
                    worst.ratio = r;
                    worst.pred = pred;
                }
            }
            Ok::<_, Error>((t, worst))
        })
        .try_reduce_with(|a, b| Ok(worse(a, b)))
        .expect("at least one trial")?;
    Ok(RatioEstimate { max_ratio: w.ratio, evaluations: w.evals, worst_instance: w.inst, worst_prediction: w.pred })
}

/// Max approximation ratio over `trials` sampled instances with the
/// mechanism's accurate prediction.
pub fn estimate_consistency<M, S>(mech: &M, sampler: &S, trials: usize, seed: u64) -> Result<RatioEstimate>
where
    M: Mechanism + ?Sized,
    S: InstanceSampler + ?Sized,
{
    run_trials(mech, sampler, trials, seed, |inst, _| Ok(vec![mech.accurate_prediction(inst)?]))
}

/// Generates adversarial predictions for an instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Adversary {
    /// Grid points per axis for predicted facilities.
    pub facility_grid: usize,
    /// Scaling of the bounding box the grid covers.
    pub scale: f64,
    /// Enumerate every 2- and 3-subset of ids up to this many agents.
    pub max_exhaustive_agents: usize,
    /// Number of sampled id subsets above that size.
    pub sampled_subsets: usize,
}

impl Default for Adversary {
    fn default() -> Self {
        Adversary { facility_grid: 101, scale: 3.0, max_exhaustive_agents: 8, sampled_subsets: 200 }
    }
}

/// Distance of the clamping probes, relative to the instance span.
const FAR: f64 = 1e6;

impl Adversary {
    /// Predicted facilities: the box grid plus far probes that clamp to the
    /// box edges and corners.
    pub fn facilities(&self, inst: &Instance) -> Vec<Point> {
        let mut out = box_grid(inst, self.scale, self.facility_grid);
        let ((cx, cy), (hx, hy)) = scaled_box(inst, self.scale);
        let r = FAR * hx.max(hy);
        match inst.dim() {
            Dim::Line => out.extend([Point::line(cx - r), Point::line(cx + r)]),
            Dim::Plane => {
                for k in 0..8 {
                    let t = std::f64::consts::FRAC_PI_4 * k as f64;
                    out.push(Point::plane(cx + r * t.cos(), cy + r * t.sin()));
                }
            }
        }
        out
    }

    pub fn predictions(&self, kind: PredictionKind, inst: &Instance, rng: &mut ChaCha8Rng) -> Vec<Prediction> {
        match kind {
            PredictionKind::Facility => {
                self.facilities(inst).into_iter().map(|point| Prediction::OptimalFacility { point }).collect()
            }
            PredictionKind::Full => {
                // Translate the true profile so that its optimum lands on each
                // adversarial facility.
                let o = model::optimal_solution(inst).facility;
                self.facilities(inst)
                    .into_iter()
                    .map(|f| Prediction::FullLocations { points: inst.points().iter().map(|p| *p + (f - o)).collect() })
                    .collect()
            }
            PredictionKind::ExtremeIds => {
                let n = inst.n();
                if n < 2 {
                    return vec![Prediction::ExtremeIds { ids: vec![0] }];
                }
                let subsets = if n <= self.max_exhaustive_agents {
                    sampling::small_subsets(n)
                } else {
                    let mut s = sampling::sampled_subsets(rng, n, self.sampled_subsets);
                    s.push(model::extreme_ids(inst, model::DEFAULT_TIE_TOL));
                    s
                };
                subsets.into_iter().map(|ids| Prediction::ExtremeIds { ids }).collect()
            }
            PredictionKind::None => vec![Prediction::None],
        }
    }
}

/// Max approximation ratio over sampled instances and every adversarial
/// prediction for each.
pub fn estimate_robustness<M, S>(
    mech: &M,
    sampler: &S,
    adversary: &Adversary,
    trials: usize,
    seed: u64,
) -> Result<RatioEstimate>
where
    M: Mechanism + ?Sized,
    S: InstanceSampler + ?Sized,
{
    run_trials(mech, sampler, trials, seed, |inst, rng| Ok(adversary.predictions(mech.prediction_kind(), inst, rng)))
}

/// One point of the consistency/robustness frontier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrontierPoint {
    pub delta: f64,
    pub consistency: f64,
    pub robustness: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub trials: usize,
    pub seed: u64,
    pub adversary: Adversary,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { trials: 200, seed: 42, adversary: Adversary::default() }
    }
}

/// Consistency and robustness of the LRM/MinMaxP mixture for each `delta`,
/// on random two-agent line instances.
pub fn tradeoff_sweep(deltas: &[f64], cfg: &SweepConfig) -> Result<Vec<FrontierPoint>> {
    let sampler = RandomInstances::two_agent_line();
    deltas
        .iter()
        .map(|&delta| {
            let mech = MixedDelta(MixtureParam::new(delta)?);
            Ok(FrontierPoint {
                delta,
                consistency: estimate_consistency(&mech, &sampler, cfg.trials, cfg.seed)?.max_ratio,
                robustness: estimate_robustness(&mech, &sampler, &cfg.adversary, cfg.trials, cfg.seed)?.max_ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::mechanism::{CentroidExtremes, Lrm, MinMaxP, MinimumBoundingBox};

    #[test]
    fn lrm_is_exactly_three_halves_on_two_agents() {
        let e = estimate_consistency(&Lrm, &RandomInstances::two_agent_line(), 50, 7).unwrap();
        assert!((e.max_ratio - 1.5).abs() < 1e-12);
        assert_eq!(e.evaluations, 50);
    }

    #[test]
    fn minmaxp_frontier_ends() {
        let s = RandomInstances::line(2, 5);
        assert!((estimate_consistency(&MinMaxP, &s, 100, 1).unwrap().max_ratio - 1.0).abs() < 1e-12);
        let r = estimate_robustness(&MinMaxP, &s, &Adversary::default(), 50, 1).unwrap();
        assert!((r.max_ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn estimates_do_not_depend_on_thread_count() {
        let s = RandomInstances::plane(2, 7);
        let a = estimate_robustness(&CentroidExtremes, &s, &Adversary::default(), 40, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| estimate_robustness(&CentroidExtremes, &s, &Adversary::default(), 40, 9).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn far_probes_clamp_to_corners() {
        let inst = Instance::plane(&[(0.0, 0.0), (2.0, 1.0)]).unwrap();
        let f = Adversary::default().facilities(&inst);
        assert_eq!(f.len(), 101 * 101 + 8);
        let corner = MinimumBoundingBox
            .run(&inst, &Prediction::OptimalFacility { point: f[f.len() - 7] })
            .unwrap()
            .as_point()
            .unwrap();
        assert_eq!(corner, Point::plane(2.0, 1.0));
    }

    #[test]
    fn sweep_frontier_identity() {
        let cfg = SweepConfig { trials: 20, ..SweepConfig::default() };
        for p in tradeoff_sweep(&[0.0, 0.25, 0.5], &cfg).unwrap() {
            assert!((p.consistency - (1.0 + p.delta)).abs() < 1e-9);
            assert!((p.robustness - (2.0 - p.delta)).abs() < 1e-9);
        }
        assert!(tradeoff_sweep(&[0.6], &cfg).is_err());
    }
}

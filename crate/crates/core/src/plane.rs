//! Two-dimensional mechanisms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Dim, Point};
use crate::line::lower_median;
use crate::model::{self, Atom, Instance, Lottery, DEFAULT_TIE_TOL};

/// Constant phantom points mixed into the coordinatewise median.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GcmConfig {
    pub phantoms: Vec<Point>,
}

impl GcmConfig {
    pub fn new(phantoms: Vec<Point>) -> Result<GcmConfig> {
        for p in &phantoms {
            if p.dim() != Dim::Plane {
                return Err(Error::DimensionMismatch { expected: 2, found: p.dim().len() });
            }
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(GcmConfig { phantoms })
    }
}

/// Predicted ids `<e_1, ..., e_k>` of the extreme agents, `k >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremePrediction {
    ids: Vec<usize>,
}

impl ExtremePrediction {
    pub fn new(ids: Vec<usize>) -> Result<ExtremePrediction> {
        if ids.len() < 2 {
            return Err(Error::TooFewIds(ids.len()));
        }
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(Error::DuplicateId(*id));
            }
        }
        Ok(ExtremePrediction { ids })
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn k(&self) -> usize {
        self.ids.len()
    }
}

/// Generalized coordinatewise median: each coordinate is the lower median of
/// that coordinate over the reports and the phantoms.
pub fn gcm(inst: &Instance, cfg: &GcmConfig) -> Result<Lottery> {
    inst.require_dim(Dim::Plane)?;
    let all = || inst.points().iter().chain(&cfg.phantoms);
    let mut xs: Vec<f64> = all().map(Point::x).collect();
    let mut ys: Vec<f64> = all().map(Point::y).collect();
    Ok(Lottery::degenerate(Point::plane(lower_median(&mut xs), lower_median(&mut ys))))
}

/// MinMaxP applied to each coordinate: the prediction clamped to the
/// bounding box of the reports.
pub fn minimum_bounding_box(inst: &Instance, f_star: &Point) -> Result<Lottery> {
    inst.require_dim(Dim::Plane)?;
    if f_star.dim() != Dim::Plane {
        return Err(Error::DimensionMismatch { expected: 2, found: f_star.dim().len() });
    }
    let (lo, hi) = inst.bounding_box();
    Ok(Lottery::degenerate(Point::plane(f_star.x().clamp(lo.0, hi.0), f_star.y().clamp(lo.1, hi.1))))
}

fn centroid_lottery(points: &[Point]) -> Result<Lottery> {
    let k = points.len() as f64;
    let g = geometry::centroid(points)?;
    let mut atoms = Vec::with_capacity(points.len() + 1);
    atoms.push(Atom { point: g, prob: 0.5 });
    atoms.extend(points.iter().map(|&p| Atom { point: p, prob: 0.5 / k }));
    Lottery::new(atoms)
}

/// Centroid of the predicted extreme agents with probability 1/2, each of
/// their reported locations with probability `1/(2k)`.
///
/// Only reported locations enter the output; the prediction only selects
/// which agents count.
pub fn centroid_extremes(inst: &Instance, pred: &ExtremePrediction) -> Result<Lottery> {
    inst.require_dim(Dim::Plane)?;
    let pts = pred.ids().iter().map(|&i| inst.point(i).copied()).collect::<Result<Vec<_>>>()?;
    centroid_lottery(&pts)
}

/// Ids of the extreme agents of `inst` as an [`ExtremePrediction`].
///
/// A single-agent instance has one extreme agent and no valid prediction.
pub fn accurate_extreme_prediction(inst: &Instance) -> Result<ExtremePrediction> {
    ExtremePrediction::new(model::extreme_ids(inst, DEFAULT_TIE_TOL))
}

/// Ids on the enclosing circle of a (perturbed) profile, read with
/// [`model::SUPPORT_TIE_TOL`]; falls back to the default tolerance if that
/// finds fewer than two.
pub fn support_extreme_prediction(inst: &Instance) -> Result<ExtremePrediction> {
    let ids = model::extreme_ids(inst, model::SUPPORT_TIE_TOL);
    if ids.len() >= 2 {
        ExtremePrediction::new(ids)
    } else {
        accurate_extreme_prediction(inst)
    }
}

/// `1e-7` times the instance diameter (or `1e-7` for a unanimous profile).
pub fn default_epsilon(inst: &Instance) -> f64 {
    let d = inst.diameter();
    if d > 0.0 {
        1e-7 * d
    } else {
        1e-7
    }
}

/// Requests the prediction on a perturbed copy of the reports, then runs
/// [`centroid_extremes`] on the original reports.
pub fn centroid_extremes_perturbed<O>(inst: &Instance, epsilon: f64, seed: u64, oracle: O) -> Result<Lottery>
where
    O: Fn(&Instance) -> Result<ExtremePrediction>,
{
    let perturbed = model::perturb(inst, epsilon, seed)?;
    let pred = oracle(&perturbed)?;
    centroid_extremes(inst, &pred)
}

/// Centroid mechanism over all agents: `2 - 1/n` approximation.
pub fn centroid_all(inst: &Instance) -> Result<Lottery> {
    inst.require_dim(Dim::Plane)?;
    centroid_lottery(inst.points())
}

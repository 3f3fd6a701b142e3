use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Dim, Point};
use crate::line::{self, MixtureParam};
use crate::model::{self, Instance, Lottery, Prediction, DEFAULT_TIE_TOL};
use crate::plane::{self, ExtremePrediction, GcmConfig};

/// Which prediction a mechanism consumes natively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    Full,
    Facility,
    ExtremeIds,
    None,
}

/// A map `(reports, prediction) -> lottery`. Any randomness lives in the
/// returned lottery, so `run` is deterministic.
pub trait Mechanism: Send + Sync {
    fn id(&self) -> String;

    /// Dimension of the instances the mechanism accepts.
    fn dim(&self) -> Dim;

    fn prediction_kind(&self) -> PredictionKind;

    fn run(&self, inst: &Instance, pred: &Prediction) -> Result<Lottery>;

    /// The prediction that counts as correct for `inst`.
    fn accurate_prediction(&self, inst: &Instance) -> Result<Prediction> {
        accurate_prediction(inst, self.prediction_kind())
    }
}

pub fn accurate_prediction(inst: &Instance, kind: PredictionKind) -> Result<Prediction> {
    Ok(match kind {
        PredictionKind::Full => Prediction::FullLocations { points: inst.points().to_vec() },
        PredictionKind::Facility => {
            Prediction::OptimalFacility { point: model::optimal_solution(inst).facility }
        }
        PredictionKind::ExtremeIds => Prediction::ExtremeIds { ids: model::extreme_ids(inst, DEFAULT_TIE_TOL) },
        PredictionKind::None => Prediction::None,
    })
}

/// Predicted optimal facility: given directly, or the optimum of the
/// predicted profile.
fn facility_of(id: &str, inst: &Instance, pred: &Prediction) -> Result<Point> {
    pred.validate(inst)?;
    match pred {
        Prediction::OptimalFacility { point } => Ok(*point),
        Prediction::FullLocations { points } => {
            Ok(model::optimal_solution(&Instance::new(inst.dim(), points.clone())?).facility)
        }
        _ => Err(Error::MissingPrediction { mechanism: id.to_string(), expected: "facility or full-location" }),
    }
}

fn require(inst: &Instance, dim: Dim) -> Result<()> {
    inst.require_dim(dim)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MedianLine;

impl Mechanism for MedianLine {
    fn id(&self) -> String {
        "median".into()
    }
    fn dim(&self) -> Dim {
        Dim::Line
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::None
    }
    fn run(&self, inst: &Instance, _: &Prediction) -> Result<Lottery> {
        line::median_line(inst)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Lrm;

impl Mechanism for Lrm {
    fn id(&self) -> String {
        "lrm".into()
    }
    fn dim(&self) -> Dim {
        Dim::Line
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::None
    }
    fn run(&self, inst: &Instance, _: &Prediction) -> Result<Lottery> {
        line::lrm(inst)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MinMaxP;

impl Mechanism for MinMaxP {
    fn id(&self) -> String {
        "minmaxp".into()
    }
    fn dim(&self) -> Dim {
        Dim::Line
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::Facility
    }
    fn run(&self, inst: &Instance, pred: &Prediction) -> Result<Lottery> {
        require(inst, Dim::Line)?;
        line::minmaxp(inst, &facility_of("minmaxp", inst, pred)?)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MixedDelta(pub MixtureParam);

impl Mechanism for MixedDelta {
    fn id(&self) -> String {
        format!("mixed:{}", self.0.delta())
    }
    fn dim(&self) -> Dim {
        Dim::Line
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::Facility
    }
    fn run(&self, inst: &Instance, pred: &Prediction) -> Result<Lottery> {
        require(inst, Dim::Line)?;
        line::mixed_delta(inst, &facility_of(&self.id(), inst, pred)?, self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Gcm {
    pub label: String,
    pub config: GcmConfig,
}

impl Mechanism for Gcm {
    fn id(&self) -> String {
        format!("gcm:{}", self.label)
    }
    fn dim(&self) -> Dim {
        Dim::Plane
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::None
    }
    fn run(&self, inst: &Instance, _: &Prediction) -> Result<Lottery> {
        plane::gcm(inst, &self.config)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MinimumBoundingBox;

impl Mechanism for MinimumBoundingBox {
    fn id(&self) -> String {
        "mbb".into()
    }
    fn dim(&self) -> Dim {
        Dim::Plane
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::Facility
    }
    fn run(&self, inst: &Instance, pred: &Prediction) -> Result<Lottery> {
        require(inst, Dim::Plane)?;
        plane::minimum_bounding_box(inst, &facility_of("mbb", inst, pred)?)
    }
}

/// Reads an extreme-id prediction; `None` when the profile has a single
/// agent, which is its own optimum.
fn extreme_ids_of(id: &str, inst: &Instance, pred: &Prediction) -> Result<Option<ExtremePrediction>> {
    pred.validate(inst)?;
    let ids = match pred {
        Prediction::ExtremeIds { ids } => ids.clone(),
        Prediction::FullLocations { points } => {
            model::extreme_ids(&Instance::new(inst.dim(), points.clone())?, DEFAULT_TIE_TOL)
        }
        _ => return Err(Error::MissingPrediction { mechanism: id.to_string(), expected: "extreme-id" }),
    };
    if inst.n() == 1 {
        return Ok(None);
    }
    ExtremePrediction::new(ids).map(Some)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CentroidExtremes;

impl Mechanism for CentroidExtremes {
    fn id(&self) -> String {
        "centroid-ext".into()
    }
    fn dim(&self) -> Dim {
        Dim::Plane
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::ExtremeIds
    }
    fn run(&self, inst: &Instance, pred: &Prediction) -> Result<Lottery> {
        require(inst, Dim::Plane)?;
        match extreme_ids_of("centroid-ext", inst, pred)? {
            Some(e) => plane::centroid_extremes(inst, &e),
            None => Ok(Lottery::degenerate(inst.points()[0])),
        }
    }
}

/// Centroid on extreme agents with the prediction taken on a perturbed copy
/// of the reports.
///
/// A supplied extreme-id prediction is read as the answer for the perturbed
/// profile; with [`Prediction::None`] the support of the perturbed profile's
/// enclosing circle is used.
#[derive(Clone, Copy, Debug)]
pub struct CentroidExtremesPerturbed {
    /// Perturbation radius; `None` means `1e-7` times the diameter.
    pub epsilon: Option<f64>,
    pub seed: u64,
}

impl CentroidExtremesPerturbed {
    fn epsilon_for(&self, inst: &Instance) -> f64 {
        self.epsilon.unwrap_or_else(|| plane::default_epsilon(inst))
    }
}

impl Mechanism for CentroidExtremesPerturbed {
    fn id(&self) -> String {
        match self.epsilon {
            Some(e) => format!("centroid-ext-perturbed:{e}"),
            None => "centroid-ext-perturbed".into(),
        }
    }
    fn dim(&self) -> Dim {
        Dim::Plane
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::ExtremeIds
    }
    fn run(&self, inst: &Instance, pred: &Prediction) -> Result<Lottery> {
        require(inst, Dim::Plane)?;
        if inst.n() == 1 {
            return Ok(Lottery::degenerate(inst.points()[0]));
        }
        let eps = self.epsilon_for(inst);
        match pred {
            Prediction::None => {
                plane::centroid_extremes_perturbed(inst, eps, self.seed, plane::support_extreme_prediction)
            }
            other => {
                let supplied = extreme_ids_of(&self.id(), inst, other)?;
                plane::centroid_extremes_perturbed(inst, eps, self.seed, |_| {
                    supplied.clone().ok_or(Error::TooFewIds(1))
                })
            }
        }
    }
    fn accurate_prediction(&self, inst: &Instance) -> Result<Prediction> {
        if inst.n() == 1 {
            return Ok(Prediction::ExtremeIds { ids: vec![0] });
        }
        let perturbed = model::perturb(inst, self.epsilon_for(inst), self.seed)?;
        Ok(Prediction::ExtremeIds { ids: plane::support_extreme_prediction(&perturbed)?.ids().to_vec() })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CentroidAll;

impl Mechanism for CentroidAll {
    fn id(&self) -> String {
        "centroid-all".into()
    }
    fn dim(&self) -> Dim {
        Dim::Plane
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::None
    }
    fn run(&self, inst: &Instance, _: &Prediction) -> Result<Lottery> {
        plane::centroid_all(inst)
    }
}

/// Sanity fixture that is *not* truthful: returns `3/4 x_L + 1/4 x_R`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BrokenWeightedPoint;

impl Mechanism for BrokenWeightedPoint {
    fn id(&self) -> String {
        "broken-weighted".into()
    }
    fn dim(&self) -> Dim {
        Dim::Line
    }
    fn prediction_kind(&self) -> PredictionKind {
        PredictionKind::None
    }
    fn run(&self, inst: &Instance, _: &Prediction) -> Result<Lottery> {
        let (lo, hi) = inst.extremes()?;
        Ok(Lottery::degenerate(Point::line(0.75 * lo + 0.25 * hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facility_from_full_locations_is_their_optimum() {
        let inst = Instance::line(&[0.0, 2.0]).unwrap();
        let pred = Prediction::FullLocations { points: vec![Point::line(0.0), Point::line(6.0)] };
        assert_eq!(MinMaxP.run(&inst, &pred).unwrap(), Lottery::degenerate(Point::line(2.0)));
        assert!(matches!(MinMaxP.run(&inst, &Prediction::None), Err(Error::MissingPrediction { .. })));
    }

    #[test]
    fn dimension_is_enforced() {
        let plane = Instance::plane(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(Lrm.run(&plane, &Prediction::None).is_err());
        let line = Instance::line(&[0.0, 1.0]).unwrap();
        assert!(CentroidAll.run(&line, &Prediction::None).is_err());
    }

    #[test]
    fn centroid_extremes_single_agent_is_unanimous() {
        let one = Instance::plane(&[(1.0, 2.0)]).unwrap();
        let pred = CentroidExtremes.accurate_prediction(&one).unwrap();
        assert_eq!(CentroidExtremes.run(&one, &pred).unwrap(), Lottery::degenerate(Point::plane(1.0, 2.0)));
    }

    #[test]
    fn perturbed_mechanism_accepts_supplied_ids() {
        let inst = Instance::plane(&[(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)]).unwrap();
        let m = CentroidExtremesPerturbed { epsilon: None, seed: 1 };
        let pred = Prediction::ExtremeIds { ids: vec![0, 1] };
        let l = m.run(&inst, &pred).unwrap();
        assert_eq!(l.atoms().len(), 3);
        let acc = m.accurate_prediction(&inst).unwrap();
        assert_eq!(acc, Prediction::ExtremeIds { ids: vec![0, 1, 2] });
        assert_eq!(m.run(&inst, &acc).unwrap(), m.run(&inst, &Prediction::None).unwrap());
    }
}

//! Instances, predictions, lotteries and exact egalitarian costs.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Dim, Point};

/// Default scale-relative tolerance for detecting agents on the optimal circle.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;
/// Lottery probabilities must sum to one within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-12;
/// Atoms closer than this in every coordinate are merged.
pub const MERGE_TOL: f64 = 1e-12;

/// Tie tolerance for reading the support of a perturbed profile's enclosing
/// circle. Far below the perturbation radius, so ties from the perturbation
/// do not count.
pub const SUPPORT_TIE_TOL: f64 = 1e-12;

/// A reported location profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Instance {
    dim: Dim,
    points: Vec<Point>,
}

impl Instance {
    pub fn new(dim: Dim, points: Vec<Point>) -> Result<Instance> {
        if points.is_empty() {
            return Err(Error::Empty);
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim.len(), found: p.dim().len() });
            }
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Instance { dim, points })
    }

    pub fn line(xs: &[f64]) -> Result<Instance> {
        Instance::new(Dim::Line, xs.iter().map(|&x| Point::line(x)).collect())
    }

    pub fn plane(pts: &[(f64, f64)]) -> Result<Instance> {
        Instance::new(Dim::Plane, pts.iter().map(|&(x, y)| Point::plane(x, y)).collect())
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> Result<&Point> {
        self.points.get(i).ok_or(Error::IndexOutOfRange { index: i, n: self.n() })
    }

    pub fn require_dim(&self, dim: Dim) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim.len(), found: self.dim.len() })
        }
    }

    /// `(x_L, x_R)` of a 1-D instance.
    pub fn extremes(&self) -> Result<(f64, f64)> {
        self.require_dim(Dim::Line)?;
        Ok(self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.x()), hi.max(p.x()))
        }))
    }

    /// `M = (x_L + x_R) / 2` of a 1-D instance.
    pub fn midpoint(&self) -> Result<f64> {
        let (lo, hi) = self.extremes()?;
        Ok((lo + hi) / 2.0)
    }

    /// Axis-aligned bounding box `((min_x, min_y), (max_x, max_y))`.
    pub fn bounding_box(&self) -> ((f64, f64), (f64, f64)) {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            lo = (lo.0.min(p.x()), lo.1.min(p.y()));
            hi = (hi.0.max(p.x()), hi.1.max(p.y()));
        }
        (lo, hi)
    }

    /// The same profile with agent `i` reporting `report` instead.
    pub fn with_report(&self, i: usize, report: Point) -> Result<Instance> {
        if report.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim.len(), found: report.dim().len() });
        }
        let mut points = self.points.clone();
        *points.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, n: self.n() })? = report;
        Ok(Instance { dim: self.dim, points })
    }

    /// Applies `p -> f(p)` to every report.
    pub fn map_points<F: Fn(&Point) -> Point>(&self, f: F) -> Result<Instance> {
        Instance::new(self.dim, self.points.iter().map(f).collect())
    }

    /// Largest distance between two reports.
    pub fn diameter(&self) -> f64 {
        geometry::diameter(&self.points)
    }
}

/// Side information handed to a mechanism alongside the reports.
///
/// Agent ids are 0-based positions in the instance.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Prediction {
    /// Predicted location of every agent.
    #[serde(rename = "full")]
    FullLocations { points: Vec<Point> },
    /// Predicted optimal facility location.
    #[serde(rename = "facility")]
    OptimalFacility { point: Point },
    /// Predicted ids of the agents on the optimal circle.
    #[serde(rename = "extreme_ids")]
    ExtremeIds { ids: Vec<usize> },
    #[default]
    #[serde(rename = "none")]
    None,
}

impl Prediction {
    /// Checks that the prediction is well-formed for `inst`.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        match self {
            Prediction::FullLocations { points } => {
                if points.len() != inst.n() {
                    return Err(Error::PredictionMismatch(format!(
                        "{} predicted locations for {} agents",
                        points.len(),
                        inst.n()
                    )));
                }
                if let Some(p) = points.iter().find(|p| p.dim() != inst.dim()) {
                    return Err(Error::DimensionMismatch {
                        expected: inst.dim().len(),
                        found: p.dim().len(),
                    });
                }
                Ok(())
            }
            Prediction::OptimalFacility { point } => {
                if point.dim() != inst.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: inst.dim().len(),
                        found: point.dim().len(),
                    });
                }
                Ok(())
            }
            Prediction::ExtremeIds { ids } => {
                let mut seen = vec![false; inst.n()];
                for &i in ids {
                    let slot = seen.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, n: inst.n() })?;
                    if *slot {
                        return Err(Error::DuplicateId(i));
                    }
                    *slot = true;
                }
                Ok(())
            }
            Prediction::None => Ok(()),
        }
    }
}

/// On-disk instance format:
/// `{"dim":1|2,"points":[[..],..],"prediction":{"kind":"full"|"facility"|"extreme_ids"|"none", ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub dim: usize,
    pub points: Vec<Point>,
    #[serde(default)]
    pub prediction: Prediction,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<InstanceFile> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }

    pub fn into_parts(self) -> Result<(Instance, Prediction)> {
        let inst = Instance::new(Dim::from_len(self.dim)?, self.points)?;
        self.prediction.validate(&inst)?;
        Ok((inst, self.prediction))
    }

    pub fn from_parts(inst: &Instance, prediction: &Prediction) -> InstanceFile {
        InstanceFile {
            dim: inst.dim().len(),
            points: inst.points().to_vec(),
            prediction: prediction.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Point,
    pub prob: f64,
}

/// A finitely supported distribution over facility locations, kept in
/// canonical form: positive probabilities, merged coincident atoms, atoms
/// sorted lexicographically by coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lottery {
    atoms: Vec<Atom>,
}

fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y()))
}

impl Lottery {
    pub fn new(atoms: Vec<Atom>) -> Result<Lottery> {
        let first = atoms.first().ok_or_else(|| Error::InvalidLottery("no atoms".into()))?;
        let dim = first.point.dim();
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        let mut total = 0.0;
        for a in atoms {
            if a.point.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim.len(), found: a.point.dim().len() });
            }
            if !a.point.is_finite() || !a.prob.is_finite() {
                return Err(Error::NonFinite);
            }
            if a.prob < 0.0 || a.prob > 1.0 + PROB_SUM_TOL {
                return Err(Error::InvalidLottery(format!("probability {} outside [0, 1]", a.prob)));
            }
            total += a.prob;
            if a.prob == 0.0 {
                continue;
            }
            match merged.iter_mut().find(|m| m.point.approx_eq(&a.point, MERGE_TOL)) {
                Some(m) => m.prob += a.prob,
                None => merged.push(a),
            }
        }
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidLottery(format!("probabilities sum to {total}")));
        }
        if merged.is_empty() {
            return Err(Error::InvalidLottery("no atom with positive probability".into()));
        }
        merged.sort_by(|a, b| lex_cmp(&a.point, &b.point));
        Ok(Lottery { atoms: merged })
    }

    pub fn from_pairs<I: IntoIterator<Item = (Point, f64)>>(pairs: I) -> Result<Lottery> {
        Lottery::new(pairs.into_iter().map(|(point, prob)| Atom { point, prob }).collect())
    }

    /// The lottery placing the facility at `p` with certainty.
    pub fn degenerate(p: Point) -> Lottery {
        Lottery { atoms: vec![Atom { point: p, prob: 1.0 }] }
    }

    /// Probability mixture `sum_j w_j L_j`.
    pub fn mixture(parts: &[(f64, &Lottery)]) -> Result<Lottery> {
        let atoms = parts
            .iter()
            .flat_map(|(w, l)| l.atoms.iter().map(move |a| Atom { point: a.point, prob: w * a.prob }))
            .collect();
        Lottery::new(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn dim(&self) -> Dim {
        self.atoms[0].point.dim()
    }

    /// The single support point, if the lottery is deterministic.
    pub fn as_point(&self) -> Option<Point> {
        match self.atoms.as_slice() {
            [a] => Some(a.point),
            _ => None,
        }
    }

    /// Total probability of atoms satisfying `pred`.
    pub fn mass_where<F: Fn(&Point) -> bool>(&self, pred: F) -> f64 {
        self.atoms.iter().filter(|a| pred(&a.point)).map(|a| a.prob).sum()
    }

    /// `E[g(facility)]`.
    pub fn expect<F: Fn(&Point) -> f64>(&self, g: F) -> f64 {
        self.atoms.iter().map(|a| a.prob * g(&a.point)).sum()
    }

    /// Applies `p -> f(p)` to every atom, keeping probabilities.
    pub fn map_points<F: Fn(&Point) -> Point>(&self, f: F) -> Result<Lottery> {
        Lottery::new(self.atoms.iter().map(|a| Atom { point: f(&a.point), prob: a.prob }).collect())
    }

    /// Same support and weights within `tol`.
    pub fn approx_eq(&self, other: &Lottery, tol: f64) -> bool {
        self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| a.point.approx_eq(&b.point, tol) && (a.prob - b.prob).abs() <= tol)
    }
}

/// Optimal facility `o(x)` and its cost.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimalSolution {
    pub facility: Point,
    pub cost: f64,
}

/// Maximum distance from any agent to `y`.
pub fn max_cost(inst: &Instance, y: &Point) -> f64 {
    inst.points().iter().map(|p| p.dist(y)).fold(0.0, f64::max)
}

fn check_lottery_dim(lottery: &Lottery, inst: &Instance) -> Result<()> {
    if lottery.dim() != inst.dim() {
        return Err(Error::DimensionMismatch { expected: inst.dim().len(), found: lottery.dim().len() });
    }
    Ok(())
}

/// Exact expected egalitarian cost `E[max_i d(x_i, f)]`.
pub fn egalitarian_cost(lottery: &Lottery, inst: &Instance) -> Result<f64> {
    check_lottery_dim(lottery, inst)?;
    Ok(lottery.expect(|y| max_cost(inst, y)))
}

/// Optimal facility: the midpoint on the line, the center of the smallest
/// enclosing circle in the plane.
pub fn optimal_solution(inst: &Instance) -> OptimalSolution {
    match inst.dim() {
        Dim::Line => {
            let (lo, hi) = inst.extremes().expect("1-D instance");
            OptimalSolution { facility: Point::line((lo + hi) / 2.0), cost: (hi - lo) / 2.0 }
        }
        Dim::Plane => {
            let c = geometry::min_enclosing_circle(inst.points()).expect("validated planar instance");
            // The reported cost is the realised maximum distance at the center.
            OptimalSolution { facility: c.center, cost: max_cost(inst, &c.center) }
        }
    }
}

/// `C(f, x) / C(o(x), x)`; a zero optimum gives 1 for a zero-cost lottery and
/// infinity otherwise.
pub fn approx_ratio(lottery: &Lottery, inst: &Instance) -> Result<f64> {
    let cost = egalitarian_cost(lottery, inst)?;
    let opt = optimal_solution(inst).cost;
    Ok(ratio_of(cost, opt))
}

pub(crate) fn ratio_of(cost: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        cost / opt
    } else if cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `E[d(agent, f)]`.
pub fn agent_expected_cost(lottery: &Lottery, agent: &Point) -> f64 {
    lottery.expect(|y| agent.dist(y))
}

/// Displaces each report by an independent seeded offset drawn uniformly
/// from the disc of radius `epsilon`.
pub fn perturb(inst: &Instance, epsilon: f64, seed: u64) -> Result<Instance> {
    inst.require_dim(Dim::Plane)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::BadEpsilon(epsilon));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = inst
        .points()
        .iter()
        .map(|p| {
            let r = epsilon * rng.gen::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.gen::<f64>();
            Point::plane(p.x() + r * theta.cos(), p.y() + r * theta.sin())
        })
        .collect();
    Instance::new(Dim::Plane, points)
}

/// Agents whose distance to `o(x)` is within `tie_tol * (1 + R)` of the
/// optimal cost `R`, in increasing id order.
pub fn extreme_ids(inst: &Instance, tie_tol: f64) -> Vec<usize> {
    let opt = optimal_solution(inst);
    let cutoff = opt.cost - tie_tol * (1.0 + opt.cost);
    inst.points()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.dist(&opt.facility) >= cutoff)
        .map(|(i, _)| i)
        .collect()
}

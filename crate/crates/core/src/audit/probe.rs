//! Constraint probe for the consistency/robustness lower bound on two agents.
//!
//! Masses are read off the OnlyM rewrite of the mechanism's output on
//! `x = <x_L, x_R>`. Truthfulness against the far-left misreport
//! `x_L - d` forces `P(<=L) > delta - P(M)/2` for robustness better than
//! `2 - delta`; with the inaccurate prediction `<x_L, x_R + d>`, the right
//! agent's misreport onto the prediction forces `P(<=L) <= delta - P(M)/2`
//! for `(1 + delta)`-consistency. The probe reports where a mechanism sits.

use serde::Serialize;

use super::mechanism::Mechanism;
use crate::error::{Error, Result};
use crate::geometry::{Dim, Point};
use crate::line::{onlym_transform, MixtureParam};
use crate::model::{self, Instance, Lottery, Prediction};

/// Tolerance for reading a constraint as tight.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Masses {
    /// Mass weakly left of `x_L`.
    pub p_leq_l: f64,
    /// Mass at the midpoint.
    pub p_m: f64,
}

fn masses(l: &Lottery, lo: f64, mid: f64) -> Masses {
    let at_mid = |p: &Point| (p.x() - mid).abs() <= model::MERGE_TOL * (1.0 + mid.abs());
    Masses { p_leq_l: l.mass_where(|p| p.x() <= lo), p_m: l.mass_where(at_mid) }
}

/// Which of the two constraints the mechanism violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// `P(<=L) = delta - P(M)/2`: on the frontier.
    Boundary,
    /// `P(<=L) < delta - P(M)/2`: robustness is no better than `2 - delta`.
    RobustnessSide,
    /// `P(<=L) > delta - P(M)/2`: consistency is worse than `1 + delta`.
    ConsistencySide,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub delta: f64,
    pub instance: Instance,
    /// Inaccurate prediction `<x_L, x_R + d>` the constraints are read on.
    pub prediction: Vec<Point>,
    /// Masses under the accurate prediction.
    pub accurate: Masses,
    pub p_leq_l: f64,
    pub p_m: f64,
    /// `delta - P(M)/2`.
    pub bound: f64,
    /// `E[d(M, f(x, x))] / opt`; at most `delta` for `(1 + delta)`-consistency.
    pub consistency_value: f64,
    /// Left agent's cost after misreporting `x_L - d`, over `2 opt`.
    pub deviation_value: f64,
    /// Right agent's cost after misreporting `x_R + d`, over `2 opt`.
    pub misreport_value: f64,
    /// `P(<=L) > delta - P(M)/2`.
    pub robustness_side: bool,
    /// `P(<=L) <= delta - P(M)/2`.
    pub consistency_side: bool,
    pub binding: Binding,
}

fn full(points: &[f64]) -> Prediction {
    Prediction::FullLocations { points: points.iter().map(|&x| Point::line(x)).collect() }
}

pub fn lower_bound_probe_line<M: Mechanism + ?Sized>(mech: &M, delta: f64, base: &Instance) -> Result<ProbeReport> {
    MixtureParam::new(delta)?;
    base.require_dim(Dim::Line)?;
    if base.n() != 2 {
        return Err(Error::NotTwoAgents(base.n()));
    }
    let (lo, hi) = base.extremes()?;
    if lo == hi {
        return Err(Error::DegenerateInstance);
    }
    let (d, mid) = (hi - lo, (lo + hi) / 2.0);
    let opt = d / 2.0;
    let run = |inst: &Instance, pred: &Prediction| -> Result<Lottery> {
        let out = mech.run(inst, pred)?;
        // Deviated profiles are still two-agent, non-degenerate.
        onlym_transform(&out, inst)
    };

    let accurate_out = run(base, &full(&[lo, hi]))?;
    let hat = [lo, hi + d];
    let inaccurate_out = run(base, &full(&hat))?;
    let far_left = Instance::line(&[lo - d, hi])?;
    let on_prediction = Instance::line(&hat)?;

    let m = masses(&inaccurate_out, lo, mid);
    let bound = delta - m.p_m / 2.0;
    let binding = if (m.p_leq_l - bound).abs() <= BOUNDARY_TOL {
        Binding::Boundary
    } else if m.p_leq_l < bound {
        Binding::RobustnessSide
    } else {
        Binding::ConsistencySide
    };
    let dist_to = |x: f64| move |p: &Point| (p.x() - x).abs();
    Ok(ProbeReport {
        delta,
        instance: base.clone(),
        prediction: hat.iter().map(|&x| Point::line(x)).collect(),
        accurate: masses(&accurate_out, lo, mid),
        p_leq_l: m.p_leq_l,
        p_m: m.p_m,
        bound,
        consistency_value: accurate_out.expect(dist_to(mid)) / opt,
        deviation_value: run(&far_left, &full(&hat))?.expect(dist_to(lo)) / (2.0 * opt),
        misreport_value: run(&on_prediction, &full(&hat))?.expect(dist_to(hi)) / (2.0 * opt),
        robustness_side: m.p_leq_l > bound,
        consistency_side: m.p_leq_l <= bound,
        binding,
    })
}

/// Whether a claimed `(consistency, robustness)` pair survives the two
/// constraints at a given `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClaimVerdict {
    pub delta: f64,
    /// Robustness better than `2 - delta` needs the robustness-side inequality.
    pub needs_robustness_side: bool,
    /// Consistency `1 + delta` needs the consistency-side inequality.
    pub needs_consistency_side: bool,
    /// False when both are needed: no `P(<=L)`, `P(M)` satisfies both.
    pub feasible: bool,
}

pub fn check_claim(delta: f64, consistency: f64, robustness: f64) -> Result<ClaimVerdict> {
    MixtureParam::new(delta)?;
    let needs_robustness_side = robustness < 2.0 - delta;
    let needs_consistency_side = consistency <= 1.0 + delta;
    Ok(ClaimVerdict {
        delta,
        needs_robustness_side,
        needs_consistency_side,
        feasible: !(needs_robustness_side && needs_consistency_side),
    })
}

/// Total cost and both agents' expected costs of a lottery on a two-agent
/// line instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeCosts {
    pub total: f64,
    pub left: f64,
    pub right: f64,
}

pub fn probe_costs(l: &Lottery, inst: &Instance) -> Result<ProbeCosts> {
    let (lo, hi) = inst.extremes()?;
    Ok(ProbeCosts {
        total: model::egalitarian_cost(l, inst)?,
        left: model::agent_expected_cost(l, &Point::line(lo)),
        right: model::agent_expected_cost(l, &Point::line(hi)),
    })
}

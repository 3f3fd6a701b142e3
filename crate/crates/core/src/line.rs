//! One-dimensional mechanisms and the OnlyM rewrite of two-agent lotteries.
//!
//! Every function here takes a 1-D [`Instance`] and returns a [`Lottery`] of
//! 1-D points; planar input is rejected with a dimension error.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Dim, Point};
use crate::model::{Atom, Instance, Lottery};

/// Lower median: the `ceil(n/2)`-th smallest of `values`.
pub(crate) fn lower_median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values[(values.len() - 1) / 2]
}

/// Deterministic median mechanism (lower median for even `n`).
pub fn median_line(inst: &Instance) -> Result<Lottery> {
    inst.require_dim(Dim::Line)?;
    let mut xs: Vec<f64> = inst.points().iter().map(Point::x).collect();
    Ok(Lottery::degenerate(Point::line(lower_median(&mut xs))))
}

/// Left-right-middle: `x_L` and `x_R` with probability 1/4 each, `M` with 1/2.
pub fn lrm(inst: &Instance) -> Result<Lottery> {
    let (lo, hi) = inst.extremes()?;
    Lottery::from_pairs([
        (Point::line(lo), 0.25),
        (Point::line(hi), 0.25),
        (Point::line((lo + hi) / 2.0), 0.5),
    ])
}

/// MinMaxP: the predicted facility clamped to `[x_L, x_R]`.
pub fn minmaxp(inst: &Instance, f_star: &Point) -> Result<Lottery> {
    let (lo, hi) = inst.extremes()?;
    if f_star.dim() != Dim::Line {
        return Err(Error::DimensionMismatch { expected: 1, found: f_star.dim().len() });
    }
    Ok(Lottery::degenerate(Point::line(f_star.x().clamp(lo, hi))))
}

/// Weight `delta` in `[0, 0.5]` of the LRM/MinMaxP mixture.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixtureParam(f64);

impl MixtureParam {
    pub fn new(delta: f64) -> Result<MixtureParam> {
        if (0.0..=0.5).contains(&delta) {
            Ok(MixtureParam(delta))
        } else {
            Err(Error::DeltaOutOfRange(delta))
        }
    }

    pub fn delta(self) -> f64 {
        self.0
    }
}

/// Runs LRM with probability `2 delta` and MinMaxP with probability
/// `1 - 2 delta`; `(1 + delta)`-consistent and `(2 - delta)`-robust.
pub fn mixed_delta(inst: &Instance, f_star: &Point, param: MixtureParam) -> Result<Lottery> {
    let w = 2.0 * param.delta();
    Lottery::mixture(&[(w, &lrm(inst)?), (1.0 - w, &minmaxp(inst, f_star)?)])
}

/// Masses and conditional means of a lottery on the open half-intervals
/// `(x_L, M)` and `(M, x_R)` of a two-agent instance, with the convex
/// coefficients placing each conditional mean between its endpoint and `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OnlyMDecomposition {
    pub x_left: f64,
    pub x_right: f64,
    pub mid: f64,
    pub p_left: f64,
    pub p_right: f64,
    pub pi_left: Option<f64>,
    pub pi_right: Option<f64>,
    /// `pi_left = q_left x_L + (1 - q_left) M`.
    pub q_left: Option<f64>,
    /// `pi_right = q_right x_R + (1 - q_right) M`.
    pub q_right: Option<f64>,
}

fn two_agent_frame(inst: &Instance) -> Result<(f64, f64, f64)> {
    let (lo, hi) = inst.extremes()?;
    if inst.n() != 2 {
        return Err(Error::NotTwoAgents(inst.n()));
    }
    if lo == hi {
        return Err(Error::DegenerateInstance);
    }
    Ok((lo, hi, (lo + hi) / 2.0))
}

pub fn onlym_decompose(lottery: &Lottery, inst: &Instance) -> Result<OnlyMDecomposition> {
    let (lo, hi, mid) = two_agent_frame(inst)?;
    if lottery.dim() != Dim::Line {
        return Err(Error::DimensionMismatch { expected: 1, found: lottery.dim().len() });
    }
    let side = |a: f64, b: f64| {
        let inside = |p: &Point| a < p.x() && p.x() < b;
        let mass = lottery.mass_where(inside);
        let mean = (mass > 0.0).then(|| lottery.expect(|p| if inside(p) { p.x() } else { 0.0 }) / mass);
        (mass, mean)
    };
    let (p_left, pi_left) = side(lo, mid);
    let (p_right, pi_right) = side(mid, hi);
    Ok(OnlyMDecomposition {
        x_left: lo,
        x_right: hi,
        mid,
        p_left,
        p_right,
        pi_left,
        pi_right,
        q_left: pi_left.map(|pi| (mid - pi) / (mid - lo)),
        q_right: pi_right.map(|pi| (pi - mid) / (hi - mid)),
    })
}

/// Rewrites a two-agent lottery so that nothing inside `(x_L, x_R)` other
/// than `M` carries mass: mass on `(x_L, M)` splits between `x_L` and `M`
/// (and likewise on the right) preserving the conditional mean. Atoms at
/// `x_L`, `M`, `x_R` or outside `[x_L, x_R]` are kept as they are.
pub fn onlym_transform(lottery: &Lottery, inst: &Instance) -> Result<Lottery> {
    let d = onlym_decompose(lottery, inst)?;
    let moved = |p: &Point| (d.x_left < p.x() && p.x() < d.mid) || (d.mid < p.x() && p.x() < d.x_right);
    let mut atoms: Vec<Atom> = lottery.atoms().iter().filter(|a| !moved(&a.point)).copied().collect();
    let (ql, qr) = (d.q_left.unwrap_or(0.0), d.q_right.unwrap_or(0.0));
    atoms.push(Atom { point: Point::line(d.x_left), prob: ql * d.p_left });
    atoms.push(Atom { point: Point::line(d.mid), prob: (1.0 - ql) * d.p_left + (1.0 - qr) * d.p_right });
    atoms.push(Atom { point: Point::line(d.x_right), prob: qr * d.p_right });
    Lottery::new(atoms)
}

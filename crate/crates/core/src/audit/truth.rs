use rayon::prelude::*;
use serde::Serialize;

use super::mechanism::Mechanism;
use crate::error::Result;
use crate::geometry::{Dim, Point};
use crate::model::{self, Instance, Prediction};

/// Violations are certified exactly; compliance only up to the resolution of
/// the deviation grid.
pub const GRID_CAVEAT: &str = "compliance certified only up to deviation-grid resolution";

/// Margins at or above `-TRUTH_TOL` count as truthful.
pub const TRUTH_TOL: f64 = 1e-9;

/// Dense part of the deviation set: `resolution` points per axis over the
/// bounding box scaled by `scale` about its center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub resolution: usize,
    pub scale: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { resolution: 41, scale: 3.0 }
    }
}

fn linspace(center: f64, half: f64, steps: usize) -> impl Iterator<Item = f64> {
    let steps = steps.max(2);
    (0..steps).map(move |t| center - half + 2.0 * half * t as f64 / (steps - 1) as f64)
}

/// Half-extents of the scaled box. A flat axis borrows a quarter of the other
/// axis' extent so collinear profiles still get off-line deviations; a
/// unanimous profile gets a unit box.
pub(crate) fn scaled_box(inst: &Instance, scale: f64) -> ((f64, f64), (f64, f64)) {
    let ((x0, y0), (x1, y1)) = inst.bounding_box();
    let (w, h) = (x1 - x0, y1 - y0);
    let span = w.max(h);
    let floor = if span > 0.0 { 0.25 * span } else { 1.0 };
    let center = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    (center, (scale / 2.0 * w.max(floor), scale / 2.0 * h.max(floor)))
}

pub(crate) fn box_grid(inst: &Instance, scale: f64, resolution: usize) -> Vec<Point> {
    let ((cx, cy), (hx, hy)) = scaled_box(inst, scale);
    match inst.dim() {
        Dim::Line => linspace(cx, hx, resolution).map(Point::line).collect(),
        Dim::Plane => linspace(cx, hx, resolution)
            .flat_map(|x| linspace(cy, hy, resolution).map(move |y| Point::plane(x, y)))
            .collect(),
    }
}

/// Candidate misreports for agent `i`.
pub fn deviation_candidates(inst: &Instance, i: usize, grid: &GridSpec) -> Result<Vec<Point>> {
    let xi = *inst.point(i)?;
    let pts = inst.points();
    let mut out: Vec<Point> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p).collect();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            out.push((pts[a] + pts[b]) * 0.5);
        }
    }
    let center = model::optimal_solution(inst).facility;
    out.push(center * 2.0 - xi);
    match inst.dim() {
        Dim::Line => {
            let (lo, hi) = inst.extremes()?;
            out.push(Point::line(lo - (hi - lo)));
            out.push(Point::line(hi + (hi - lo)));
        }
        Dim::Plane => out.push(xi * 2.0 - center),
    }
    out.extend(box_grid(inst, grid.scale, grid.resolution));
    Ok(out)
}

/// Best deviation found for one agent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruthReport {
    pub instance: Instance,
    pub agent: usize,
    pub best_deviation: Point,
    pub truthful_cost: f64,
    pub deviated_cost: f64,
    /// `deviated_cost - truthful_cost`; negative means misreporting pays.
    pub margin: f64,
}

impl TruthReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.margin >= -tol
    }
}

/// Evaluates every candidate deviation of every agent with the prediction
/// held fixed. One report per agent, in agent order.
pub fn audit_truthfulness<M: Mechanism + ?Sized>(
    mech: &M,
    inst: &Instance,
    pred: &Prediction,
    grid: &GridSpec,
) -> Result<Vec<TruthReport>> {
    let truthful = mech.run(inst, pred)?;
    (0..inst.n())
        .into_par_iter()
        .map(|i| {
            let xi = inst.points()[i];
            let truthful_cost = model::agent_expected_cost(&truthful, &xi);
            let mut best = (xi, truthful_cost);
            for dev in deviation_candidates(inst, i, grid)? {
                let out = mech.run(&inst.with_report(i, dev)?, pred)?;
                let cost = model::agent_expected_cost(&out, &xi);
                if cost < best.1 {
                    best = (dev, cost);
                }
            }
            Ok(TruthReport {
                instance: inst.clone(),
                agent: i,
                best_deviation: best.0,
                truthful_cost,
                deviated_cost: best.1,
                margin: best.1 - truthful_cost,
            })
        })
        .collect()
}

/// Smallest margin over a set of reports (`+inf` when empty).
pub fn min_margin(reports: &[TruthReport]) -> f64 {
    reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min)
}

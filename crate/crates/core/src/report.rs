//! CSV output with fixed column orders.
//!
//! Floats are written with 12 significant digits; infinities as `inf` and
//! `-inf`.

use std::path::Path;

use crate::audit::{FrontierPoint, ProbeReport, RatioEstimate, TruthReport, WitnessReport};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::model::Lottery;

pub fn format_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".into()
    } else if (1e-4..1e15).contains(&rounded.abs()) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

fn point_cell(p: &Point) -> String {
    p.coords().iter().map(|&c| format_sig(c)).collect::<Vec<_>>().join(" ")
}

/// A header and string rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let quote = |c: &String| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        };
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&row.iter().map(quote).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes a numeric curve as CSV, one row per point.
pub fn emit_plot_data(header: &[&str], rows: &[Vec<f64>], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut t = CsvTable::new(header);
    for r in rows {
        t.push(r.iter().map(|&v| format_sig(v)).collect());
    }
    std::fs::write(path, t.to_csv())?;
    Ok(())
}

pub fn frontier_table(points: &[FrontierPoint]) -> CsvTable {
    let mut t = CsvTable::new(&["delta", "consistency", "robustness"]);
    for p in points {
        t.push(vec![format_sig(p.delta), format_sig(p.consistency), format_sig(p.robustness)]);
    }
    t
}

pub fn frontier_rows(points: &[FrontierPoint]) -> Vec<Vec<f64>> {
    points.iter().map(|p| vec![p.delta, p.consistency, p.robustness]).collect()
}

pub fn lottery_table(l: &Lottery) -> CsvTable {
    let mut t = CsvTable::new(&["point", "prob"]);
    for a in l.atoms() {
        t.push(vec![point_cell(&a.point), format_sig(a.prob)]);
    }
    t
}

pub fn truth_table(reports: &[TruthReport]) -> CsvTable {
    let mut t = CsvTable::new(&["agent", "best_deviation", "truthful_cost", "deviated_cost", "margin"]);
    for r in reports {
        t.push(vec![
            r.agent.to_string(),
            point_cell(&r.best_deviation),
            format_sig(r.truthful_cost),
            format_sig(r.deviated_cost),
            format_sig(r.margin),
        ]);
    }
    t
}

pub fn estimate_table(kind: &str, mech: &str, e: &RatioEstimate) -> CsvTable {
    let mut t = CsvTable::new(&["quantity", "mechanism", "max_ratio", "evaluations"]);
    t.push(vec![kind.into(), mech.into(), format_sig(e.max_ratio), e.evaluations.to_string()]);
    t
}

pub fn witness_table(r: &WitnessReport) -> CsvTable {
    let mut t = CsvTable::new(&["witness", "check", "value", "expected", "tolerance", "passed"]);
    for c in &r.checks {
        t.push(vec![
            r.name.clone(),
            c.label.clone(),
            format_sig(c.value),
            format_sig(c.expected),
            format_sig(c.tolerance),
            c.passed.to_string(),
        ]);
    }
    t
}

pub fn probe_table(r: &ProbeReport) -> CsvTable {
    let mut t = CsvTable::new(&[
        "delta",
        "p_leq_l",
        "p_m",
        "bound",
        "consistency_value",
        "robustness_side",
        "consistency_side",
        "binding",
    ]);
    let binding = serde_json::to_value(r.binding).expect("enum serializes");
    t.push(vec![
        format_sig(r.delta),
        format_sig(r.p_leq_l),
        format_sig(r.p_m),
        format_sig(r.bound),
        format_sig(r.consistency_value),
        r.robustness_side.to_string(),
        r.consistency_side.to_string(),
        binding.as_str().unwrap_or_default().to_string(),
    ]);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.1 + 0.2), "0.3");
        assert_eq!(format_sig(1.0 + std::f64::consts::SQRT_2), "2.41421356237");
        assert_eq!(format_sig(-1.5e-20), "-1.5e-20");
        assert_eq!(format_sig(1e-9), "1e-9");
        assert_eq!(format_sig(0.00025), "0.00025");
        assert_eq!(format_sig(f64::INFINITY), "inf");
        assert_eq!(format_sig(-0.0), "0");
    }

    #[test]
    fn csv_quoting_and_layout() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(vec!["x,y".into(), "1".into()]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1\n");
    }

    #[test]
    fn empty_curve_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        assert_eq!(emit_plot_data(&["x"], &[], &path), Err(Error::EmptyCurve));
        emit_plot_data(&["x", "y"], &[vec![0.0, 1.0]], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "x,y\n0,1\n");
        assert!(emit_plot_data(&["x"], &[vec![1.0]], &dir.path().join("no/such/dir.csv")).is_err());
    }
}

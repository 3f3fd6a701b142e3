//! Truthfulness audits, ratio estimation, the frontier sweep, the two-agent
//! constraint probe and witness fixtures.

mod estimate;
mod mechanism;
mod probe;
mod truth;
mod witness;

pub use estimate::{
    estimate_consistency, estimate_robustness, tradeoff_sweep, Adversary, FrontierPoint, RatioEstimate, SweepConfig,
};
pub use mechanism::{
    accurate_prediction, BrokenWeightedPoint, CentroidAll, CentroidExtremes, CentroidExtremesPerturbed, Gcm, Lrm,
    MedianLine, Mechanism, MinMaxP, MinimumBoundingBox, MixedDelta, PredictionKind,
};
pub use probe::{
    check_claim, lower_bound_probe_line, probe_costs, Binding, ClaimVerdict, Masses, ProbeCosts, ProbeReport,
    BOUNDARY_TOL,
};
pub use truth::{
    audit_truthfulness, deviation_candidates, min_margin, GridSpec, TruthReport, GRID_CAVEAT, TRUTH_TOL,
};
pub use witness::{witness, WitnessCheck, WitnessOptions, WitnessReport, WITNESS_NAMES};

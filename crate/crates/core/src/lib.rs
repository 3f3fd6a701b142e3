//! Truthful facility location with predictions, egalitarian cost.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: planar primitives (distances, centroids, circumcircles,
//!   the smallest enclosing circle, orthocenters and Euler-line data).
//! - [`model`]: instances, predictions, finitely-supported lotteries and the
//!   exact expected egalitarian cost.
//! - [`line`]: one-dimensional mechanisms (median, LRM, MinMaxP, their
//!   mixture) and the OnlyM rewrite of two-agent lotteries.
//! - [`plane`]: two-dimensional mechanisms (GCM with phantoms, minimum
//!   bounding box, centroid on extreme agents, centroid over all agents).
//! - [`audit`]: truthfulness audits, consistency/robustness estimation, the
//!   trade-off sweep, the line lower-bound probe and witness fixtures.
//! - [`report`]: CSV emission shared by the audit reports and the CLI.
//!
//! All expectations are exact sums over a lottery's finite support.

pub mod audit;
pub mod error;
pub mod geometry;
pub mod line;
pub mod model;
pub mod oracle;
pub mod plane;
pub mod report;
pub mod sampling;

pub use error::{Error, Result};
pub use geometry::{Circle, Dim, EulerReport, Point};
pub use model::{Atom, Instance, Lottery, OptimalSolution, Prediction};

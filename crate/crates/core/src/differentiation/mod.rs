//! Difference-quotient analysis: Dini estimates on certified evaluators,
//! point classification for the five-point construction, knot evidence.

pub mod classify;
pub mod dini;
pub mod knot;

pub use classify::{d_set_membership, mzv_point_class, DMembership, PointClass, PointStatus};
pub use dini::{
    approx_dini_estimate, approx_upper_right, dini_estimate, DiniEstimate, Quotient, QuotientSide,
};
pub use knot::{knot_report, slope_chain, vas33_oscillation, KnotEvidence, KnotReport, OscillationPair};

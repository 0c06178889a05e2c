//! Monotonicity of graphs: the exact level-oscillation condition, witness
//! search for the three-point inequalities, pointwise refutation and the
//! `2r` covering lemma.

pub mod bracket;
pub mod cover;
pub mod mpoint;
pub mod pc;
pub mod refute;

pub use bracket::{monotonicity_bracket, MonotonicityBracket};
pub use cover::{cover_2r, Ball};
pub use mpoint::{mpoint_refute, MpointRefutation};
pub use pc::{check_pc, least_pc, PcCertificate, PcOutcome, PcWitness};
pub use refute::{best_triple, refute_monotone, triple_ratio_sq, Side, WitnessTriple, DEFAULT_BUDGET};

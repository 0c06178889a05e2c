//! The explicit functions: the five-point refinement sequence and its limit,
//! the peak sum with certified margins, the lacunary series with no M-points,
//! and the Takagi function.

pub mod fivefold;
pub mod invariants;
pub mod margin;
pub mod peaks;
pub mod series;

pub use fivefold::{Block, FivefoldLevel, FivefoldLimit};
pub use margin::{peak_margin, MarginConfig};
pub use peaks::{PeakSumModel, PeakSumFn};
pub use series::{SeriesEvaluator, SeriesKind};

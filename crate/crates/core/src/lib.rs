//! Exact constructions and certified numerical checks for continuous functions
//! whose graphs are (or fail to be) monotone metric spaces.
//!
//! Everything that can be exact is exact: piecewise-linear approximants live in
//! [`BigRational`](num_rational::BigRational) arithmetic, infinite series are
//! truncated with a rational tail bound, and floating point appears only in
//! estimators (porosity, box counting, Dini sweeps) whose outputs are labelled
//! as estimates.
//!
//! Module map:
//!
//! * [`exact`]: rationals and the piecewise-linear calculus.
//! * [`constructions`]: the five-point refinement function, the peak sum,
//!   the lacunary series without M-points, and the Takagi function.
//! * [`monotonicity`]: the `P_c` decision, witness search, the monotonicity
//!   bracket, M-point refutation and the `2r`-covering lemma.
//! * [`differentiation`]: Dini estimates, point classification and knot
//!   evidence.
//! * [`geometry`]: the 5:3 rectangle family, square avoidance, porosity,
//!   box dimension and graph length.

pub mod constructions;
pub mod differentiation;
pub mod error;
pub mod eval;
pub mod exact;
pub mod geometry;
pub mod monotonicity;
pub mod suite;

pub use error::{Error, Result};
pub use eval::{CertifiedFn, Enclosure};
pub use exact::pl::{Crossing, GraphPoint, PlFunction};
pub use exact::rational::Rational;

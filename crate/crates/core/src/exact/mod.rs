//! Exact arithmetic substrate.

pub mod pl;
pub mod rational;

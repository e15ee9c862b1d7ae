//! Invariant subspace method for multi-term fractional PDE systems.

pub mod specfun;
pub mod series;
pub mod fracalc;
pub mod operators;
pub mod fode;
pub mod catalog;

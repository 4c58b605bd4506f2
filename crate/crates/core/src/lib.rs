//! Numerical and symbolic verification of noncommutative phase spaces
//! built from Lie bialgebras of the (A)dS and Poincaré groups.

pub mod catalog;
pub mod chart;
pub mod error;
pub mod expr;
pub mod lie;
pub mod nc;
pub mod scalar;
pub mod suite;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;

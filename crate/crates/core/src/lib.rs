//! Finite-scale computations around disjoint transitivity of linear
//! operators: set-family testers, weighted backward shifts, closed-form
//! Sobolev norms, and the diagonal operator on a Cantor-like set of angles.

pub mod angle;
pub mod error;
pub mod natset;
pub mod qk;
pub mod rhc;
pub mod shiftlab;
pub mod sobolev;
pub mod verdict;

pub use error::{Error, Result};

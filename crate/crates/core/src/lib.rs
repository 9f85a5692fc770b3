//! Exact computations with finite atomic signed measures on the real line.
//!
//! Everything runs in arbitrary-precision rational arithmetic: step functions
//! of bounded variation and their algebra ([`stepfn`]), atomic signed measures
//! with distribution functions, Hahn-Jordan decomposition and exact
//! integration ([`measure`]), a metric for convergence in Lebesgue measure up
//! to constants with certified rational enclosures ([`metric`]), generators
//! for the standard counterexample families ([`generators`]), and prefix-based
//! convergence diagnostics that cross-check the vague-convergence
//! characterization ([`diagnostics`]).

pub mod diagnostics;
pub mod error;
pub mod generators;
pub mod measure;
pub mod metric;
pub mod parallelism;
pub mod scalar;
pub mod stepfn;

pub use error::{Error, Result};
pub use measure::{Atom, SignedMeasure, TestFunction};
pub use metric::DistanceBracket;
pub use scalar::Scalar;
pub use stepfn::StepFunction;

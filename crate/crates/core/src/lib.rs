//! Exact mechanisms, optimal solvers and axiom audits for facility location
//! on a line with capacitated facilities.
//!
//! Everything is computed in arbitrary-precision rational arithmetic, so
//! equalities, ties and welfare ratios are exact rather than floating-point
//! approximations.

pub mod axioms;
pub mod experiments;
pub mod generate;
pub mod instance;
pub mod mechanisms;
pub mod optimal;
pub mod rational;
pub mod solution;

pub use instance::{Agent, Instance, InstanceError};
pub use mechanisms::{AllocationDirection, MechanismError, MechanismId};
pub use rational::Rational;
pub use solution::{Objective, Solution};

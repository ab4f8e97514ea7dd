//! High-order 1/N expansions of radial Schrödinger eigenvalues.
//!
//! The pipeline is: parse a potential ([`potential`]), freeze it at
//! k = N + 2l and expand the effective potential about its minimum
//! ([`expansion`]), run the coefficient recursions for the requested state
//! ([`recursion`]) and read the resulting partial sums ([`analysis`]).
//! All numerics run in arbitrary precision ([`arith`]).

pub mod analysis;
pub mod arith;
pub mod expansion;
pub mod potential;
pub mod recursion;

pub use analysis::{solve, PartialSumSequence, Solution, SolveError};
pub use arith::{BigReal, PowerSeries, PrecisionContext};
pub use expansion::{ProblemSpec, State};
pub use potential::{parse_potential, MassConvention, PotentialExpr};

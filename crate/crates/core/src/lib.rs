//! Exact-arithmetic toolkit for logic-based optimization.
//!
//! The crate bundles five engines that share one rational LP core:
//!
//! - [`lp`]: dense-tableau simplex over [`Rational`] with dual values and
//!   Farkas certificates, plus a 0–1 branch-and-bound MILP solver.
//! - [`problogic`]: Boole-style probability logic. Premise probabilities
//!   become linear constraints over truth-assignment probabilities and the
//!   tightest interval for a query is found by LP (full enumeration or column
//!   generation).
//! - [`clausal`]: resolution, input resolution, unit propagation,
//!   clause/inequality mapping, Chvátal–Gomory rounding, and
//!   consistency / LP-consistency checks for 0–1 constraint sets.
//! - [`dd`]: decision diagrams compiled from dynamic programming models:
//!   exact, relaxed (node merging) and restricted diagrams, reduction,
//!   branch-and-bound on the last exact layer and near-optimal enumeration.
//! - [`lbbd`]: logic-based Benders decomposition for assigning jobs to
//!   facilities with cumulative scheduling on each facility.
//!
//! The [`cli`] module exposes everything through the `logopt` binary. Runnable
//! walkthroughs live in the crate's `examples/` directory.

pub mod error;
pub mod clausal;
pub mod cli;
pub mod dd;
pub mod lbbd;
pub mod lp;
pub mod problogic;
pub mod rational;

pub use error::ParseError;
pub use rational::Rational;

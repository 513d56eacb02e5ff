//! Numerical bounds on sums of inner products over finite vector families.
//!
//! Given vectors `y_1..y_n` in a complex inner product space, a fixed vector
//! `x`, and coefficients `c_1..c_n`, this crate evaluates the classical
//! hierarchy of upper bounds on `|sum_i c_i (x, y_i)|^2` built from the Gram
//! matrix `G_ij = (y_i, y_j)` and its absolute row sums — Bessel's and
//! Bombieri's inequalities, Pecaric's inequality, and their Holder-exponent
//! refinements (nine "branch" bounds per chain, one for each way of majorizing
//! the two Holder factors).
//!
//! Beyond plain evaluation the crate provides:
//!
//! - an [`optimizer`] that searches the Holder exponents (and branch choice)
//!   minimizing a chosen bound for a concrete instance,
//! - a [`verify`] harness that fuzzes randomized instances and checks every
//!   inequality chain against tolerances,
//! - an audit mode comparing the *composed* branch formulas (products of the
//!   factor majorizations, [`bounds::Form::Derived`]) against literal
//!   transcriptions of the closed forms as printed in the classical displays
//!   ([`bounds::Form::Printed`]), hunting for instances where a printed
//!   transcription fails to bound what it claims to bound.
//!
//! Everything is deterministic given explicit seeds; all slack checks use a
//! one-sided tolerance `max(1e-12, 1e-9 * bound)`.

pub mod bounds;
pub mod cli;
pub mod exponents;
pub mod gram;
pub mod instance;
pub mod optimizer;
pub mod report;
pub mod sum;
pub mod verify;

pub use bounds::{BoundChain, BoundValue, Form};
pub use exponents::{BranchSelector, ConjugatePair, FactorReduction, HolderParams};
pub use gram::{Complex, GramData, ProjectionData, VectorFamily};
pub use instance::{Instance, InstanceSource};

/// One-sided slack tolerance used by every inequality check in the crate:
/// a bound `b` is accepted against a left-hand side `l` iff
/// `b >= l - slack_tol(b)`.
pub fn slack_tol(bound: f64) -> f64 {
    f64::max(1e-12, 1e-9 * bound)
}

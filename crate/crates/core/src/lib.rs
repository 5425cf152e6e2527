//! Exact verification engine for the double super Yangian `DY(osp(1|2))`.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalars`]: exact rationals, truncated series in `u⁻¹`, `Γ`, `Γ₁` and `ρ`.
//! * [`superlin`]: `Z₂`-graded matrices on `V = C³` and its tensor powers.
//! * [`rmatrix`]: the rational R-matrix and its Yang–Baxter, unitarity and crossing checks.
//! * [`currents`]: Drinfel'd mode algebra, PBW normal ordering, ideal membership.
//! * [`pairing`]: closed-form Hopf pairing between the two halves of the double.
//! * [`urmatrix`]: truncated universal R-matrix factors and their evaluation.
//! * [`evalrep`]: the fundamental evaluation representation and Gauss/RTT checks.
//! * [`cli`]: batch front-end producing JSON or text reports.

pub mod cli;
pub mod currents;
pub mod error;
pub mod evalrep;
pub mod pairing;
pub mod report;
pub mod rmatrix;
pub mod scalars;
pub mod superlin;
pub mod urmatrix;

pub use error::{Error, Result};

//! Exact and numeric machinery for characters of N=4 superconformal algebras
//! obtained by quantum Hamiltonian reduction at principal admissible levels.
//!
//! * [`series`]: truncated Laurent series in q and x with exact coefficients.
//! * [`theta`]: theta and eta functions.
//! * [`psi`]: the mock theta functions Phi and Psi and their numerics.
//! * [`characters`]: denominators, character ratios and reduction parameters.
//! * [`modular`]: numeric modular-transformation checks and span closure.
//! * [`suites`]: named identity suites shared by the CLI and the tests.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod invert;
pub mod rational;
pub mod ratio;
mod serial;
pub mod series;
pub mod characters;
pub mod modular;
pub mod psi;
pub mod suites;
pub mod theta;

pub use error::{Error, Result};
pub use rational::{GaussianRational, Q};
pub use ratio::SeriesRatio;
pub use series::{JacobiSeries, QOrder, XWindow};

//! Laplace-type integrals with complex quadratic phase.
//!
//! The crate evaluates
//!
//! ```text
//! I(s) = int_0^T e^{-s (x^2 - i c x)} dx,    J(s) = int_0^T e^{s (x^2 + i c x)} dx
//! ```
//!
//! together with the moment `I1` and the reduced integral `J1`, compares them
//! with their leading asymptotics `i/(s c)` and `e^{s T^2 + i s c T}/(s (2T + i c))`,
//! and measures the rate at which the asymptotics take over.
//!
//! Values that can overflow are carried as [`LogComplex`].

pub mod asymptotics;
pub mod checks;
pub mod cli;
pub mod error;
pub mod logcomplex;
pub mod quadrature;
pub mod special;
mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use logcomplex::{ComplexValue, LogComplex};
pub use quadrature::{Family, IntegralSpec, QuadratureResult, Upper};
pub use verify::{ConvergenceReport, EpsilonSplit, Execution, SweepConfig};

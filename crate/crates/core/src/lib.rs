//! Symbolic + numeric engine for gl(n) realizations in the generalized
//! Heisenberg algebra.
//!
//! The exact side ([`weyl`], [`realization`], [`tensor`], [`twist`],
//! [`general`]) works over Gaussian-rational coefficients times polynomials
//! in the deformation parameter `u`; the numeric side ([`star`]) evaluates
//! the momentum-space composition law with complex double-precision
//! matrices. [`suites`] bundles both into the named verification suites
//! that the CLI and the acceptance tests run.

pub mod coeff;
pub mod error;
pub mod general;
pub mod realization;
pub mod report;
pub mod star;
pub mod suites;
pub mod tensor;
pub mod twist;
pub mod weyl;

pub use error::Error;

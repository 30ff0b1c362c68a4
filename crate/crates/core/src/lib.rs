//! Coherent states of the one-dimensional infinite square well.
//!
//! Builds generalized (GeCS) and Gaussian Klauder (GCS) coherent states,
//! evolves them exactly in the energy basis, and compares them with the
//! Gaussian-packet approximations.

// Domain checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values keep every digit of the high-precision oracle.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod approx;
pub mod dynamics;
pub mod equivalence;
pub mod error;
pub mod grid;
pub mod numerics;
pub mod specfun;
pub mod states;
pub mod well;

pub use error::{Error, Result};
pub use grid::{SpaceGrid, TimeGrid};
pub use states::{CoefficientVector, GcsParams, GecsParams, StateSpec};
pub use well::WellParams;

//! Exact model checking of LTL properties over orbits of three-dimensional
//! rational linear dynamical systems.

#![allow(clippy::needless_range_loop)]

pub mod bounded_mc;
pub mod error;
pub mod ltl;
pub mod numeric;
pub mod oracle;
pub mod semilinear;
pub mod spectral;
pub mod symbolic;
pub mod torus;

pub use error::{Error, Result};

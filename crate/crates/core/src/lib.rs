//! Linear stability of Einstein warped products `dr² + f(r)² g`.
//!
//! Three geometries are covered: sin-cones over positive Einstein fibers,
//! cosh-cylinders over negative ones, and flat cylinders over Ricci-flat
//! ones. [`criteria`] holds the closed-form verdicts, [`spectral1d`] and
//! [`coupledforms`] discretize the radial quadratic forms of the Einstein
//! operator, and [`atlas`] carries the symmetric-space tables.

pub mod atlas;
pub mod coupledforms;
pub mod criteria;
pub mod error;
pub mod exec;
pub mod spectral1d;

pub use error::{Error, Result};
pub use exec::Executor;

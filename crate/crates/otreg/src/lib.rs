//! Numerical machinery for the regularity theory of optimal transport maps:
//! a cost-function library with verified derivatives, the cotangent
//! (c-exponential) inversion, cost-sectional curvature sweeps, discrete
//! c-convex analysis on grids, and an exact transport solver with map
//! regularity diagnostics.

pub mod cexp;
pub mod cost;
pub mod ctransform;
pub mod curvature;
pub mod error;
pub mod finitediff;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod rng;
pub mod sphere;
pub mod transport;

pub use error::{Error, Result};

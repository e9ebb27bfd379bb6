//! Curvature, slice stability and CMC-stability thresholds for warped
//! products `I × S^2` with metric `dt^2 + h(t)^2 dω^2`, with a
//! finite-difference geometry oracle that re-derives every closed form.

pub mod curvature;
pub mod embedding;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod quadrature;
pub mod stability;
pub mod warping;

pub use error::{Error, Result};
pub use warping::{Interval, Jet, WarpingModel};

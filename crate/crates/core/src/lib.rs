//! Connection integrals for discretized first-order gravity: moments via
//! jet differentiation, Haar-chart quadrature, closed-form basic integrals
//! with their sinh suppression, and prism-complex bookkeeping.

pub mod error;
pub mod math;
pub mod quadrature;
pub mod special_fn;
pub mod model_integral;
pub mod haar_so3;
pub mod basic_integrals;
pub mod moment_engine;
pub mod simplicial;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

//! Analytic and Monte Carlo evaluation of coverage probability and spatial
//! throughput in networks of hovering fixed-wing UAV access points.

// `!(x > 0.0)` is used throughout on purpose: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod association;
pub mod backhaul;
pub mod cli;
pub mod config;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod spatial;
pub mod specfun;
pub mod sweep;

pub use association::{AssociationRule, ProjectionDensity};
pub use error::{Error, Result};
pub use model::{BackhaulConfig, NetworkConfig};
pub use quadrature::QuadratureSpec;

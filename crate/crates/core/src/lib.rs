//! Finite-difference WENO reconstruction with mapped and Z-type weights,
//! 1-D scalar advection and Euler solvers, and an experiment harness.

pub mod alt_weights;
pub mod error;
pub mod euler;
pub mod harness;
pub mod jet;
pub mod mapping;
pub mod problems;
pub mod scheme;
pub mod tables;
pub mod timeint;
pub mod weno;

pub use error::{BlowUp, Error, Result};
pub use scheme::{BaseWeights, WeightingStrategy};
pub use tables::{StencilTables, MAX_R};

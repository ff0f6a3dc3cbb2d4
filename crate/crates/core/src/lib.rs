//! State-sum invariants of closed oriented 4-manifolds built from the skeletal data of a
//! G-crossed braided spherical fusion category.
//!
//! The usual flow is: obtain a [`GbsfcData`] (from a builder or a JSON file), obtain an
//! [`OrderedTriangulation`], then call [`partition_function`].

pub mod builders;
pub mod category;
mod error;
pub mod format;
pub mod group;
pub mod report;
pub mod scalar;
pub mod statesum;
pub mod triangulation;

pub use category::{GbsfcData, Label};
pub use error::{Error, Result};
pub use group::{Elem, FiniteGroup};
pub use report::{CheckConfig, ValidationReport};
pub use scalar::Scalar;
pub use statesum::{partition_function, partition_function_twisted, PartitionResult, RunConfig};
pub use triangulation::OrderedTriangulation;

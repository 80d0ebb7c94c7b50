//! Hausdorff content, separators and Urysohn width bounds on finite metric
//! spaces, with machine-checkable certificates.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod content;
pub mod error;
pub mod generate;
pub mod harness;
pub mod separator;
pub mod space;
pub mod topology;
pub mod width;

pub use error::{Error, Result};
pub use space::{DiscreteSpace, Links, SpaceDocument, SpaceKind, Subset};

//! Permutation-invariant graph fingerprints.
//!
//! The crate computes a catalog of classical graph invariants (counts,
//! spectra, entropies, curvature, magnitude, homomorphism counts, chemical
//! indices), concatenates them into fixed-width fingerprints, and builds
//! three analyses on top: pairwise differentiation of hard graph pairs,
//! tabular node-feature aggregates, and dataset-membership meta tables.

pub mod error;
pub mod expressivity;
pub mod features;
pub mod generators;
pub mod graph;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod meta;
pub mod registry;
pub mod transport;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Graph, GraphDataset};
pub use invariants::{GraphContext, InvariantValue, Params, Status};

//! Graph-state equivalence under local unitaries.
//!
//! Decides LC-, LC_r- and LU-equivalence of graph states through r-local
//! complementation, with F₂ and ℤ/2^r linear algebra, minimal local sets,
//! standard forms, named graph families, vertex-minor universality tools, and
//! a statevector oracle for cross-checking small instances.

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod f2linalg;
pub mod families;
pub mod glc;
pub mod graph;
pub mod localsets;
pub mod oracle;
pub mod standardform;
pub mod vmu;

pub use error::{GseError, Result};
pub use graph::{Graph, VertexSet};

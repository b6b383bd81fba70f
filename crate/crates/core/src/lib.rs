//! Spectral eigenvalue bounds for Dirac and Laplace operators on submanifolds.

pub mod eigen;
pub mod error;
pub mod inequality;
pub mod mesh;
pub mod model;
pub mod prooflab;
pub mod sparse;

pub use eigen::{solve_dense, solve_smallest, EigenBasis};
pub use error::{Error, Result};
pub use inequality::{Direction, InequalityReport};
pub use mesh::{MeshGeometry, SparseOperatorPair};
pub use model::{EigenvalueSource, Field, Lattice, ModelId, OperatorKind, SpinStructure, Spectrum};

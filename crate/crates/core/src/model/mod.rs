//! Closed-form spectra and extrinsic invariants of model manifolds.

mod extrinsic;
mod projective;
mod sphere;
mod spectrum;
mod torus;

pub use extrinsic::{model_extrinsic, ModelExtrinsic, ModelId};
pub use projective::{
    embedding_sphere_radius, projective_embedding_point, Field, HermitianMatrix, Quaternion,
};
pub use sphere::{
    sphere_dirac_spectrum, sphere_laplace_spectrum, sphere_volume, spherical_harmonic_multiplicity,
    spinor_rank,
};
pub use spectrum::{EigenvalueSource, OperatorKind, SpectralEntry, Spectrum};
pub use torus::{
    torus_dirac_spectrum, torus_laplace_spectrum, Lattice, SpinStructure, MULTIPLICITY_REL_TOL,
};

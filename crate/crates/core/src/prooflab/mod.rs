//! Numerical checks of the identities behind the eigenvalue estimates,
//! run on mesh eigenbases in the scalar setting.

mod expansion;
mod gradient;
mod identities;
mod refinement;
mod triangular;

pub use expansion::{expansion_coefficients, ExpansionTable, BESSEL_TOL};
pub use gradient::{gradient_coupling, vertex_gradients, GradientScheme};
pub use identities::{
    coordinate_identities, verify_anghel_lemma, verify_prop31, CoordinateDiagnostics, ResidualReport, VANISHING_SCALE,
};
pub use refinement::{refinement_csv, refinement_on, refinement_study, RefinementRow, RefinementSettings};
pub use triangular::{gram_schmidt_upper, Triangularization};

/// Default truncation: min(200, basis size).
pub fn default_truncation(basis_len: usize) -> usize {
    basis_len.min(200)
}

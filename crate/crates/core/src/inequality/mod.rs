//! Evaluators for spectral inequalities with signed margins.

mod checks;
mod report;

pub use checks::*;
pub use report::{
    fmt17, reports_to_csv, sum_in_order, Direction, InequalityReport, Provenance, ReportBuilder,
    Terms, EQUALITY_REL_TOL, SATISFIED_REL_TOL,
};

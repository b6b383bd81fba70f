//! Full dense solve, used as an oracle on small meshes.

use nalgebra::{DMatrix, SymmetricEigen};

use super::EigenBasis;
use crate::error::{Error, Result};
use crate::mesh::SparseOperatorPair;

/// All n eigenpairs via the symmetric matrix M^{-1/2} L M^{-1/2}.
pub fn solve_dense(ops: &SparseOperatorPair) -> Result<EigenBasis> {
    let n = ops.mass.len();
    if n == 0 {
        return Err(Error::EmptyRequest("empty operator".into()));
    }
    if n > 4000 {
        return Err(Error::InvalidRequest(format!("dense solve limited to 4000 vertices, got {n}")));
    }
    let inv_sqrt: Vec<f64> = ops.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut c = DMatrix::<f64>::zeros(n, n);
    for r in 0..n {
        for (col, v) in ops.stiffness.row(r) {
            c[(r, col)] = v * inv_sqrt[r] * inv_sqrt[col];
        }
    }
    let c = 0.5 * (&c + c.transpose());
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            eig.eigenvectors
                .column(i)
                .iter()
                .zip(&inv_sqrt)
                .map(|(u, s)| u * s)
                .collect()
        })
        .collect();
    Ok(EigenBasis::assemble(values, vectors, ops, 0))
}

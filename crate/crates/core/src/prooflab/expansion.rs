use serde::{Deserialize, Serialize};

use crate::eigen::EigenBasis;
use crate::error::{Error, Result};

/// Absolute slack allowed above ‖Ψs_j‖² by the Bessel check.
pub const BESSEL_TOL: f64 = 1e-10;

/// α_{jk} = Σ_v Ψ(v)s_j(v)s_k(v)M_vv for k = 1..K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTable {
    pub j: usize,
    pub coefficients: Vec<f64>,
    pub psi_norm_sq: f64,
    pub truncation_k: usize,
}

impl ExpansionTable {
    /// Σ_{k≤K'} α²_{jk} for K' = 1..K.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .scan(0.0, |acc, a| {
                *acc += a * a;
                Some(*acc)
            })
            .collect()
    }

    /// ‖Ψs_j‖² − Σ_{k≤K}α²_{jk}; nonnegative up to rounding.
    pub fn bessel_tail(&self) -> f64 {
        self.psi_norm_sq - self.partial_sums().last().copied().unwrap_or(0.0)
    }

    /// Partial sums are nondecreasing and never exceed ‖Ψs_j‖² + BESSEL_TOL.
    pub fn bessel_holds(&self) -> bool {
        let sums = self.partial_sums();
        sums.windows(2).all(|w| w[1] >= w[0]) && sums.iter().all(|&s| s <= self.psi_norm_sq + BESSEL_TOL)
    }
}

pub fn expansion_coefficients(
    psi: &[f64],
    basis: &EigenBasis,
    mass: &[f64],
    j: usize,
    truncation_k: usize,
) -> Result<ExpansionTable> {
    if j == 0 || j > basis.len() {
        return Err(Error::IndexOutOfRange { requested: j, available: basis.len() });
    }
    if truncation_k == 0 || truncation_k > basis.len() {
        return Err(Error::IndexOutOfRange { requested: truncation_k, available: basis.len() });
    }
    if psi.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: psi.len() });
    }
    if mass.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: mass.len() });
    }
    let sj = &basis.vectors[j - 1];
    let w: Vec<f64> = psi.iter().zip(sj).zip(mass).map(|((p, s), m)| p * s * m).collect();
    let coefficients = basis.vectors[..truncation_k]
        .iter()
        .map(|sk| w.iter().zip(sk).map(|(a, b)| a * b).sum())
        .collect();
    let psi_norm_sq = psi.iter().zip(sj).zip(mass).map(|((p, s), m)| p * p * s * s * m).sum();
    Ok(ExpansionTable { j, coefficients, psi_norm_sq, truncation_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve_dense;
    use crate::mesh::{assemble_operators, icosphere};

    #[test]
    fn constant_psi_gives_kronecker_delta() {
        let m = icosphere(1).unwrap();
        let ops = assemble_operators(&m);
        let basis = solve_dense(&ops).unwrap();
        let t = expansion_coefficients(&vec![1.0; m.num_vertices()], &basis, &ops.mass, 3, 10).unwrap();
        for (k, a) in t.coefficients.iter().enumerate() {
            let expected = if k == 2 { 1.0 } else { 0.0 };
            assert!((a - expected).abs() < 1e-10);
        }
        assert!(t.bessel_holds());
    }

    #[test]
    fn full_basis_is_parseval() {
        let m = icosphere(1).unwrap();
        let ops = assemble_operators(&m);
        let basis = solve_dense(&ops).unwrap();
        let psi = m.coordinate(2);
        let t = expansion_coefficients(&psi, &basis, &ops.mass, 4, basis.len()).unwrap();
        assert!(t.bessel_tail().abs() < 1e-12);
        assert!(t.bessel_holds());
    }

    #[test]
    fn bad_indices() {
        let m = icosphere(0).unwrap();
        let ops = assemble_operators(&m);
        let basis = solve_dense(&ops).unwrap();
        let psi = vec![1.0; 12];
        assert!(expansion_coefficients(&psi, &basis, &ops.mass, 0, 3).is_err());
        assert!(expansion_coefficients(&psi, &basis, &ops.mass, 13, 3).is_err());
        assert!(expansion_coefficients(&psi, &basis, &ops.mass, 1, 13).is_err());
        assert!(expansion_coefficients(&psi[..5], &basis, &ops.mass, 1, 3).is_err());
    }
}

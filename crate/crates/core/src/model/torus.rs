//! Flat tori ℝⁿ/Λ: Laplace and Dirac spectra by dual-lattice shell enumeration.
//!
//! Dual convention: γ ∈ Λ* iff ⟨γ, λ⟩ ∈ 2πℤ for every λ ∈ Λ, so the dual basis is
//! 2π·B⁻ᵀ and eigenvalues are ‖γ + δ‖² with no extra 4π² factor. A spin structure
//! is a half-integer shift δ expressed in the dual basis.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::sphere::spinor_rank;
use super::spectrum::{OperatorKind, Spectrum};
use crate::error::{Error, Result};

/// Relative tolerance for merging enumerated values into one eigenvalue.
pub const MULTIPLICITY_REL_TOL: f64 = 1e-9;

/// A full-rank lattice in ℝⁿ; columns of `basis` are the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    basis: DMatrix<f64>,
}

impl Lattice {
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != basis.ncols() || basis.nrows() == 0 {
            return Err(Error::InvalidModel(format!(
                "lattice basis must be square, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidModel("lattice basis has non-finite entries".into()));
        }
        let det = basis.determinant();
        let scale = basis.column_iter().map(|c| c.norm()).product::<f64>();
        if det.abs() <= 1e-12 * scale || det == 0.0 {
            return Err(Error::InvalidModel("lattice basis is singular".into()));
        }
        Ok(Self { basis })
    }

    /// Basis from row-major entries, e.g. `[[a, b], [c, d]]` means columns (a, c) and (b, d).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidModel("lattice rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// side·ℤⁿ
    pub fn cubic(n: usize, side: f64) -> Result<Self> {
        Self::new(DMatrix::from_diagonal_element(n, n, side))
    }

    /// Orthogonal lattice with the given side lengths.
    pub fn rectangular(sides: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(sides)))
    }

    /// Intrinsic lattice of the Clifford torus S¹(1/√2)×S¹(1/√2): √2π·ℤ².
    pub fn clifford() -> Self {
        Self::cubic(2, std::f64::consts::SQRT_2 * PI).expect("nonsingular")
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn covolume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    /// Columns generate Λ* = {γ : ⟨γ, λ⟩ ∈ 2πℤ}.
    pub fn dual_basis(&self) -> DMatrix<f64> {
        let inv = self
            .basis
            .clone()
            .try_inverse()
            .expect("basis checked nonsingular");
        inv.transpose() * (2.0 * PI)
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(&self.basis * t)
    }

    /// Same lattice, different basis: B·U for unimodular integer U.
    pub fn rebased(&self, unimodular: &DMatrix<i64>) -> Result<Self> {
        let u = unimodular.map(|x| x as f64);
        if (u.determinant().abs() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModel("change of basis is not unimodular".into()));
        }
        Self::new(&self.basis * u)
    }

    /// Side lengths when the generators are mutually orthogonal.
    pub fn orthogonal_sides(&self) -> Option<Vec<f64>> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let ci = self.basis.column(i);
                let cj = self.basis.column(j);
                if ci.dot(&cj).abs() > 1e-12 * ci.norm() * cj.norm() {
                    return None;
                }
            }
        }
        Some(self.basis.column_iter().map(|c| c.norm()).collect())
    }
}

/// Half-integer shift of the dual lattice, one of the 2ⁿ spin structures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinStructure {
    shift: Vec<f64>,
}

impl SpinStructure {
    pub fn new(shift: Vec<f64>) -> Result<Self> {
        let mut clean = Vec::with_capacity(shift.len());
        for s in shift {
            if s.abs() < 1e-12 {
                clean.push(0.0);
            } else if (s - 0.5).abs() < 1e-12 {
                clean.push(0.5);
            } else {
                return Err(Error::InvalidModel(format!(
                    "spin shift component {s} must be 0 or 1/2"
                )));
            }
        }
        Ok(Self { shift: clean })
    }

    pub fn trivial(n: usize) -> Self {
        Self { shift: vec![0.0; n] }
    }

    /// All 2ⁿ structures in lexicographic order of the shift vector.
    pub fn all(n: usize) -> Vec<Self> {
        (0..1usize << n)
            .map(|bits| Self {
                shift: (0..n)
                    .map(|i| if bits >> (n - 1 - i) & 1 == 1 { 0.5 } else { 0.0 })
                    .collect(),
            })
            .collect()
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.shift.iter().map(|s| format!("{s}")).collect();
        format!("({})", parts.join(","))
    }
}

/// Every squared norm ‖G*(k + δ)‖² strictly below `radius²`, sorted ascending.
fn enumerate_shell(dual: &DMatrix<f64>, shift: &[f64], radius: f64) -> Vec<f64> {
    let n = dual.nrows();
    // k + δ = G*⁻¹ γ, so |k_i + δ_i| ≤ ‖row_i(G*⁻¹)‖·‖γ‖.
    let inv = dual.clone().try_inverse().expect("dual of a nonsingular lattice");
    let bounds: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let reach = inv.row(i).norm() * radius;
            (
                (-reach - shift[i]).floor() as i64,
                (reach - shift[i]).ceil() as i64,
            )
        })
        .collect();
    let r2 = radius * radius;
    let mut out = Vec::new();
    let mut coeff = vec![0.0; n];
    let mut point = vec![0.0; n];
    enumerate_box(dual, shift, &bounds, 0, &mut coeff, &mut point, r2, &mut out);
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_box(
    dual: &DMatrix<f64>,
    shift: &[f64],
    bounds: &[(i64, i64)],
    depth: usize,
    coeff: &mut [f64],
    point: &mut [f64],
    r2: f64,
    out: &mut Vec<f64>,
) {
    let n = bounds.len();
    if depth == n {
        for (r, p) in point.iter_mut().enumerate() {
            *p = (0..n).map(|c| dual[(r, c)] * coeff[c]).sum();
        }
        let norm2: f64 = point.iter().map(|x| x * x).sum();
        if norm2 < r2 {
            out.push(norm2);
        }
        return;
    }
    for k in bounds[depth].0..=bounds[depth].1 {
        coeff[depth] = k as f64 + shift[depth];
        enumerate_box(dual, shift, bounds, depth + 1, coeff, point, r2, out);
    }
}

fn shell_spectrum(
    lat: &Lattice,
    shift: &[f64],
    rank: usize,
    count: usize,
    operator: OperatorKind,
) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::EmptyRequest("eigenvalue count must be positive".into()));
    }
    let dual = lat.dual_basis();
    let mut radius = dual
        .column_iter()
        .map(|c| c.norm())
        .fold(f64::INFINITY, f64::min);
    // Everything strictly inside the ball is enumerated, so values below radius² are complete.
    let values = loop {
        let values = enumerate_shell(&dual, shift, radius);
        if values.len() * rank >= count {
            break values;
        }
        radius *= 1.5;
    };
    let repeated: Vec<f64> = values
        .iter()
        .flat_map(|&v| std::iter::repeat_n(v, rank))
        .collect();
    Ok(Spectrum::from_sorted_values(operator, &repeated, MULTIPLICITY_REL_TOL)?.truncated(count))
}

/// First `count` eigenvalues of D² on ℝⁿ/Λ with the given spin structure.
/// Each dual vector contributes multiplicity 2^⌊n/2⌋.
pub fn torus_dirac_spectrum(lat: &Lattice, spin: &SpinStructure, count: usize) -> Result<Spectrum> {
    if spin.dim() != lat.dim() {
        return Err(Error::DimensionMismatch {
            expected: lat.dim(),
            got: spin.dim(),
        });
    }
    shell_spectrum(
        lat,
        spin.shift(),
        spinor_rank(lat.dim()),
        count,
        OperatorKind::DiracSquared,
    )
}

/// First `count` eigenvalues of the positive Laplacian on ℝⁿ/Λ.
pub fn torus_laplace_spectrum(lat: &Lattice, count: usize) -> Result<Spectrum> {
    shell_spectrum(lat, &vec![0.0; lat.dim()], 1, count, OperatorKind::Laplace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EigenvalueSource;

    fn square() -> Lattice {
        Lattice::cubic(2, 2.0 * PI).unwrap()
    }

    #[test]
    fn trivial_spin_has_harmonic_spinors() {
        let s = torus_dirac_spectrum(&square(), &SpinStructure::trivial(2), 2).unwrap();
        assert_eq!(s.values(), vec![0.0, 0.0]);
        assert_eq!(s.zero_dim(), 2);
    }

    #[test]
    fn half_shift_first_value() {
        let spin = SpinStructure::new(vec![0.5, 0.5]).unwrap();
        let s = torus_dirac_spectrum(&square(), &spin, 9).unwrap();
        assert!((s.gamma(1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(s.entries()[0].multiplicity, 8);
        assert!((s.gamma(9).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn laplace_square_and_rectangle() {
        let s = torus_laplace_spectrum(&square(), 5).unwrap();
        let v = s.values();
        assert_eq!(v[0], 0.0);
        for x in &v[1..] {
            assert!((x - 1.0).abs() < 1e-14);
        }
        let circle = torus_laplace_spectrum(&Lattice::cubic(1, 2.0 * PI).unwrap(), 3).unwrap();
        assert!((circle.gamma_bar(1).unwrap() - 1.0).abs() < 1e-14);
        let rect = Lattice::rectangular(&[2.0 * PI, 4.0 * PI]).unwrap();
        let s = torus_laplace_spectrum(&rect, 3).unwrap();
        assert!((s.gamma_bar(1).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn spin_structures_enumerated_in_order() {
        let all = SpinStructure::all(2);
        assert_eq!(all.len(), 4);
        assert_eq!(all[0].shift(), &[0.0, 0.0]);
        assert_eq!(all[1].shift(), &[0.0, 0.5]);
        assert_eq!(all[3].shift(), &[0.5, 0.5]);
        assert!(SpinStructure::new(vec![0.3]).is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            torus_dirac_spectrum(&square(), &SpinStructure::trivial(2), 0),
            Err(Error::EmptyRequest(_))
        ));
        assert!(matches!(
            torus_dirac_spectrum(&square(), &SpinStructure::trivial(3), 4),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Lattice::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
    }

    #[test]
    fn dual_pairing_is_2pi_integral() {
        let lat = Lattice::from_rows(&[vec![1.0, 0.3], vec![0.2, 1.7]]).unwrap();
        let pairing = lat.dual_basis().transpose() * lat.basis();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 2.0 * PI } else { 0.0 };
                assert!((pairing[(i, j)] - expect).abs() < 1e-12);
            }
        }
    }
}

use serde::{Deserialize, Serialize};

use super::expansion::expansion_coefficients;
use super::gradient::{gradient_coupling, vertex_gradients, GradientScheme};
use crate::eigen::EigenBasis;
use crate::error::{Error, Result};
use crate::inequality::weighted_density_integral;
use crate::mesh::{coordinate_laplacians, face_gradients, MeshGeometry, SparseOperatorPair};

/// Sides smaller than this are treated as exact zeros.
pub const VANISHING_SCALE: f64 = 1e-12;

/// Both sides of a discretized identity and their disagreement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity: String,
    pub j: usize,
    pub truncation_k: Option<usize>,
    pub scheme: GradientScheme,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// |lhs − rhs| / max(|lhs|, |rhs|), or 0 when both sides are below
    /// [`VANISHING_SCALE`].
    pub relative_residual: f64,
}

impl ResidualReport {
    fn new(identity: &str, j: usize, truncation_k: Option<usize>, scheme: GradientScheme, lhs: f64, rhs: f64) -> Self {
        let residual = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let relative_residual = if scale > VANISHING_SCALE { residual / scale } else { 0.0 };
        Self { identity: identity.into(), j, truncation_k, scheme, lhs, rhs, residual, relative_residual }
    }
}

fn eigenvector<'a>(basis: &'a EigenBasis, ops: &SparseOperatorPair, j: usize) -> Result<&'a [f64]> {
    if j == 0 || j > basis.len() {
        return Err(Error::IndexOutOfRange { requested: j, available: basis.len() });
    }
    if basis.dim() != ops.dim() {
        return Err(Error::DimensionMismatch { expected: ops.dim(), got: basis.dim() });
    }
    let s = &basis.vectors[j - 1];
    weighted_density_integral(&vec![1.0; s.len()], s, &ops.mass)?;
    Ok(s)
}

/// Σ_{k≤K}(Γ_k − Γ_j)α²_{jk} against Σ_v M_v (ΔΨ·s_j − 2⟨gradΨ, grad s_j⟩)Ψs_j.
pub fn verify_prop31(
    mesh: &MeshGeometry,
    ops: &SparseOperatorPair,
    psi: &[f64],
    basis: &EigenBasis,
    j: usize,
    truncation_k: usize,
    scheme: GradientScheme,
) -> Result<ResidualReport> {
    let s = eigenvector(basis, ops, j)?;
    let table = expansion_coefficients(psi, basis, &ops.mass, j, truncation_k)?;
    let gj = basis.values[j - 1];
    let lhs: f64 = table
        .coefficients
        .iter()
        .zip(&basis.values)
        .map(|(a, g)| (g - gj) * a * a)
        .sum();
    let lpsi = ops.stiffness.mul_vec(psi);
    let coupling = gradient_coupling(mesh, ops, psi, s, scheme);
    let rhs: f64 = (0..psi.len())
        .map(|v| {
            let delta_psi = lpsi[v] / ops.mass[v];
            ops.mass[v] * (delta_psi * s[v] - 2.0 * coupling[v]) * psi[v] * s[v]
        })
        .sum();
    Ok(ResidualReport::new("prop31", j, Some(truncation_k), scheme, lhs, rhs))
}

/// Σ_A ‖Δx_A s_j − 2⟨grad x_A, grad s_j⟩‖² against 4Γ_j + n²∫H²s_j².
pub fn verify_anghel_lemma(
    mesh: &MeshGeometry,
    ops: &SparseOperatorPair,
    basis: &EigenBasis,
    j: usize,
    scheme: GradientScheme,
) -> Result<ResidualReport> {
    let s = eigenvector(basis, ops, j)?;
    let n = 2.0;
    let dx = coordinate_laplacians(mesh, ops);
    let mut lhs = 0.0;
    let mut h_sq = vec![0.0; s.len()];
    for (a, d) in dx.iter().enumerate() {
        let coupling = gradient_coupling(mesh, ops, &mesh.coordinate(a), s, scheme);
        for v in 0..s.len() {
            let t = d[v] * s[v] - 2.0 * coupling[v];
            lhs += ops.mass[v] * t * t;
            h_sq[v] += d[v] * d[v] / (n * n);
        }
    }
    let rhs = 4.0 * basis.values[j - 1] + n * n * weighted_density_integral(&h_sq, s, &ops.mass)?;
    Ok(ResidualReport::new("anghel_lemma", j, None, scheme, lhs, rhs))
}

/// Residuals of the pointwise coordinate identities on a surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateDiagnostics {
    /// max over faces of |Σ_A|grad x_A|² − 2|.
    pub gradient_trace_max: f64,
    /// max over vertices of |Σ_A(Δx_A)² − n²H²|.
    pub laplacian_h_sq_max: f64,
    /// max over vertices of |Σ_A Δx_A grad x_A|.
    pub tangential_max: f64,
    /// ‖Σ_A Δx_A grad x_A‖ relative to ‖(Δx_A)_A‖, both in L²(M).
    pub tangential_rel_l2: f64,
}

pub fn coordinate_identities(mesh: &MeshGeometry, ops: &SparseOperatorPair) -> CoordinateDiagnostics {
    let n = 2.0;
    let dx = coordinate_laplacians(mesh, ops);
    let h_sq = crate::mesh::mean_curvature_field(mesh, ops);

    let mut gradient_trace_max: f64 = 0.0;
    for (fi, face) in mesh.faces().iter().enumerate() {
        let grads = face_gradients(mesh, fi);
        let mut trace = 0.0;
        for a in 0..3 {
            let mut g = [0.0; 3];
            for (k, &v) in face.iter().enumerate() {
                for c in 0..3 {
                    g[c] += mesh.vertices()[v][a] * grads[k][c];
                }
            }
            trace += g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        }
        gradient_trace_max = gradient_trace_max.max((trace - 2.0).abs());
    }

    let grads: Vec<_> = (0..3).map(|a| vertex_gradients(mesh, &mesh.coordinate(a))).collect();
    let mut laplacian_h_sq_max: f64 = 0.0;
    let mut tangential_max: f64 = 0.0;
    let (mut tan_sq, mut dx_sq) = (0.0, 0.0);
    for v in 0..mesh.num_vertices() {
        let sum_sq: f64 = dx.iter().map(|d| d[v] * d[v]).sum();
        laplacian_h_sq_max = laplacian_h_sq_max.max((sum_sq - n * n * h_sq[v]).abs());
        let mut t = [0.0; 3];
        for a in 0..3 {
            for c in 0..3 {
                t[c] += dx[a][v] * grads[a][v][c];
            }
        }
        let t_sq = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];
        tangential_max = tangential_max.max(t_sq.sqrt());
        tan_sq += ops.mass[v] * t_sq;
        dx_sq += ops.mass[v] * sum_sq;
    }
    let tangential_rel_l2 = if dx_sq > 0.0 { (tan_sq / dx_sq).sqrt() } else { 0.0 };
    CoordinateDiagnostics { gradient_trace_max, laplacian_h_sq_max, tangential_max, tangential_rel_l2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve_dense;
    use crate::mesh::{assemble_operators, icosphere, mean_curvature_field, torus};

    #[test]
    fn constant_psi_gives_zero_on_both_sides() {
        let m = icosphere(2).unwrap();
        let ops = assemble_operators(&m);
        let basis = solve_dense(&ops).unwrap();
        let r = verify_prop31(&m, &ops, &vec![2.0; m.num_vertices()], &basis, 5, basis.len(), GradientScheme::Edge)
            .unwrap();
        assert!(r.lhs.abs() < 1e-9 && r.rhs.abs() < 1e-9);
    }

    #[test]
    fn prop31_edge_scheme_is_exact_with_full_basis() {
        let m = icosphere(2).unwrap();
        let ops = assemble_operators(&m);
        let basis = solve_dense(&ops).unwrap();
        for j in [2, 7, 30] {
            let psi = basis.vectors[j - 1].clone();
            let r = verify_prop31(&m, &ops, &psi, &basis, j, basis.len(), GradientScheme::Edge).unwrap();
            assert!(r.relative_residual < 1e-8, "j={j}: {r:?}");
        }
    }

    #[test]
    fn anghel_first_mode_closes_the_loop() {
        let m = icosphere(2).unwrap();
        let ops = assemble_operators(&m);
        let basis = solve_dense(&ops).unwrap();
        let r = verify_anghel_lemma(&m, &ops, &basis, 1, GradientScheme::FaceAveraged).unwrap();
        let h = mean_curvature_field(&m, &ops);
        let direct = 4.0 * h.iter().zip(&ops.mass).map(|(a, b)| a * b).sum::<f64>() / m.total_area();
        assert!((r.rhs - direct).abs() <= 1e-10 * direct);
        assert!(r.relative_residual < 1e-8);
    }

    #[test]
    fn coordinate_identity_diagnostics() {
        for m in [icosphere(2).unwrap(), torus(2.0, 0.7, 24, 12).unwrap()] {
            let ops = assemble_operators(&m);
            let d = coordinate_identities(&m, &ops);
            assert!(d.gradient_trace_max < 1e-12);
            assert!(d.laplacian_h_sq_max < 1e-12 * 100.0);
        }
        let coarse = icosphere(2).unwrap();
        let fine = icosphere(3).unwrap();
        let a = coordinate_identities(&coarse, &assemble_operators(&coarse));
        let b = coordinate_identities(&fine, &assemble_operators(&fine));
        assert!(b.tangential_rel_l2 < a.tangential_rel_l2);
    }
}

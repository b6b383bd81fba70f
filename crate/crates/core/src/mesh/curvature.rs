//! Discrete mean curvature, angle-defect scalar curvature and their aggregates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{assemble_operators, dot, norm, sub, MeshGeometry, SparseOperatorPair};

/// Δf = M⁻¹Lf with the positive sign convention.
pub fn laplacian_of(ops: &SparseOperatorPair, field: &[f64]) -> Vec<f64> {
    let mut y = ops.stiffness.mul_vec(field);
    for (v, m) in y.iter_mut().zip(&ops.mass) {
        *v /= m;
    }
    y
}

/// Δx_A for the three ambient coordinates.
pub fn coordinate_laplacians(mesh: &MeshGeometry, ops: &SparseOperatorPair) -> [Vec<f64>; 3] {
    [0, 1, 2].map(|a| laplacian_of(ops, &mesh.coordinate(a)))
}

/// H² = Σ_A (Δx_A)² / n² with n = 2.
pub fn mean_curvature_field(mesh: &MeshGeometry, ops: &SparseOperatorPair) -> Vec<f64> {
    let lx = coordinate_laplacians(mesh, ops);
    (0..mesh.num_vertices())
        .map(|v| (lx[0][v].powi(2) + lx[1][v].powi(2) + lx[2][v].powi(2)) / 4.0)
        .collect()
}

/// 2π minus the sum of incident corner angles at every vertex.
pub fn angle_defects(mesh: &MeshGeometry) -> Vec<f64> {
    let verts = mesh.vertices();
    let mut defect = vec![2.0 * PI; mesh.num_vertices()];
    for f in mesh.faces() {
        for k in 0..3 {
            let (o, i, j) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
            let (u, w) = (sub(verts[i], verts[o]), sub(verts[j], verts[o]));
            let c = (dot(u, w) / (norm(u) * norm(w))).clamp(-1.0, 1.0);
            defect[o] -= c.acos();
        }
    }
    defect
}

/// S = 2K with K the angle defect per unit vertex area.
pub fn scalar_curvature_field(mesh: &MeshGeometry) -> Vec<f64> {
    angle_defects(mesh)
        .iter()
        .zip(mesh.vertex_area())
        .map(|(d, a)| 2.0 * d / a)
        .collect()
}

/// Per-vertex curvature fields and their integrals for a surface in ℝ³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrinsicData {
    pub n: usize,
    pub h_sq: Vec<f64>,
    pub scalar_curvature: Vec<f64>,
    pub b_sq: Vec<f64>,
    pub willmore: f64,
    pub volume: f64,
    pub kappa: f64,
    pub b_sq_clamped: usize,
    pub clamped_cotangents: usize,
}

/// Scalar digest of [`ExtrinsicData`] for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrinsicSummary {
    pub n: usize,
    pub willmore: f64,
    pub volume: f64,
    pub kappa: f64,
    pub h_sq_min: f64,
    pub h_sq_max: f64,
    pub scalar_curvature_min: f64,
    pub scalar_curvature_max: f64,
    pub b_sq_max: f64,
    pub total_curvature: f64,
    pub b_sq_clamped: usize,
    pub clamped_cotangents: usize,
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

impl ExtrinsicData {
    /// ∫H² dv.
    pub fn integral_h_sq(&self) -> f64 {
        self.willmore
    }

    pub fn h_sq_max(&self) -> f64 {
        min_max(&self.h_sq).1
    }

    pub fn b_sq_max(&self) -> f64 {
        min_max(&self.b_sq).1
    }

    pub fn summary(&self, mesh: &MeshGeometry) -> ExtrinsicSummary {
        let (h_lo, h_hi) = min_max(&self.h_sq);
        let (s_lo, s_hi) = min_max(&self.scalar_curvature);
        let total_curvature = self
            .scalar_curvature
            .iter()
            .zip(mesh.vertex_area())
            .map(|(s, a)| 0.5 * s * a)
            .sum();
        ExtrinsicSummary {
            n: self.n,
            willmore: self.willmore,
            volume: self.volume,
            kappa: self.kappa,
            h_sq_min: h_lo,
            h_sq_max: h_hi,
            scalar_curvature_min: s_lo,
            scalar_curvature_max: s_hi,
            b_sq_max: self.b_sq_max(),
            total_curvature,
            b_sq_clamped: self.b_sq_clamped,
            clamped_cotangents: self.clamped_cotangents,
        }
    }
}

pub fn extrinsic_summary(mesh: &MeshGeometry) -> ExtrinsicData {
    extrinsic_summary_with(mesh, &assemble_operators(mesh))
}

pub fn extrinsic_summary_with(mesh: &MeshGeometry, ops: &SparseOperatorPair) -> ExtrinsicData {
    let h_sq = mean_curvature_field(mesh, ops);
    let s = scalar_curvature_field(mesh);
    let mut b_sq_clamped = 0;
    let b_sq = h_sq
        .iter()
        .zip(&s)
        .map(|(h, s)| {
            let b = 4.0 * h - s;
            if b < 0.0 {
                b_sq_clamped += 1;
                0.0
            } else {
                b
            }
        })
        .collect();
    let willmore = h_sq.iter().zip(mesh.vertex_area()).map(|(h, a)| h * a).sum();
    ExtrinsicData {
        n: 2,
        h_sq,
        scalar_curvature: s,
        b_sq,
        willmore,
        volume: mesh.total_area(),
        kappa: 0.0,
        b_sq_clamped,
        clamped_cotangents: ops.clamped_cotangents,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cube, icosphere, torus};

    #[test]
    fn gauss_bonnet_is_exact() {
        let s = icosphere(3).unwrap();
        let d: f64 = angle_defects(&s).iter().sum();
        assert!((d - 4.0 * PI).abs() < 1e-9);
        let t = torus(2.0, 0.7, 30, 15).unwrap();
        let d: f64 = angle_defects(&t).iter().sum();
        assert!(d.abs() < 1e-9);
    }

    #[test]
    fn cube_curvature_sits_at_corners() {
        let c = cube(1.0).unwrap();
        for d in angle_defects(&c) {
            assert!((d - PI / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_law_for_mean_curvature() {
        let m = icosphere(2).unwrap();
        let big = m.scaled(3.0).unwrap();
        let h = mean_curvature_field(&m, &assemble_operators(&m));
        let hb = mean_curvature_field(&big, &assemble_operators(&big));
        for (a, b) in h.iter().zip(&hb) {
            assert!((a / 9.0 - b).abs() <= 1e-10 * a);
        }
    }

    #[test]
    fn summary_is_consistent() {
        let m = icosphere(3).unwrap();
        let e = extrinsic_summary(&m);
        let w: f64 = e.h_sq.iter().zip(m.vertex_area()).map(|(h, a)| h * a).sum();
        assert!((w - e.willmore).abs() <= 1e-12 * w);
        assert!(e.b_sq.iter().all(|&b| b >= 0.0));
        let s = e.summary(&m);
        assert!((s.total_curvature - 4.0 * PI).abs() < 1e-9);
        assert!((e.willmore - 4.0 * PI).abs() / (4.0 * PI) < 0.05);
    }
}

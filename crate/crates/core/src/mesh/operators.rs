//! Cotangent stiffness and lumped mass.

use serde::Serialize;

use super::{cross, dot, norm, sub, MeshGeometry, Vec3};
use crate::sparse::CsrMatrix;

/// Largest cotangent magnitude admitted into the stiffness matrix.
pub const COT_CLAMP: f64 = 1e8;

/// Positive-semidefinite stiffness `L` and diagonal mass `M` of a mesh.
#[derive(Debug, Clone)]
pub struct SparseOperatorPair {
    pub stiffness: CsrMatrix,
    pub mass: Vec<f64>,
    pub clamped_cotangents: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorMetadata {
    pub vertices: usize,
    pub nnz: usize,
    pub clamped_cotangents: usize,
}

impl SparseOperatorPair {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    pub fn mass_matrix(&self) -> CsrMatrix {
        CsrMatrix::from_diagonal(&self.mass)
    }

    /// Same stiffness with the mass multiplied by `c`.
    pub fn with_mass_scaled(&self, c: f64) -> Self {
        Self {
            stiffness: self.stiffness.clone(),
            mass: self.mass.iter().map(|m| c * m).collect(),
            clamped_cotangents: self.clamped_cotangents,
        }
    }

    pub fn metadata(&self) -> OperatorMetadata {
        OperatorMetadata {
            vertices: self.dim(),
            nnz: self.stiffness.nnz(),
            clamped_cotangents: self.clamped_cotangents,
        }
    }
}

fn cot(u: Vec3, v: Vec3) -> f64 {
    dot(u, v) / norm(cross(u, v))
}

pub fn assemble_operators(mesh: &MeshGeometry) -> SparseOperatorPair {
    let verts = mesh.vertices();
    let mut triplets = Vec::with_capacity(mesh.num_faces() * 12);
    let mut clamped = 0usize;
    for f in mesh.faces() {
        for k in 0..3 {
            let (o, i, j) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
            let mut c = cot(sub(verts[i], verts[o]), sub(verts[j], verts[o]));
            if !c.is_finite() || c.abs() > COT_CLAMP {
                clamped += 1;
                c = if c.is_nan() { 0.0 } else { c.clamp(-COT_CLAMP, COT_CLAMP) };
            }
            let w = 0.5 * c;
            triplets.extend([(i, j, -w), (j, i, -w), (i, i, w), (j, j, w)]);
        }
    }
    if clamped > 0 {
        log::warn!("clamped {clamped} cotangent weights");
    }
    SparseOperatorPair {
        stiffness: CsrMatrix::from_triplets(mesh.num_vertices(), &triplets),
        mass: mesh.vertex_area().to_vec(),
        clamped_cotangents: clamped,
    }
}

/// Gradients of the three hat functions on face `f`, in face-vertex order.
pub fn face_gradients(mesh: &MeshGeometry, f: usize) -> [Vec3; 3] {
    let verts = mesh.vertices();
    let face = mesh.faces()[f];
    let [a, b, c] = face.map(|i| verts[i]);
    let n = cross(sub(b, a), sub(c, a));
    let twice_area_sq = dot(n, n);
    let grad = |p: Vec3, q: Vec3| {
        // ∇φ for the vertex opposite edge p→q: (n × (q − p)) / |n|²
        let g = cross(n, sub(q, p));
        [g[0] / twice_area_sq, g[1] / twice_area_sq, g[2] / twice_area_sq]
    };
    [grad(b, c), grad(c, a), grad(a, b)]
}

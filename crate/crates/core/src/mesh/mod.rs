//! Closed oriented triangle meshes in ℝ³, their cotangent operators and
//! discrete curvature.

mod curvature;
mod generators;
mod io;
mod operators;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use curvature::{
    angle_defects, coordinate_laplacians, extrinsic_summary, extrinsic_summary_with,
    laplacian_of, mean_curvature_field, scalar_curvature_field, ExtrinsicData, ExtrinsicSummary,
};
pub use generators::{cube, ellipsoid, icosphere, tetrahedron, torus, two_spheres};
pub use io::{load_mesh, parse_obj, parse_off, save_off, write_off, MeshFormat};
pub use operators::{assemble_operators, face_gradients, SparseOperatorPair, COT_CLAMP};

pub type Vec3 = [f64; 3];

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Relative threshold on triangle area, in units of the squared bounding-box diagonal.
pub const DEGENERATE_AREA_REL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshGeometry {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    vertex_area: Vec<f64>,
    total_area: f64,
}

impl MeshGeometry {
    /// Validates and builds a mesh. Checks run in a fixed order so that the
    /// reported defect is deterministic.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.is_empty() || faces.is_empty() {
            return Err(Error::InvalidMesh("mesh has no vertices or no faces".into()));
        }
        if let Some(i) = vertices.iter().position(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidMesh(format!("vertex {i} has a non-finite coordinate")));
        }
        let nv = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            if f.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("face {fi} references a missing vertex")));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::DegenerateFace(fi));
            }
        }

        // undirected edge -> (face count, count of the (lo, hi) direction)
        let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for f in &faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let e = edges.entry((a.min(b), a.max(b))).or_insert((0, 0));
                e.0 += 1;
                if a < b {
                    e.1 += 1;
                }
            }
        }
        let mut sorted: Vec<_> = edges.into_iter().collect();
        sorted.sort_unstable_by_key(|e| e.0);
        if let Some(((a, b), _)) = sorted.iter().find(|e| e.1 .0 == 1) {
            return Err(Error::ClosedSurfaceRequired(*a, *b));
        }
        if let Some(((a, b), (c, _))) = sorted.iter().find(|e| e.1 .0 > 2) {
            return Err(Error::NonManifoldEdge(*a, *b, *c));
        }
        if let Some(((a, b), _)) = sorted.iter().find(|e| e.1 .1 != 1) {
            return Err(Error::InconsistentOrientation(*a, *b));
        }

        let diag_sq = bounding_box_diagonal(&vertices).powi(2);
        let mut vertex_area = vec![0.0; nv];
        let mut used = vec![false; nv];
        for (fi, f) in faces.iter().enumerate() {
            let area = triangle_area(&vertices, f);
            if !(area > DEGENERATE_AREA_REL * diag_sq) {
                return Err(Error::DegenerateFace(fi));
            }
            for &v in f {
                vertex_area[v] += area / 3.0;
                used[v] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("vertex {i} is not used by any face")));
        }
        let total_area = vertex_area.iter().sum();
        Ok(Self { vertices, faces, vertex_area, total_area })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex_area(&self) -> &[f64] {
        &self.vertex_area
    }

    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_area(&self, f: usize) -> f64 {
        triangle_area(&self.vertices, &self.faces[f])
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        let edges = 3 * self.faces.len() / 2;
        self.vertices.len() as i64 - edges as i64 + self.faces.len() as i64
    }

    pub fn bounding_box_diagonal(&self) -> f64 {
        bounding_box_diagonal(&self.vertices)
    }

    /// Coordinate function x_A as a per-vertex field.
    pub fn coordinate(&self, a: usize) -> Vec<f64> {
        self.vertices.iter().map(|v| v[a]).collect()
    }

    /// Re-validated copy with every vertex mapped through `f`.
    pub fn map_vertices(&self, f: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&v| f(v)).collect(), self.faces.clone())
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        self.map_vertices(|v| [t * v[0], t * v[1], t * v[2]])
    }

    /// Enclosed volume by the divergence theorem; positive for outward orientation.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = f.map(|i| self.vertices[i]);
                dot(a, cross(b, c)) / 6.0
            })
            .sum()
    }
}

fn triangle_area(vertices: &[Vec3], f: &[usize; 3]) -> f64 {
    let [a, b, c] = f.map(|i| vertices[i]);
    0.5 * norm(cross(sub(b, a), sub(c, a)))
}

fn bounding_box_diagonal(vertices: &[Vec3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for v in vertices {
        for k in 0..3 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    norm(sub(hi, lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tet_faces() -> Vec<[usize; 3]> {
        vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]]
    }

    fn tet_vertices() -> Vec<Vec3> {
        vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    }

    #[test]
    fn accepts_closed_tetrahedron() {
        let m = MeshGeometry::new(tet_vertices(), tet_faces()).unwrap();
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.signed_volume() > 0.0);
        let sum: f64 = m.vertex_area().iter().sum();
        assert!((sum - m.total_area()).abs() <= 1e-12 * m.total_area());
    }

    #[test]
    fn rejects_open_surface() {
        let mut f = tet_faces();
        f.pop();
        assert!(matches!(
            MeshGeometry::new(tet_vertices(), f),
            Err(Error::ClosedSurfaceRequired(..))
        ));
    }

    #[test]
    fn rejects_flipped_face() {
        let mut f = tet_faces();
        f[0] = [0, 1, 2];
        assert!(matches!(
            MeshGeometry::new(tet_vertices(), f),
            Err(Error::InconsistentOrientation(..))
        ));
    }

    #[test]
    fn rejects_fin() {
        let mut v = tet_vertices();
        v.push([1.0, 1.0, 1.0]);
        let mut f = tet_faces();
        f.extend([[0, 1, 4], [1, 0, 4]]);
        assert!(matches!(MeshGeometry::new(v, f), Err(Error::NonManifoldEdge(0, 1, 4))));
    }

    #[test]
    fn rejects_degenerate_and_isolated() {
        let mut v = tet_vertices();
        v[3] = [0.5, 0.5, 0.0];
        assert!(matches!(MeshGeometry::new(v, tet_faces()), Err(Error::DegenerateFace(_))));
        let mut v = tet_vertices();
        v.push([5.0, 5.0, 5.0]);
        assert!(matches!(MeshGeometry::new(v, tet_faces()), Err(Error::InvalidMesh(_))));
        assert!(MeshGeometry::new(tet_vertices(), vec![[0, 0, 1]]).is_err());
        assert!(MeshGeometry::new(tet_vertices(), vec![[0, 1, 9]]).is_err());
    }
}

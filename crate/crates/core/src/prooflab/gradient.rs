use serde::{Deserialize, Serialize};

use crate::mesh::{face_gradients, MeshGeometry, SparseOperatorPair, Vec3};

/// How the pointwise coupling ⟨grad f, grad g⟩ is placed on vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GradientScheme {
    /// Per-face products of affine gradients, distributed with weight area/3.
    #[default]
    FaceAveraged,
    /// Carré du champ of the cotangent Laplacian:
    /// (1/2M_a) Σ_b w_ab (f_a − f_b)(g_a − g_b). With it the product rule
    /// L(fg) = f Lg + g Lf − 2MΓ(f, g) holds exactly.
    Edge,
}

/// ⟨grad f, grad g⟩ per vertex.
pub fn gradient_coupling(
    mesh: &MeshGeometry,
    ops: &SparseOperatorPair,
    f: &[f64],
    g: &[f64],
    scheme: GradientScheme,
) -> Vec<f64> {
    let n = ops.dim();
    let mut out = vec![0.0; n];
    match scheme {
        GradientScheme::FaceAveraged => {
            for (fi, face) in mesh.faces().iter().enumerate() {
                let grads = face_gradients(mesh, fi);
                let mut gf = [0.0; 3];
                let mut gg = [0.0; 3];
                for (k, &v) in face.iter().enumerate() {
                    for c in 0..3 {
                        gf[c] += f[v] * grads[k][c];
                        gg[c] += g[v] * grads[k][c];
                    }
                }
                let w = mesh.face_area(fi) / 3.0 * (gf[0] * gg[0] + gf[1] * gg[1] + gf[2] * gg[2]);
                for &v in face {
                    out[v] += w;
                }
            }
        }
        GradientScheme::Edge => {
            for (a, o) in out.iter_mut().enumerate() {
                for (b, l) in ops.stiffness.row(a) {
                    if b != a {
                        *o -= 0.5 * l * (f[a] - f[b]) * (g[a] - g[b]);
                    }
                }
            }
        }
    }
    for (o, m) in out.iter_mut().zip(&ops.mass) {
        *o /= m;
    }
    out
}

/// Area-weighted average of the face gradients of `f` around each vertex.
pub fn vertex_gradients(mesh: &MeshGeometry, f: &[f64]) -> Vec<Vec3> {
    let mut out = vec![[0.0; 3]; mesh.num_vertices()];
    let mut weight = vec![0.0; mesh.num_vertices()];
    for (fi, face) in mesh.faces().iter().enumerate() {
        let grads = face_gradients(mesh, fi);
        let area = mesh.face_area(fi);
        let mut g = [0.0; 3];
        for (k, &v) in face.iter().enumerate() {
            for c in 0..3 {
                g[c] += f[v] * grads[k][c];
            }
        }
        for &v in face {
            weight[v] += area;
            for c in 0..3 {
                out[v][c] += area * g[c];
            }
        }
    }
    for (o, w) in out.iter_mut().zip(&weight) {
        for c in o.iter_mut() {
            *c /= w;
        }
    }
    out
}

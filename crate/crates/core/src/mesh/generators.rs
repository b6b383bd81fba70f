//! Bundled test surfaces, all outward oriented.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::{MeshGeometry, Vec3};
use crate::error::{Error, Result};

fn normalize(v: Vec3) -> Vec3 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn icosahedron() -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let v = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let f = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (v.iter().map(|&p| normalize(p)).collect(), f)
}

/// Unit sphere from `level` rounds of 4-to-1 subdivision of the icosahedron;
/// 10·4^level + 2 vertices.
pub fn icosphere(level: usize) -> Result<MeshGeometry> {
    if level > 8 {
        return Err(Error::InvalidRequest(format!("icosphere level {level} is too large")));
    }
    let (mut verts, mut faces) = icosahedron();
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec3>| -> usize {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    MeshGeometry::new(verts, faces)
}

/// Icosphere scaled by the semi-axes.
pub fn ellipsoid(a: f64, b: f64, c: f64, level: usize) -> Result<MeshGeometry> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::InvalidRequest("ellipsoid semi-axes must be positive".into()));
    }
    icosphere(level)?.map_vertices(|v| [a * v[0], b * v[1], c * v[2]])
}

/// Torus of revolution about the z axis with tube radius `minor`, sampled on
/// a `nu`×`nv` grid.
pub fn torus(major: f64, minor: f64, nu: usize, nv: usize) -> Result<MeshGeometry> {
    if !(major > minor && minor > 0.0) || nu < 3 || nv < 3 {
        return Err(Error::InvalidRequest("torus needs major > minor > 0 and a 3×3 grid".into()));
    }
    let mut verts = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * PI * i as f64 / nu as f64;
        for j in 0..nv {
            let w = 2.0 * PI * j as f64 / nv as f64;
            let rho = major + minor * w.cos();
            verts.push([rho * u.cos(), rho * u.sin(), minor * w.sin()]);
        }
    }
    let id = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    MeshGeometry::new(verts, faces)
}

/// Axis-aligned cube [0, side]³ with two triangles per face.
pub fn cube(side: f64) -> Result<MeshGeometry> {
    let verts: Vec<Vec3> = (0..8)
        .map(|i| {
            [
                side * (i & 1) as f64,
                side * ((i >> 1) & 1) as f64,
                side * ((i >> 2) & 1) as f64,
            ]
        })
        .collect();
    let quads = [
        [0, 2, 3, 1],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 6, 7, 3],
        [0, 4, 6, 2],
        [1, 3, 7, 5],
    ];
    let faces = quads
        .iter()
        .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
        .collect();
    MeshGeometry::new(verts, faces)
}

/// Regular tetrahedron with the given edge length.
pub fn tetrahedron(edge: f64) -> Result<MeshGeometry> {
    let s = edge / 8f64.sqrt();
    let verts = vec![[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    MeshGeometry::new(verts, vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
}

/// Two disjoint unit icospheres whose centers are `separation` apart along x.
pub fn two_spheres(level: usize, separation: f64) -> Result<MeshGeometry> {
    if !(separation > 2.0) {
        return Err(Error::InvalidRequest("spheres must not overlap".into()));
    }
    let s = icosphere(level)?;
    let n = s.num_vertices();
    let mut verts = s.vertices().to_vec();
    verts.extend(s.vertices().iter().map(|v| [v[0] + separation, v[1], v[2]]));
    let mut faces = s.faces().to_vec();
    faces.extend(s.faces().iter().map(|f| f.map(|i| i + n)));
    MeshGeometry::new(verts, faces)
}

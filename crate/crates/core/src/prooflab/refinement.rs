use serde::{Deserialize, Serialize};

use super::gradient::GradientScheme;
use super::identities::{coordinate_identities, verify_anghel_lemma, verify_prop31};
use crate::eigen::solve_smallest;
use crate::error::{Error, Result};
use crate::inequality::fmt17;
use crate::mesh::{assemble_operators, icosphere, MeshGeometry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RefinementSettings {
    pub levels: Vec<usize>,
    pub j: usize,
    pub truncation_k: usize,
    pub tol: f64,
    pub seed: u64,
    pub scheme: GradientScheme,
}

impl Default for RefinementSettings {
    fn default() -> Self {
        Self { levels: vec![3, 4, 5], j: 2, truncation_k: 200, tol: 1e-10, seed: 0, scheme: GradientScheme::FaceAveraged }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub level: usize,
    pub vertices: usize,
    pub truncation_k: usize,
    pub prop31_residual: f64,
    pub anghel_residual: f64,
    pub tangential_rel_l2: f64,
}

/// Runs [`refinement_on`] over icospheres of the configured levels.
pub fn refinement_study(settings: &RefinementSettings) -> Result<Vec<RefinementRow>> {
    let meshes = settings
        .levels
        .iter()
        .map(|&l| icosphere(l).map(|m| (l, m)))
        .collect::<Result<Vec<_>>>()?;
    refinement_on(&meshes, settings)
}

/// The expansion identity with Ψ = x, the gradient lemma for s_j and the coordinate identities on
/// each (level, mesh) pair, in order.
pub fn refinement_on(meshes: &[(usize, MeshGeometry)], settings: &RefinementSettings) -> Result<Vec<RefinementRow>> {
    if meshes.is_empty() {
        return Err(Error::EmptyRequest("no refinement levels".into()));
    }
    let mut rows = Vec::with_capacity(meshes.len());
    for (level, mesh) in meshes {
        let ops = assemble_operators(mesh);
        let k = settings.truncation_k.max(settings.j).min(mesh.num_vertices() - 1);
        log::info!("refinement level {level}: {} vertices, k = {k}", mesh.num_vertices());
        let basis = solve_smallest(&ops, k, settings.tol, settings.seed)?;
        let psi = mesh.coordinate(0);
        let p = verify_prop31(mesh, &ops, &psi, &basis, settings.j, k, settings.scheme)?;
        let a = verify_anghel_lemma(mesh, &ops, &basis, settings.j, settings.scheme)?;
        let c = coordinate_identities(mesh, &ops);
        rows.push(RefinementRow {
            level: *level,
            vertices: mesh.num_vertices(),
            truncation_k: k,
            prop31_residual: p.relative_residual,
            anghel_residual: a.relative_residual,
            tangential_rel_l2: c.tangential_rel_l2,
        });
    }
    Ok(rows)
}

pub fn refinement_csv(rows: &[RefinementRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["level", "vertices", "truncation_k", "prop31_residual", "anghel_residual", "tangential_rel_l2"];
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            r.vertices.to_string(),
            r.truncation_k.to_string(),
            fmt17(r.prop31_residual),
            fmt17(r.anghel_residual),
            fmt17(r.tangential_rel_l2),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

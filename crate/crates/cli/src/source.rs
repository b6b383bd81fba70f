//! Resolution of the spectral source: a closed-form model or a mesh.

use std::path::PathBuf;

use serde::Serialize;
use specbound_core::eigen::{solve_smallest_with, SolverOptions};
use specbound_core::mesh::{assemble_operators, extrinsic_summary_with, load_mesh, ExtrinsicData};
use specbound_core::model::{
    model_extrinsic, sphere_dirac_spectrum, sphere_laplace_spectrum, torus_dirac_spectrum,
    torus_laplace_spectrum, Field, Lattice, ModelExtrinsic, ModelId, OperatorKind, SpinStructure,
    Spectrum,
};
use specbound_core::{EigenBasis, MeshGeometry, SparseOperatorPair};

use crate::config::{mesh_format_for, parse_field, parse_lattice, parse_operator, parse_spins};
use crate::{CliError, RunConfig};

/// Spectral geometry of a closed-form model.
#[derive(Debug, Clone)]
pub enum Geometry {
    Sphere { n: usize, radius: f64 },
    Torus { lattice: Lattice },
}

#[derive(Debug, Clone)]
pub struct ModelSource {
    pub geometry: Geometry,
    pub operator: OperatorKind,
    /// Embedding whose extrinsic constants feed the checks, when known.
    pub embedding: Option<ModelId>,
    /// Set for projective models.
    pub field: Option<Field>,
    pub label: String,
}

pub struct MeshSource {
    pub path: PathBuf,
    pub mesh: MeshGeometry,
    pub ops: SparseOperatorPair,
}

pub enum Source {
    Model(ModelSource),
    Mesh(MeshSource),
}

/// One spectrum and the spin structure it belongs to, if any.
pub struct Labeled<T> {
    pub spin: Option<String>,
    pub value: T,
}

impl ModelSource {
    pub fn n(&self) -> usize {
        match &self.geometry {
            Geometry::Sphere { n, .. } => *n,
            Geometry::Torus { lattice } => lattice.dim(),
        }
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        match &self.geometry {
            Geometry::Torus { lattice } => Some(lattice),
            Geometry::Sphere { .. } => None,
        }
    }

    pub fn extrinsic(&self) -> Result<Option<ModelExtrinsic>, CliError> {
        self.embedding.as_ref().map(model_extrinsic).transpose().map_err(CliError::from)
    }

    /// Intrinsic volume of the model.
    pub fn volume(&self) -> f64 {
        match &self.geometry {
            Geometry::Sphere { n, radius } => specbound_core::model::sphere_volume(*n, *radius),
            Geometry::Torus { lattice } => lattice.covolume(),
        }
    }

    pub fn genus(&self) -> Option<u32> {
        match (&self.geometry, self.n()) {
            (Geometry::Sphere { .. }, 2) => Some(0),
            (Geometry::Torus { .. }, 2) => Some(1),
            _ => None,
        }
    }

    /// One spectrum per requested spin structure (a single one otherwise).
    pub fn spectra(&self, spins: &[SpinStructure], count: usize) -> Result<Vec<Labeled<Spectrum>>, CliError> {
        let one = |value| Ok(vec![Labeled { spin: None, value }]);
        match (&self.geometry, self.operator) {
            (Geometry::Sphere { n, radius }, OperatorKind::DiracSquared) => one(sphere_dirac_spectrum(*n, *radius, count)?),
            (Geometry::Sphere { n, radius }, OperatorKind::Laplace) => one(sphere_laplace_spectrum(*n, *radius, count)?),
            (Geometry::Torus { lattice }, OperatorKind::Laplace) => one(torus_laplace_spectrum(lattice, count)?),
            (Geometry::Torus { lattice }, OperatorKind::DiracSquared) => spins
                .iter()
                .map(|s| {
                    Ok(Labeled { spin: Some(s.label()), value: torus_dirac_spectrum(lattice, s, count)? })
                })
                .collect(),
        }
    }
}

impl MeshSource {
    pub fn extrinsic(&self) -> ExtrinsicData {
        extrinsic_summary_with(&self.mesh, &self.ops)
    }

    /// Number of connected components, the kernel dimension of the Laplacian.
    pub fn components(&self) -> usize {
        let n = self.mesh.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in self.mesh.faces() {
            for k in 1..3 {
                let (a, b) = (find(&mut parent, f[0]), find(&mut parent, f[k]));
                parent[a] = b;
            }
        }
        (0..n).filter(|&v| find(&mut parent, v) == v).count()
    }

    pub fn genus(&self) -> Option<u32> {
        let chi = self.mesh.euler_characteristic();
        (self.components() == 1 && chi <= 2 && chi % 2 == 0).then(|| ((2 - chi) / 2) as u32)
    }

    pub fn solve(&self, cfg: &RunConfig, count: usize) -> Result<EigenBasis, CliError> {
        let n = self.mesh.num_vertices();
        if count >= n {
            return Err(CliError::usage(
                "count",
                format!("count {count} must be below the vertex count {n}"),
            ));
        }
        let opts = SolverOptions {
            tol: cfg.tol(),
            seed: cfg.seed(),
            block_size: cfg.block_size,
            max_restarts: cfg.max_restarts.unwrap_or(SolverOptions::default().max_restarts),
        };
        Ok(solve_smallest_with(&self.ops, count, &opts)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceInfo {
    pub kind: &'static str,
    pub label: String,
    pub operator: OperatorKind,
    pub n: usize,
}

impl Source {
    pub fn resolve(cfg: &RunConfig) -> Result<Source, CliError> {
        let has_model = cfg.model.is_some() || cfg.lattice.is_some();
        match (&cfg.mesh, has_model) {
            (Some(_), true) => Err(CliError::usage("source", "--mesh excludes --model and --lattice")),
            (None, false) => Err(CliError::usage("source", "give --model, --lattice or --mesh")),
            (Some(path), false) => resolve_mesh(cfg, path.clone()),
            (None, true) => resolve_model(cfg).map(Source::Model),
        }
    }

    pub fn info(&self) -> SourceInfo {
        match self {
            Source::Model(m) => SourceInfo { kind: "model", label: m.label.clone(), operator: m.operator, n: m.n() },
            Source::Mesh(m) => SourceInfo {
                kind: "mesh",
                label: m.path.display().to_string(),
                operator: OperatorKind::Laplace,
                n: 2,
            },
        }
    }
}

fn resolve_mesh(cfg: &RunConfig, path: PathBuf) -> Result<Source, CliError> {
    if let Some(op) = &cfg.operator {
        if parse_operator(op)? != OperatorKind::Laplace {
            return Err(CliError::usage("operator", "meshes support only --operator laplace"));
        }
    }
    let format = mesh_format_for(&path, cfg.mesh_format.as_deref())?;
    let mesh = load_mesh(&path, format)?;
    let ops = assemble_operators(&mesh);
    Ok(Source::Mesh(MeshSource { path, mesh, ops }))
}

fn resolve_model(cfg: &RunConfig) -> Result<ModelSource, CliError> {
    let operator = cfg.operator.as_deref().map(parse_operator).transpose()?.unwrap_or(OperatorKind::DiracSquared);
    let model = cfg.model.as_deref().unwrap_or("torus");
    let (geometry, embedding, field, label) = match model {
        "sphere" => {
            let n = cfg.dim.unwrap_or(2);
            let radius = cfg.radius.unwrap_or(1.0);
            (Geometry::Sphere { n, radius }, Some(ModelId::Sphere { n, radius }), None, format!("sphere(n={n},r={radius})"))
        }
        "clifford_torus" => {
            if cfg.lattice.as_deref().is_some_and(|l| l.trim() != "clifford") {
                return Err(CliError::usage("lattice", "clifford_torus fixes its lattice"));
            }
            (Geometry::Torus { lattice: Lattice::clifford() }, Some(ModelId::CliffordTorus), None, "clifford_torus".into())
        }
        "torus" => {
            let text = cfg.lattice.as_deref().ok_or_else(|| CliError::missing("lattice", "torus"))?;
            let lattice = parse_lattice(text)?;
            let embedding = if text.trim() == "clifford" {
                Some(ModelId::CliffordTorus)
            } else {
                ModelId::product_torus_for(&lattice).ok()
            };
            let label = format!("torus({text})");
            (Geometry::Torus { lattice }, embedding, None, label)
        }
        "projective" => {
            let field = parse_field(cfg.field.as_deref().ok_or_else(|| CliError::missing("field", "projective"))?)?;
            let m = cfg.proj_m.unwrap_or(1);
            // Only the projective lines have closed-form spectra here: ℂP¹ = S²(1/2), ℚP¹ = S⁴(1/2).
            let n = match (field, m) {
                (Field::C, 1) => 2,
                (Field::Q, 1) => 4,
                _ => {
                    return Err(CliError::usage(
                        "invalid_model",
                        format!("no closed-form spectrum for {}P^{m}", field.symbol()),
                    ))
                }
            };
            (
                Geometry::Sphere { n, radius: 0.5 },
                Some(ModelId::ProjectivePointModel { field, m }),
                Some(field),
                format!("projective({}P^{m})", field.symbol()),
            )
        }
        other => return Err(CliError::usage("invalid_model", format!("unknown model '{other}'"))),
    };
    if let Some(d) = cfg.dim {
        let n = match &geometry {
            Geometry::Sphere { n, .. } => *n,
            Geometry::Torus { lattice } => lattice.dim(),
        };
        if d != n {
            return Err(CliError::usage("dim", format!("--dim {d} disagrees with the model dimension {n}")));
        }
    }
    Ok(ModelSource { geometry, operator, embedding, field, label })
}

/// Spin structures for a torus Dirac spectrum; `default` applies when `--spin` is absent.
pub fn spins_for(cfg: &RunConfig, model: &ModelSource, default: &str) -> Result<Vec<SpinStructure>, CliError> {
    match (&model.geometry, model.operator) {
        (Geometry::Torus { lattice }, OperatorKind::DiracSquared) => {
            parse_spins(cfg.spin.as_deref().unwrap_or(default), lattice.dim())
        }
        _ => {
            if cfg.spin.is_some() {
                return Err(CliError::usage("spin", "--spin applies only to the Dirac operator on a torus"));
            }
            Ok(Vec::new())
        }
    }
}

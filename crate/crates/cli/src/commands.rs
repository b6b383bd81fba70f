//! `spectrum`, `sweep`, `prooflab` and `mesh`.

use std::f64::consts::PI;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use specbound_core::eigen::solve_dense;
use specbound_core::inequality::{reports_to_csv, InequalityReport};
use specbound_core::mesh::{
    cube, ellipsoid, extrinsic_summary_with, icosphere, load_mesh, tetrahedron, torus, two_spheres, write_off,
    ExtrinsicSummary,
};
use specbound_core::model::Spectrum;
use specbound_core::prooflab::{
    coordinate_identities, default_truncation, expansion_coefficients, refinement_csv, refinement_on,
    verify_anghel_lemma, verify_prop31, GradientScheme, RefinementSettings, ResidualReport,
};
use specbound_core::{EigenBasis, MeshGeometry};

use crate::check::{self, all_satisfied};
use crate::config::{mesh_format_for, parse_list};
use crate::source::{spins_for, MeshSource, Source, SourceInfo};
use crate::{emit, to_json, CliError, ProoflabMode, RunConfig, EXIT_OK, EXIT_UNSATISFIED};

/// Meshes up to this size get a full dense eigenbasis in the proof lab.
const DENSE_LIMIT: usize = 300;

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    source: SourceInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    spin: Option<String>,
    count: usize,
    zero_dim: usize,
    values: Vec<f64>,
    spectrum: &'a Spectrum,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<&'a EigenBasis>,
}

pub fn spectrum(cfg: &RunConfig) -> Result<i32, CliError> {
    let count = cfg.count.unwrap_or(10);
    if count == 0 {
        return Err(CliError::usage("count", "--count must be positive"));
    }
    let source = Source::resolve(cfg)?;
    let info = source.info();
    let text = match &source {
        Source::Model(model) => {
            if cfg.vectors.is_some() {
                return Err(CliError::usage("vectors", "--vectors applies to mesh spectra"));
            }
            let spins = spins_for(cfg, model, "trivial")?;
            if spins.len() > 1 {
                return Err(CliError::usage("spin", "spectrum takes a single spin structure"));
            }
            let s = model.spectra(&spins, count)?.remove(0);
            to_json(&SpectrumOutput {
                source: info,
                spin: s.spin,
                count,
                zero_dim: s.value.zero_dim(),
                values: s.value.values(),
                spectrum: &s.value,
                basis: None,
            })?
        }
        Source::Mesh(mesh) => {
            let basis = mesh.solve(cfg, count)?;
            let spec = basis.to_spectrum(info.operator)?;
            if let Some(path) = &cfg.vectors {
                basis.write_vectors(path)?;
            }
            to_json(&SpectrumOutput {
                source: info,
                spin: None,
                count,
                zero_dim: basis.zero_dim(),
                values: basis.cleaned_values(),
                spectrum: &spec,
                basis: Some(&basis),
            })?
        }
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

/// Ratios `min + i·step` up to `max`, computed without accumulation.
pub fn ratio_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !(min > 0.0) || !(max >= min) || !max.is_finite() {
        return Err(CliError::usage("grid", format!("empty ratio grid {min}..{max} step {step}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| min + i as f64 * step).collect())
}

pub fn sweep(cfg: &RunConfig) -> Result<i32, CliError> {
    match cfg.family.as_deref().unwrap_or("rectangular") {
        "rectangular" => {}
        other => return Err(CliError::usage("family", format!("unknown torus family '{other}'"))),
    }
    if cfg.mesh.is_some() || cfg.model.is_some() || cfg.lattice.is_some() {
        return Err(CliError::usage("source", "sweep generates its own lattices"));
    }
    let grid = ratio_grid(
        cfg.ratio_min.unwrap_or(0.5),
        cfg.ratio_max.unwrap_or(2.0),
        cfg.ratio_step.unwrap_or(0.1),
    )?;
    let threads = match cfg.threads {
        Some(0) => return Err(CliError::usage("threads", "--threads must be positive")),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage("threads", e.to_string()))?;
    let base = RunConfig {
        ineq: Some(cfg.ineq.clone().unwrap_or_else(|| "conjecture".into())),
        model: Some("torus".into()),
        output: None,
        format: None,
        ..cfg.clone()
    };
    let rows: Vec<Vec<InequalityReport>> = pool.install(|| {
        grid.par_iter()
            .map(|&ratio| {
                let point = RunConfig {
                    lattice: Some(format!("{} 0; 0 {}", 2.0 * PI, 2.0 * PI * ratio)),
                    ..base.clone()
                };
                let (_, mut reports) = check::collect(&point)?;
                for r in &mut reports {
                    r.params.insert("ratio".into(), ratio.into());
                }
                Ok(reports)
            })
            .collect::<Result<_, CliError>>()
    })?;
    let reports: Vec<InequalityReport> = rows.into_iter().flatten().collect();
    let ok = all_satisfied(&reports);
    let text = match cfg.format.as_deref().unwrap_or("csv") {
        "csv" => reports_to_csv(&reports)?,
        "json" => to_json(&reports)?,
        other => return Err(CliError::usage("format", format!("unknown format '{other}'"))),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(if ok { EXIT_OK } else { EXIT_UNSATISFIED })
}

fn parse_scheme(cfg: &RunConfig) -> Result<GradientScheme, CliError> {
    match cfg.scheme.as_deref().unwrap_or("face_averaged") {
        "face_averaged" | "face" => Ok(GradientScheme::FaceAveraged),
        "edge" => Ok(GradientScheme::Edge),
        other => Err(CliError::usage("scheme", format!("unknown gradient scheme '{other}'"))),
    }
}

fn lab_mesh(cfg: &RunConfig) -> Result<(String, MeshSource), CliError> {
    match (&cfg.mesh, cfg.level) {
        (Some(_), Some(_)) => Err(CliError::usage("source", "--mesh excludes --level")),
        (Some(path), None) => {
            if cfg.model.is_some() || cfg.lattice.is_some() {
                return Err(CliError::usage("source", "the proof lab works on meshes"));
            }
            match Source::resolve(cfg)? {
                Source::Mesh(m) => Ok((path.display().to_string(), m)),
                Source::Model(_) => unreachable!("mesh path given"),
            }
        }
        (None, level) => {
            let level = level.unwrap_or(3);
            let mesh = icosphere(level)?;
            let ops = specbound_core::mesh::assemble_operators(&mesh);
            Ok((format!("icosphere(level={level})"), MeshSource { path: PathBuf::new(), mesh, ops }))
        }
    }
}

fn lab_basis(cfg: &RunConfig, src: &MeshSource, j: usize) -> Result<EigenBasis, CliError> {
    let n = src.mesh.num_vertices();
    if n <= DENSE_LIMIT {
        return Ok(solve_dense(&src.ops)?);
    }
    let k = cfg.truncation_k.unwrap_or(200).max(j).min(n - 1);
    src.solve(cfg, k)
}

fn psi_field(cfg: &RunConfig, mesh: &MeshGeometry) -> Result<Vec<f64>, CliError> {
    match cfg.psi.as_deref().unwrap_or("x") {
        "x" => Ok(mesh.coordinate(0)),
        "y" => Ok(mesh.coordinate(1)),
        "z" => Ok(mesh.coordinate(2)),
        "one" | "1" => Ok(vec![1.0; mesh.num_vertices()]),
        other => Err(CliError::usage("psi", format!("unknown test function '{other}'"))),
    }
}

#[derive(Serialize)]
struct Bessel {
    psi_norm_sq: f64,
    partial_sum: f64,
    tail: f64,
    holds: bool,
}

#[derive(Serialize)]
struct LabOutput<T: Serialize> {
    source: String,
    vertices: usize,
    basis_len: usize,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct Prop31Body {
    psi: String,
    residual: ResidualReport,
    bessel: Bessel,
}

#[derive(Serialize)]
struct ResidualBody {
    residual: ResidualReport,
}

pub fn prooflab(mode: ProoflabMode, cfg: &RunConfig) -> Result<i32, CliError> {
    if mode == ProoflabMode::Refinement {
        return refinement(cfg);
    }
    let scheme = parse_scheme(cfg)?;
    let (label, src) = lab_mesh(cfg)?;
    let vertices = src.mesh.num_vertices();
    let text = match mode {
        ProoflabMode::Identities => {
            let body = coordinate_identities(&src.mesh, &src.ops);
            to_json(&LabOutput { source: label, vertices, basis_len: 0, body })?
        }
        ProoflabMode::Prop31 | ProoflabMode::Anghel => {
            let j = cfg.j.as_deref().map(|s| s.trim().parse::<usize>()).transpose()
                .map_err(|_| CliError::usage("j", "the proof lab takes a single index"))?
                .unwrap_or(2);
            if j == 0 {
                return Err(CliError::usage("j", "j is 1-based"));
            }
            let psi = psi_field(cfg, &src.mesh)?;
            let basis = lab_basis(cfg, &src, j)?;
            let basis_len = basis.len();
            if mode == ProoflabMode::Anghel {
                let residual = verify_anghel_lemma(&src.mesh, &src.ops, &basis, j, scheme)?;
                to_json(&LabOutput { source: label, vertices, basis_len, body: ResidualBody { residual } })?
            } else {
                let k = cfg.truncation_k.unwrap_or_else(|| default_truncation(basis_len));
                let residual = verify_prop31(&src.mesh, &src.ops, &psi, &basis, j, k, scheme)?;
                let table = expansion_coefficients(&psi, &basis, &src.ops.mass, j, k)?;
                let bessel = Bessel {
                    psi_norm_sq: table.psi_norm_sq,
                    partial_sum: table.partial_sums().last().copied().unwrap_or(0.0),
                    tail: table.bessel_tail(),
                    holds: table.bessel_holds(),
                };
                let psi = cfg.psi.clone().unwrap_or_else(|| "x".into());
                to_json(&LabOutput { source: label, vertices, basis_len, body: Prop31Body { psi, residual, bessel } })?
            }
        }
        ProoflabMode::Refinement => unreachable!("handled above"),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn refinement(cfg: &RunConfig) -> Result<i32, CliError> {
    let defaults = RefinementSettings::default();
    let j = match cfg.j.as_deref() {
        Some(s) => s.trim().parse::<usize>().map_err(|_| CliError::usage("j", "the proof lab takes a single index"))?,
        None => defaults.j,
    };
    let mut settings = RefinementSettings {
        j,
        truncation_k: cfg.truncation_k.unwrap_or(defaults.truncation_k),
        tol: cfg.tol(),
        seed: cfg.seed(),
        scheme: parse_scheme(cfg)?,
        ..defaults
    };
    let meshes = match (&cfg.meshes, &cfg.levels) {
        (Some(_), Some(_)) => return Err(CliError::usage("source", "--meshes excludes --levels")),
        (Some(list), None) => list
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .enumerate()
            .map(|(i, p)| {
                let path = PathBuf::from(p);
                let format = mesh_format_for(&path, cfg.mesh_format.as_deref())?;
                Ok((i, load_mesh(&path, format)?))
            })
            .collect::<Result<Vec<_>, CliError>>()?,
        (None, levels) => {
            if let Some(l) = levels {
                settings.levels = parse_list(l, "levels")?;
            }
            settings
                .levels
                .iter()
                .map(|&l| Ok((l, icosphere(l)?)))
                .collect::<Result<Vec<_>, CliError>>()?
        }
    };
    let rows = refinement_on(&meshes, &settings)?;
    let text = match cfg.format.as_deref().unwrap_or("csv") {
        "csv" => refinement_csv(&rows)?,
        "json" => to_json(&rows)?,
        other => return Err(CliError::usage("format", format!("unknown format '{other}'"))),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct MeshSummary {
    source: String,
    vertices: usize,
    faces: usize,
    euler_characteristic: i64,
    components: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    genus: Option<u32>,
    area: f64,
    extrinsic: ExtrinsicSummary,
}

pub fn mesh(cfg: &RunConfig) -> Result<i32, CliError> {
    match (&cfg.generate, &cfg.mesh) {
        (Some(_), Some(_)) => Err(CliError::usage("source", "--generate excludes --mesh")),
        (None, None) => Err(CliError::usage("source", "give --generate or --mesh")),
        (Some(kind), None) => {
            let level = cfg.level.unwrap_or(3);
            let m = match kind.as_str() {
                "icosphere" => icosphere(level)?,
                "ellipsoid" => {
                    let axes = parse_list::<f64>(cfg.axes.as_deref().unwrap_or("1,1,2"), "axes")?;
                    let [a, b, c] = axes[..] else {
                        return Err(CliError::usage("axes", "ellipsoid needs three semi-axes"));
                    };
                    ellipsoid(a, b, c, level)?
                }
                "torus" => torus(
                    cfg.major.unwrap_or(2.0),
                    cfg.minor.unwrap_or(1.0),
                    cfg.nu.unwrap_or(48),
                    cfg.nv.unwrap_or(24),
                )?,
                "cube" => cube(cfg.side.unwrap_or(1.0))?,
                "tetrahedron" => tetrahedron(cfg.side.unwrap_or(1.0))?,
                "two_spheres" => two_spheres(level, cfg.separation.unwrap_or(3.0))?,
                other => return Err(CliError::usage("generate", format!("unknown generator '{other}'"))),
            };
            emit(cfg.output.as_deref(), &write_off(&m))?;
            Ok(EXIT_OK)
        }
        (None, Some(path)) => {
            let src = match Source::resolve(&RunConfig { operator: None, ..cfg.clone() })? {
                Source::Mesh(m) => m,
                Source::Model(_) => unreachable!("mesh path given"),
            };
            let data = extrinsic_summary_with(&src.mesh, &src.ops);
            let summary = MeshSummary {
                source: path.display().to_string(),
                vertices: src.mesh.num_vertices(),
                faces: src.mesh.num_faces(),
                euler_characteristic: src.mesh.euler_characteristic(),
                components: src.components(),
                genus: src.genus(),
                area: src.mesh.total_area(),
                extrinsic: data.summary(&src.mesh),
            };
            emit(cfg.output.as_deref(), &to_json(&summary)?)?;
            Ok(EXIT_OK)
        }
    }
}

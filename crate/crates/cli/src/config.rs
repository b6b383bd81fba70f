//! Run configuration shared by every subcommand, read from flags and an
//! optional JSON file.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use specbound_core::inequality::BackgroundParams;
use specbound_core::model::{Field, Lattice, OperatorKind, SpinStructure};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// JSON file with any of these options; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Log progress to stderr.
    #[arg(short, long)]
    #[serde(skip)]
    pub verbose: bool,

    /// sphere | torus | clifford_torus | projective
    #[arg(long)]
    pub model: Option<String>,
    /// Triangle mesh in OFF or OBJ format.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// off | obj; guessed from the extension when absent.
    #[arg(long)]
    pub mesh_format: Option<String>,
    /// clifford | square | rows such as "6.2832 0; 0 6.2832".
    #[arg(long)]
    pub lattice: Option<String>,
    /// all | trivial | half-shifts such as "0.5,0".
    #[arg(long)]
    pub spin: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// R | C | Q
    #[arg(long)]
    pub field: Option<String>,
    /// Projective dimension m of 𝔽Pᵐ.
    #[arg(long)]
    pub proj_m: Option<usize>,
    /// dirac | laplace
    #[arg(long)]
    pub operator: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,

    /// Comma-separated inequality ids.
    #[arg(long)]
    pub ineq: Option<String>,
    /// Index or inclusive range, e.g. "3" or "1..50".
    #[arg(long)]
    pub j: Option<String>,
    /// Dimension of the zero eigenspace.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub h_sq: Option<f64>,
    /// Squared mean curvature inside the unit sphere.
    #[arg(long, allow_negative_numbers = true)]
    pub hbar_sq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c_sup: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b_sq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s_inf: Option<f64>,
    /// inf max (n²H̃² − 4S) for the stated projective form.
    #[arg(long, allow_negative_numbers = true)]
    pub htilde_term: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub int_htilde_sq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub int_h_sq: Option<f64>,
    #[arg(long)]
    pub volume: Option<f64>,
    #[arg(long)]
    pub area: Option<f64>,
    #[arg(long)]
    pub genus: Option<u32>,
    /// stated | minimal
    #[arg(long)]
    pub form: Option<String>,
    /// Parameters of the background bounds (config file only).
    #[arg(skip)]
    pub background: Option<BackgroundParams>,

    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_restarts: Option<usize>,
    #[arg(long)]
    pub block_size: Option<usize>,

    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// json | csv
    #[arg(long)]
    pub format: Option<String>,
    /// Binary sidecar for mesh eigenvectors.
    #[arg(long)]
    pub vectors: Option<PathBuf>,

    /// Torus family swept: rectangular.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub ratio_min: Option<f64>,
    #[arg(long)]
    pub ratio_max: Option<f64>,
    #[arg(long)]
    pub ratio_step: Option<f64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,

    /// x | y | z | one
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long)]
    pub truncation_k: Option<usize>,
    /// face_averaged | edge
    #[arg(long)]
    pub scheme: Option<String>,
    /// Comma-separated mesh files for a refinement study.
    #[arg(long)]
    pub meshes: Option<String>,
    /// Comma-separated icosphere levels.
    #[arg(long)]
    pub levels: Option<String>,

    /// icosphere | ellipsoid | torus | cube | tetrahedron | two_spheres
    #[arg(long)]
    pub generate: Option<String>,
    #[arg(long)]
    pub level: Option<usize>,
    /// Ellipsoid semi-axes "a,b,c".
    #[arg(long)]
    pub axes: Option<String>,
    #[arg(long)]
    pub major: Option<f64>,
    #[arg(long)]
    pub minor: Option<f64>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    #[arg(long)]
    pub side: Option<f64>,
    #[arg(long)]
    pub separation: Option<f64>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),* $(,)?) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RunConfig {
    /// Flags merged over the config file named by `--config`, if any.
    pub fn resolve(self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::usage("config", format!("{}: {e}", path.display())))?;
        let base: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::usage("config", format!("{}: {e}", path.display())))?;
        Ok(base.overlay(self))
    }

    fn overlay(mut self, top: RunConfig) -> RunConfig {
        overlay_fields!(self, top;
            config, model, mesh, mesh_format, lattice, spin, dim, radius, field, proj_m, operator, count,
            ineq, j, m, h_sq, hbar_sq, kappa, c_sup, c1, c2, c3, b_sq, s0, s_inf, htilde_term,
            int_htilde_sq, int_h_sq, volume, area, genus, form, background, tol, seed, max_restarts,
            block_size, output, format, vectors, family, ratio_min, ratio_max, ratio_step, threads,
            psi, truncation_k, scheme, meshes, levels, generate, level, axes, major, minor, nu, nv,
            side, separation,
        );
        self.verbose |= top.verbose;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-10)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

pub fn parse_operator(s: &str) -> Result<OperatorKind, CliError> {
    match s {
        "dirac" | "dirac_squared" => Ok(OperatorKind::DiracSquared),
        "laplace" => Ok(OperatorKind::Laplace),
        _ => Err(CliError::usage("operator", format!("unknown operator '{s}'"))),
    }
}

pub fn parse_field(s: &str) -> Result<Field, CliError> {
    match s {
        "R" | "r" => Ok(Field::R),
        "C" | "c" => Ok(Field::C),
        "Q" | "q" | "H" => Ok(Field::Q),
        _ => Err(CliError::usage("field", format!("unknown field '{s}'"))),
    }
}

/// Named lattices or semicolon-separated rows.
pub fn parse_lattice(s: &str) -> Result<Lattice, CliError> {
    let bad = |msg: String| CliError::usage("lattice", msg);
    match s.trim() {
        "clifford" => return Ok(Lattice::clifford()),
        "square" => return Lattice::cubic(2, 2.0 * PI).map_err(CliError::from),
        _ => {}
    }
    let rows = s
        .split(';')
        .map(|row| {
            row.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|e| bad(format!("'{t}': {e}"))))
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Lattice::from_rows(&rows).map_err(CliError::from)
}

pub fn parse_spins(s: &str, n: usize) -> Result<Vec<SpinStructure>, CliError> {
    match s.trim() {
        "all" => Ok(SpinStructure::all(n)),
        "trivial" => Ok(vec![SpinStructure::trivial(n)]),
        list => {
            let shift = parse_list::<f64>(list, "spin")?;
            if shift.len() != n {
                return Err(CliError::usage("spin", format!("expected {n} components, got {}", shift.len())));
            }
            Ok(vec![SpinStructure::new(shift)?])
        }
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str, name: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| CliError::usage(name, format!("'{t}': {e}"))))
        .collect()
}

/// "3" or "1..50" (inclusive).
pub fn parse_j_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = |msg: &str| CliError::usage("j", format!("'{s}': {msg}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad("not a positive integer"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let j = num(s)?;
            (j, j)
        }
    };
    if lo == 0 || hi < lo {
        return Err(bad("need 1 ≤ start ≤ end"));
    }
    Ok((lo, hi))
}

pub fn mesh_format_for(path: &Path, explicit: Option<&str>) -> Result<specbound_core::mesh::MeshFormat, CliError> {
    match explicit {
        Some(f) => f.parse().map_err(CliError::from),
        None => specbound_core::mesh::MeshFormat::from_path(path).map_err(CliError::from),
    }
}

//! Smallest eigenpairs of the generalized problem L v = λ M v.

mod dense;
mod krylov;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::SparseOperatorPair;
use crate::model::{EigenvalueSource, OperatorKind, SpectralEntry, Spectrum};

pub use dense::solve_dense;
pub use krylov::{solve_smallest, solve_smallest_with, SolverOptions};

/// Values below this fraction of the reference scale count as zero modes.
pub const REL_ZERO_TOL: f64 = 1e-8;

/// Relative gap that separates eigenvalue clusters when reporting multiplicities.
pub const CLUSTER_REL_GAP: f64 = 1e-6;

/// M-orthonormal eigenpairs in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenBasis {
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub mass_gram_error: f64,
    pub restarts: usize,
}

/// Number of values below `REL_ZERO_TOL · scale`.
pub fn zero_mode_count(basis: &EigenBasis, scale: f64) -> usize {
    basis.values.iter().filter(|&&v| v < REL_ZERO_TOL * scale).count()
}

impl EigenBasis {
    pub(crate) fn assemble(
        values: Vec<f64>,
        mut vectors: Vec<Vec<f64>>,
        ops: &SparseOperatorPair,
        restarts: usize,
    ) -> Self {
        for v in &mut vectors {
            fix_sign(v);
        }
        let residuals = values
            .iter()
            .zip(&vectors)
            .map(|(&lam, v)| residual(ops, lam, v))
            .collect();
        let mass_gram_error = mass_gram_error(&vectors, &ops.mass);
        Self { values, vectors, residuals, mass_gram_error, restarts }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    /// Largest returned value; the default scale for zero-mode detection.
    pub fn lambda_max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn zero_dim(&self) -> usize {
        zero_mode_count(self, self.lambda_max().max(f64::MIN_POSITIVE))
    }

    /// Values with zero modes replaced by exact zeros.
    pub fn cleaned_values(&self) -> Vec<f64> {
        let m = self.zero_dim();
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| if i < m { 0.0 } else { v })
            .collect()
    }

    /// Groups values whose consecutive gaps are below `CLUSTER_REL_GAP · λ_max`.
    pub fn to_spectrum(&self, operator: OperatorKind) -> Result<Spectrum> {
        let values = self.cleaned_values();
        let gap = CLUSTER_REL_GAP * self.lambda_max();
        let mut entries: Vec<SpectralEntry> = Vec::new();
        let mut sum = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for &v in &values {
            match entries.last_mut() {
                Some(e) if v - prev <= gap && (e.value == 0.0) == (v == 0.0) => {
                    sum += v;
                    e.multiplicity += 1;
                    e.value = sum / e.multiplicity as f64;
                }
                _ => {
                    sum = v;
                    entries.push(SpectralEntry { value: v, multiplicity: 1 });
                }
            }
            prev = v;
        }
        Spectrum::new(operator, entries)
    }

    /// Vectors as little-endian f64, one eigenvector per row.
    pub fn write_vectors(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for v in &self.vectors {
            for x in v {
                f.write_all(&x.to_le_bytes())?;
            }
        }
        f.flush()?;
        Ok(())
    }

    pub fn read_vectors(path: &Path, count: usize) -> Result<Vec<Vec<f64>>> {
        let bytes = std::fs::read(path)?;
        if count == 0 || bytes.len() % (8 * count) != 0 {
            return Err(Error::InvalidRequest("sidecar size does not match vector count".into()));
        }
        let n = bytes.len() / 8 / count;
        Ok(bytes
            .chunks_exact(8 * n)
            .map(|row| {
                row.chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                    .collect()
            })
            .collect())
    }
}

impl EigenvalueSource for EigenBasis {
    fn available(&self) -> usize {
        self.len()
    }

    fn gamma(&self, j: usize) -> Result<f64> {
        if j == 0 || j > self.len() {
            return Err(Error::IndexOutOfRange { requested: j, available: self.len() });
        }
        Ok(if j <= self.zero_dim() { 0.0 } else { self.values[j - 1] })
    }

    fn zero_dim(&self) -> usize {
        EigenBasis::zero_dim(self)
    }

    fn label(&self) -> String {
        format!("mesh_eigenbasis(k={})", self.len())
    }
}

/// First entry above 1e-6·max|v| is made positive.
fn fix_sign(v: &mut [f64]) {
    let big = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-6 * big) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub(crate) fn m_dot(a: &[f64], b: &[f64], mass: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let n = a.len() / 4 * 4;
    for i in (0..n).step_by(4) {
        for k in 0..4 {
            acc[k] += a[i + k] * b[i + k] * mass[i + k];
        }
    }
    let tail: f64 = (n..a.len()).map(|i| a[i] * b[i] * mass[i]).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn residual(ops: &SparseOperatorPair, lam: f64, v: &[f64]) -> f64 {
    let lv = ops.stiffness.mul_vec(v);
    let r: f64 = lv
        .iter()
        .zip(v)
        .zip(&ops.mass)
        .map(|((l, x), m)| (l - lam * m * x).powi(2))
        .sum();
    r.sqrt()
}

/// max_ij |v_iᵀ M v_j − δ_ij|
pub fn mass_gram_error(vectors: &[Vec<f64>], mass: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m_dot(a, b, mass) - target).abs());
        }
    }
    worst
}

//! Closed-form spectra of the round sphere Sⁿ(r).

use super::spectrum::{OperatorKind, SpectralEntry, Spectrum};
use crate::error::{Error, Result};

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Rank of the complex spinor bundle, 2^⌊n/2⌋.
pub fn spinor_rank(n: usize) -> usize {
    1 << (n / 2)
}

fn check_sphere(n: usize, min_dim: usize, radius: f64, count: usize) -> Result<()> {
    if n < min_dim {
        return Err(Error::InvalidModel(format!(
            "sphere dimension {n} is below {min_dim}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidModel(format!("sphere radius {radius} must be positive")));
    }
    if count == 0 {
        return Err(Error::EmptyRequest("eigenvalue count must be positive".into()));
    }
    Ok(())
}

fn collect(
    operator: OperatorKind,
    count: usize,
    mut entry: impl FnMut(u64) -> (f64, usize),
) -> Result<Spectrum> {
    let mut entries = Vec::new();
    let mut total = 0;
    let mut k = 0;
    while total < count {
        let (value, mult) = entry(k);
        let take = mult.min(count - total);
        entries.push(SpectralEntry {
            value,
            multiplicity: take,
        });
        total += take;
        k += 1;
    }
    Spectrum::new(operator, entries)
}

/// First `count` eigenvalues of D² on Sⁿ(r): ((n/2 + k)/r)² with multiplicity
/// 2·2^⌊n/2⌋·C(k+n−1, k).
pub fn sphere_dirac_spectrum(n: usize, radius: f64, count: usize) -> Result<Spectrum> {
    check_sphere(n, 2, radius, count)?;
    let rank = spinor_rank(n);
    collect(OperatorKind::DiracSquared, count, |k| {
        let root = (n as f64 / 2.0 + k as f64) / radius;
        let mult = 2 * rank * binomial(k + n as u64 - 1, k) as usize;
        (root * root, mult)
    })
}

/// Dimension of degree-k spherical harmonics on Sⁿ.
pub fn spherical_harmonic_multiplicity(n: usize, k: u64) -> usize {
    let n = n as u64;
    let upper = binomial(n + k, n);
    let lower = if k >= 2 { binomial(n + k - 2, n) } else { 0 };
    (upper - lower) as usize
}

/// First `count` eigenvalues of the positive Laplacian on Sⁿ(r): k(k+n−1)/r².
pub fn sphere_laplace_spectrum(n: usize, radius: f64, count: usize) -> Result<Spectrum> {
    check_sphere(n, 1, radius, count)?;
    collect(OperatorKind::Laplace, count, |k| {
        let kf = k as f64;
        (
            kf * (kf + n as f64 - 1.0) / (radius * radius),
            spherical_harmonic_multiplicity(n, k),
        )
    })
}

/// Volume of Sⁿ(r).
pub fn sphere_volume(n: usize, radius: f64) -> f64 {
    use std::f64::consts::PI;
    // vol Sⁿ = 2π/(n−1) · vol Sⁿ⁻²
    let mut vol = if n % 2 == 0 { 2.0 } else { 2.0 * PI };
    let mut d = if n % 2 == 0 { 0 } else { 1 };
    while d < n {
        d += 2;
        vol *= 2.0 * PI / (d as f64 - 1.0);
    }
    vol * radius.powi(n as i32)
}

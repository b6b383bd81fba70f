//! Evaluators for the eigenvalue inequalities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::report::{Direction, InequalityReport, ReportBuilder};
use crate::error::{Error, Result};
use crate::model::{spinor_rank, torus_dirac_spectrum, EigenvalueSource, Field, Lattice, SpinStructure};

/// Tolerance on sᵀMs − 1 for eigenvectors fed into weighted integrals.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Σ_v field(v)·s(v)²·M_vv for an M-normalized vector s.
pub fn weighted_density_integral(field: &[f64], s: &[f64], mass: &[f64]) -> Result<f64> {
    if field.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), got: field.len() });
    }
    if mass.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), got: mass.len() });
    }
    let norm: f64 = s.iter().zip(mass).map(|(x, m)| x * x * m).sum();
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(field.iter().zip(s).zip(mass).map(|((f, x), m)| f * x * x * m).sum())
}

/// h_term = n²∫H²⟨s_j,s_j⟩ and r_term = 4∫⟨ℜs_j,s_j⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedCurvatureTerms {
    pub h_term: f64,
    pub r_term: f64,
}

impl WeightedCurvatureTerms {
    /// Homogeneous model: constant H² and ℜ = κ·Id against a normalized section.
    pub fn constant(n: usize, h_sq: f64, kappa: f64) -> Self {
        let nf = n as f64;
        Self { h_term: nf * nf * h_sq, r_term: 4.0 * kappa }
    }

    /// Mesh eigenvector in the scalar instance (ℜ = 0).
    pub fn from_field(n: usize, h_sq: &[f64], s: &[f64], mass: &[f64]) -> Result<Self> {
        let nf = n as f64;
        Ok(Self { h_term: nf * nf * weighted_density_integral(h_sq, s, mass)?, r_term: 0.0 })
    }
}

fn gamma(spec: &dyn EigenvalueSource, j: usize) -> Result<f64> {
    spec.gamma(j)
}

fn require(spec: &dyn EigenvalueSource, highest: usize) -> Result<()> {
    if highest > spec.available() {
        return Err(Error::IndexOutOfRange { requested: highest, available: spec.available() });
    }
    Ok(())
}

fn check_j(j: usize) -> Result<()> {
    if j == 0 {
        return Err(Error::InvalidRequest("j is 1-based".into()));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidRequest("dimension n must be positive".into()));
    }
    Ok(())
}

fn check_volume(volume: f64) -> Result<()> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::InvalidRequest(format!("volume must be positive, got {volume}")));
    }
    Ok(())
}

/// Σ_{k=1}^{n} Γ_{j+k} ≤ (n+4)Γ_j + rhs_extra, sharing the layout of the
/// Levitin–Parnovski-type checks.
fn lp_type(
    id: &str,
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    extra: &[(&str, f64)],
) -> Result<ReportBuilder> {
    check_j(j)?;
    check_n(n)?;
    require(spec, j + n)?;
    let gj = gamma(spec, j)?;
    let mut b = ReportBuilder::new(id, Direction::Upper)
        .param("j", j)
        .param("n", n)
        .spectrum(spec.label());
    for k in 1..=n {
        b = b.lhs(format!("gamma_{}", j + k), gamma(spec, j + k)?);
    }
    b = b.rhs("(n+4)*gamma_j", (n as f64 + 4.0) * gj);
    for &(name, v) in extra {
        b = b.rhs(name, v);
    }
    Ok(b)
}

pub fn check_main_theorem(
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    terms: &WeightedCurvatureTerms,
) -> Result<InequalityReport> {
    Ok(lp_type(
        "main",
        spec,
        j,
        n,
        &[("h_term", terms.h_term), ("-r_term", -terms.r_term)],
    )?
    .param("h_term", terms.h_term)
    .param("r_term", terms.r_term)
    .build())
}

/// Σ(η_{i+j} − η_j) ≤ 4η_j with η_i = Γ_i + (c_sup − 4κ)/4.
pub fn check_corollary_eta(
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    c_sup: f64,
    kappa: f64,
) -> Result<InequalityReport> {
    check_j(j)?;
    check_n(n)?;
    require(spec, j + n)?;
    let shift = (c_sup - 4.0 * kappa) / 4.0;
    let eta = |i: usize| gamma(spec, i).map(|g| g + shift);
    let eta_j = eta(j)?;
    let mut b = ReportBuilder::new("eta", Direction::Upper)
        .param("j", j)
        .param("n", n)
        .param("c_sup", c_sup)
        .param("kappa", kappa)
        .param("shift", shift)
        .spectrum(spec.label())
        .note("Λ in the corollary is read as Γ");
    for i in 1..=n {
        b = b.lhs(format!("eta_{}-eta_{j}", i + j), eta(i + j)? - eta_j);
    }
    Ok(b.rhs("4*eta_j", 4.0 * eta_j).build())
}

/// ΣΓ_{i+j} ≤ (n+4)Γ_j + c₁ − 4c₂ for ℜ ≥ c₂ and n²H² ≤ c₁.
pub fn check_universal_euclidean(
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    c1: f64,
    c2: f64,
) -> Result<InequalityReport> {
    Ok(lp_type("universal_euclidean", spec, j, n, &[("c1", c1), ("-4*c2", -4.0 * c2)])?
        .param("c1", c1)
        .param("c2", c2)
        .build())
}

fn reilly_type(
    id: &str,
    spec: &dyn EigenvalueSource,
    n: usize,
    m: usize,
    rhs_terms: &[(&str, f64)],
) -> Result<InequalityReport> {
    check_n(n)?;
    if spec.zero_dim() < m {
        return Err(Error::InconsistentKernel { zero_dim: spec.zero_dim(), requested: m });
    }
    require(spec, m + n)?;
    let nf = n as f64;
    let mut b = ReportBuilder::new(id, Direction::Upper)
        .param("n", n)
        .param("m", m)
        .spectrum(spec.label());
    for k in 1..=n {
        b = b.lhs(format!("gamma_{}/n", k + m), gamma(spec, k + m)? / nf);
    }
    let mut sub = ReportBuilder::new(&format!("{id}_first_nonzero"), Direction::Upper)
        .param("m", m)
        .spectrum(spec.label())
        .lhs(format!("gamma_{}", m + 1), gamma(spec, m + 1)?);
    for &(name, v) in rhs_terms {
        b = b.rhs(name, v);
        sub = sub.rhs(name, v);
    }
    Ok(b.sub_report(sub.build()).build())
}

/// (1/n)ΣΓ_{k+m} ≤ (n/vol)∫H², with the first-nonzero specialization as a sub-report.
pub fn check_reilly_i(
    spec: &dyn EigenvalueSource,
    n: usize,
    m: usize,
    mean_h_sq_integral: f64,
    volume: f64,
) -> Result<InequalityReport> {
    check_volume(volume)?;
    let r = reilly_type(
        "reilly_i",
        spec,
        n,
        m,
        &[("(n/vol)*int_h_sq", n as f64 / volume * mean_h_sq_integral)],
    )?;
    Ok(with_params(r, &[("int_h_sq", mean_h_sq_integral), ("volume", volume)]))
}

/// Upper check for a submanifold of the unit sphere; `weighted` is
/// ∫(H̄²+1)⟨s_j,s_j⟩.
pub fn check_sphere_theorem(
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    weighted: f64,
    r_term: f64,
) -> Result<InequalityReport> {
    let nf = n as f64;
    Ok(lp_type(
        "sphere_theorem",
        spec,
        j,
        n,
        &[("n^2*int(hbar^2+1)", nf * nf * weighted), ("-r_term", -r_term)],
    )?
    .param("int_hbar_sq_plus_one", weighted)
    .param("r_term", r_term)
    .build())
}

/// (1/n)ΣΓ_{k+m} ≤ (n/vol)∫(H̄²+1).
pub fn check_reilly_ii(
    spec: &dyn EigenvalueSource,
    n: usize,
    m: usize,
    willmore_sphere: f64,
    volume: f64,
) -> Result<InequalityReport> {
    check_volume(volume)?;
    let r = reilly_type(
        "reilly_ii",
        spec,
        n,
        m,
        &[("(n/vol)*int(hbar^2+1)", n as f64 / volume * willmore_sphere)],
    )?;
    Ok(with_params(r, &[("int_hbar_sq_plus_one", willmore_sphere), ("volume", volume)]))
}

/// ΣΓ_{j+k} ≤ (n+4)Γ_j + n² − 4c₃ for minimal submanifolds of the unit sphere.
pub fn check_universal_sphere(
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    c3: f64,
) -> Result<InequalityReport> {
    let nf = n as f64;
    Ok(lp_type("universal_sphere", spec, j, n, &[("n^2", nf * nf), ("-4*c3", -4.0 * c3)])?
        .param("c3", c3)
        .build())
}

/// Right-hand side variants of the projective-space inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum ProjectiveForm {
    /// 4(Γ_j + (n/2)(n+d_F) + T/4) with T = inf max (n²H̃² − 4S).
    Stated { htilde_sup_term: f64 },
    /// 4(Γ_j + (n/2)(n+d_F) − inf S) for minimal submanifolds.
    Minimal { s_inf: f64 },
}

pub fn check_projective(
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    field: Field,
    form: ProjectiveForm,
) -> Result<InequalityReport> {
    check_j(j)?;
    check_n(n)?;
    require(spec, j + n)?;
    let nf = n as f64;
    let df = field.d_f() as f64;
    let gj = gamma(spec, j)?;
    let mut b = ReportBuilder::new("projective", Direction::Upper)
        .param("j", j)
        .param("n", n)
        .param("d_F", field.d_f())
        .spectrum(spec.label())
        .note("H̃ of the theorem and of the projective lemma are read as the same mean curvature");
    for i in 1..=n {
        b = b.lhs(format!("gamma_{}-gamma_{j}", i + j), gamma(spec, i + j)? - gj);
    }
    b = b.rhs("4*gamma_j", 4.0 * gj).rhs("2n(n+d_F)", 2.0 * nf * (nf + df));
    b = match form {
        ProjectiveForm::Stated { htilde_sup_term } => b
            .param("form", "stated")
            .param("htilde_sup_term", htilde_sup_term)
            .rhs("htilde_sup_term", htilde_sup_term),
        ProjectiveForm::Minimal { s_inf } => b
            .param("form", "minimal")
            .param("s_inf", s_inf)
            .rhs("-4*s_inf", -4.0 * s_inf),
    };
    Ok(b.build())
}

/// (1/n)ΣΓ_{k+m} ≤ (n/vol)∫H̃² + 2(n+d_F).
pub fn check_reilly_iii(
    spec: &dyn EigenvalueSource,
    n: usize,
    m: usize,
    field: Field,
    htilde_sq_integral: f64,
    volume: f64,
) -> Result<InequalityReport> {
    check_volume(volume)?;
    let nf = n as f64;
    let df = field.d_f() as f64;
    let r = reilly_type(
        "reilly_iii",
        spec,
        n,
        m,
        &[
            ("(n/vol)*int_htilde_sq", nf / volume * htilde_sq_integral),
            ("2(n+d_F)", 2.0 * (nf + df)),
        ],
    )?;
    Ok(with_params(
        r,
        &[("d_F", df), ("int_htilde_sq", htilde_sq_integral), ("volume", volume)],
    ))
}

/// ΣΓ_{j+k} ≤ (n+4)Γ_j + inf max |B|².
pub fn check_lp_spin(
    spec: &dyn EigenvalueSource,
    j: usize,
    n: usize,
    b_sq_supinf: f64,
) -> Result<InequalityReport> {
    let mut b = lp_type("lp_spin", spec, j, n, &[("b_sq_supinf", b_sq_supinf)])?
        .param("b_sq_supinf", b_sq_supinf);
    if b_sq_supinf == 0.0 {
        b = b.note("|B|² ≡ 0 forces a flat compact immersion, which does not exist");
    }
    Ok(b.build())
}

/// ΣΓ̄_i ≤ inf max |B|² when harmonic spinors exist (m = zero_dim ≥ 1).
pub fn check_index_corollary(
    spec: &dyn EigenvalueSource,
    n: usize,
    m: usize,
    b_sq_supinf: f64,
) -> Result<InequalityReport> {
    check_n(n)?;
    if m == 0 {
        return Err(Error::HypothesisViolated(
            "the index corollary needs harmonic spinors (m ≥ 1)".into(),
        ));
    }
    if spec.zero_dim() != m {
        return Err(Error::InconsistentKernel { zero_dim: spec.zero_dim(), requested: m });
    }
    require(spec, m + n)?;
    let mut b = ReportBuilder::new("index_corollary", Direction::Upper)
        .param("n", n)
        .param("m", m)
        .param("b_sq_supinf", b_sq_supinf)
        .spectrum(spec.label())
        .note("nonvanishing index is taken as the presence of m zero modes");
    for i in 1..=n {
        b = b.lhs(format!("gamma_bar_{i}"), spec.gamma_bar(i)?);
    }
    Ok(b.rhs("b_sq_supinf", b_sq_supinf).build())
}

fn with_params(mut r: InequalityReport, extra: &[(&str, f64)]) -> InequalityReport {
    for &(k, v) in extra {
        r.params.insert(k.to_string(), v.into());
    }
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedrichParams {
    pub n: usize,
    pub s0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarGenusParams {
    pub area: f64,
    pub genus: u32,
}

/// Shared by the consecutive-gap and Yang-type bounds: constant H², ℜ ≥ κ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapParams {
    pub n: usize,
    pub k: usize,
    pub h_sq: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaumParams {
    pub n: usize,
    pub b_sq_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypersurfaceParams {
    pub n: usize,
    pub int_h_sq: f64,
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChenParams {
    pub n: usize,
    pub terms: WeightedCurvatureTerms,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainParams {
    pub n: usize,
    pub j: usize,
}

/// Each bound runs only when its parameters are present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BackgroundParams {
    pub friedrich: Option<FriedrichParams>,
    pub bar_genus: Option<BarGenusParams>,
    pub anghel_gap: Option<GapParams>,
    pub baum: Option<BaumParams>,
    pub bar_euclidean: Option<HypersurfaceParams>,
    pub bar_sphere: Option<HypersurfaceParams>,
    pub yang: Option<GapParams>,
    pub chen: Option<ChenParams>,
    pub levitin_parnovski: Option<DomainParams>,
}

pub fn check_friedrich(spec: &dyn EigenvalueSource, p: &FriedrichParams) -> Result<InequalityReport> {
    if p.n < 2 {
        return Err(Error::InvalidRequest("Friedrich's bound needs n ≥ 2".into()));
    }
    require(spec, 1)?;
    let nf = p.n as f64;
    Ok(ReportBuilder::new("friedrich", Direction::Lower)
        .param("n", p.n)
        .param("s0", p.s0)
        .spectrum(spec.label())
        .lhs("gamma_1", gamma(spec, 1)?)
        .rhs("n*s0/(4(n-1))", nf * p.s0 / (4.0 * (nf - 1.0)))
        .build())
}

pub fn check_bar_genus(spec: &dyn EigenvalueSource, p: &BarGenusParams) -> Result<InequalityReport> {
    check_volume(p.area)?;
    require(spec, 1)?;
    Ok(ReportBuilder::new("bar_genus", Direction::Lower)
        .param("area", p.area)
        .param("genus", p.genus)
        .spectrum(spec.label())
        .lhs("gamma_1", gamma(spec, 1)?)
        .rhs("4pi(1-g)/area", 4.0 * PI * (1.0 - p.genus as f64) / p.area)
        .build())
}

/// Γ_{k+1} − Γ_k ≤ nH² + (4/(kn))ΣΓ_i − 4κ/n.
pub fn check_anghel_gap(spec: &dyn EigenvalueSource, p: &GapParams) -> Result<InequalityReport> {
    check_n(p.n)?;
    if p.k == 0 {
        return Err(Error::InvalidRequest("k must be positive".into()));
    }
    require(spec, p.k + 1)?;
    let (nf, kf) = (p.n as f64, p.k as f64);
    let sum: f64 = (1..=p.k).map(|i| gamma(spec, i)).sum::<Result<f64>>()?;
    Ok(ReportBuilder::new("anghel_gap", Direction::Upper)
        .param("n", p.n)
        .param("k", p.k)
        .param("h_sq", p.h_sq)
        .param("kappa", p.kappa)
        .spectrum(spec.label())
        .lhs(format!("gamma_{}", p.k + 1), gamma(spec, p.k + 1)?)
        .lhs(format!("-gamma_{}", p.k), -gamma(spec, p.k)?)
        .rhs("n*h_sq", nf * p.h_sq)
        .rhs("4/(kn)*sum_gamma", 4.0 / (kf * nf) * sum)
        .rhs("-4*kappa/n", -4.0 * p.kappa / nf)
        .build())
}

/// Γ̄₁ ≤ 2^⌊n/2⌋ sup|B|².
pub fn check_baum(spec: &dyn EigenvalueSource, p: &BaumParams) -> Result<InequalityReport> {
    check_n(p.n)?;
    Ok(ReportBuilder::new("baum", Direction::Upper)
        .param("n", p.n)
        .param("b_sq_sup", p.b_sq_sup)
        .spectrum(spec.label())
        .lhs("gamma_bar_1", spec.gamma_bar(1)?)
        .rhs("2^[n/2]*b_sq_sup", spinor_rank(p.n) as f64 * p.b_sq_sup)
        .build())
}

fn bar_hypersurface(
    id: &str,
    spec: &dyn EigenvalueSource,
    p: &HypersurfaceParams,
    sphere: bool,
) -> Result<InequalityReport> {
    check_n(p.n)?;
    check_volume(p.volume)?;
    let idx = spinor_rank(p.n);
    require(spec, idx)?;
    let nf = p.n as f64;
    let mut b = ReportBuilder::new(id, Direction::Upper)
        .param("n", p.n)
        .param("int_h_sq", p.int_h_sq)
        .param("volume", p.volume)
        .spectrum(spec.label())
        .lhs(format!("gamma_{idx}"), gamma(spec, idx)?);
    if sphere {
        b = b.rhs("n^2/4", nf * nf / 4.0);
    }
    Ok(b.rhs("n^2/(4vol)*int_h_sq", nf * nf / (4.0 * p.volume) * p.int_h_sq).build())
}

/// Σ_{i≤k}(Γ_{k+1}−Γ_i)² ≤ (4/n)Σ(Γ_{k+1}−Γ_i)(Γ_i + n²H²/4 − κ).
pub fn check_yang(spec: &dyn EigenvalueSource, p: &GapParams) -> Result<InequalityReport> {
    check_n(p.n)?;
    if p.k == 0 {
        return Err(Error::InvalidRequest("k must be positive".into()));
    }
    require(spec, p.k + 1)?;
    let nf = p.n as f64;
    let top = gamma(spec, p.k + 1)?;
    let mut b = ReportBuilder::new("yang", Direction::Upper)
        .param("n", p.n)
        .param("k", p.k)
        .param("h_sq", p.h_sq)
        .param("kappa", p.kappa)
        .spectrum(spec.label());
    for i in 1..=p.k {
        let g = gamma(spec, i)?;
        let gap = top - g;
        b = b
            .lhs(format!("gap_{i}^2"), gap * gap)
            .rhs(format!("4/n*gap_{i}*(..)"), 4.0 / nf * gap * (g + nf * nf * p.h_sq / 4.0 - p.kappa));
    }
    Ok(b.build())
}

/// Σλ_{j+k} ≤ (n+4)λ_j, stated for Dirichlet eigenvalues of Euclidean domains.
pub fn check_levitin_parnovski(spec: &dyn EigenvalueSource, p: &DomainParams) -> Result<InequalityReport> {
    Ok(lp_type("levitin_parnovski", spec, p.j, p.n, &[])?
        .note("proved for Dirichlet eigenvalues of bounded Euclidean domains; other inputs are outside its hypothesis")
        .build())
}

pub fn check_background_bounds(
    spec: &dyn EigenvalueSource,
    params: &BackgroundParams,
) -> Result<Vec<InequalityReport>> {
    let mut out = Vec::new();
    if let Some(p) = &params.friedrich {
        out.push(check_friedrich(spec, p)?);
    }
    if let Some(p) = &params.bar_genus {
        out.push(check_bar_genus(spec, p)?);
    }
    if let Some(p) = &params.anghel_gap {
        out.push(check_anghel_gap(spec, p)?);
    }
    if let Some(p) = &params.baum {
        out.push(check_baum(spec, p)?);
    }
    if let Some(p) = &params.bar_euclidean {
        out.push(bar_hypersurface("bar_euclidean", spec, p, false)?);
    }
    if let Some(p) = &params.bar_sphere {
        out.push(bar_hypersurface("bar_sphere", spec, p, true)?);
    }
    if let Some(p) = &params.yang {
        out.push(check_yang(spec, p)?);
    }
    if let Some(p) = &params.chen {
        let mut r = check_main_theorem(spec, 1, p.n, &p.terms)?;
        r.ineq_id = "chen".into();
        out.push(r);
    }
    if let Some(p) = &params.levitin_parnovski {
        out.push(check_levitin_parnovski(spec, p)?);
    }
    Ok(out)
}

/// (Γ̄₁+Γ̄₂)/2 against 4π²/area for every spin structure of a 2-torus.
/// Reports are exploratory: no outcome is expected.
pub fn conjecture_probe(lat: &Lattice, area: f64) -> Result<Vec<InequalityReport>> {
    if lat.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: lat.dim() });
    }
    check_volume(area)?;
    let mut out = Vec::with_capacity(4);
    for spin in SpinStructure::all(2) {
        // The zero eigenspace has dimension at most 2, so six values suffice.
        let spec = torus_dirac_spectrum(lat, &spin, 6)?;
        let b = ReportBuilder::new("conjecture", Direction::Lower)
            .param("spin", spin.label())
            .param("area", area)
            .param("covolume", lat.covolume())
            .spectrum(spec.label())
            .extrinsic("flat_torus_area")
            .exploratory()
            .lhs("gamma_bar_1/2", spec.gamma_bar(1)? / 2.0)
            .lhs("gamma_bar_2/2", spec.gamma_bar(2)? / 2.0)
            .rhs("4pi^2/area", 4.0 * PI * PI / area);
        out.push(b.build());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sphere_dirac_spectrum, sphere_laplace_spectrum, OperatorKind, SpectralEntry, Spectrum};

    fn synthetic(values: &[(f64, usize)]) -> Spectrum {
        Spectrum::new(
            OperatorKind::DiracSquared,
            values.iter().map(|&(value, multiplicity)| SpectralEntry { value, multiplicity }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn main_scalar_sphere_equality() {
        let s = sphere_laplace_spectrum(2, 1.0, 10).unwrap();
        let r = check_main_theorem(&s, 1, 2, &WeightedCurvatureTerms::constant(2, 1.0, 0.0)).unwrap();
        assert_eq!(r.lhs, 4.0);
        assert_eq!(r.rhs, 4.0);
        assert!(r.equality && r.satisfied);
    }

    #[test]
    fn main_dirac_sphere() {
        let s = sphere_dirac_spectrum(2, 1.0, 10).unwrap();
        let r = check_main_theorem(&s, 1, 2, &WeightedCurvatureTerms::constant(2, 1.0, 0.5)).unwrap();
        assert_eq!(r.lhs, 2.0);
        assert_eq!(r.rhs, 8.0);
    }

    #[test]
    fn eta_matches_main_margin() {
        let s = sphere_laplace_spectrum(2, 1.0, 10).unwrap();
        let e = check_corollary_eta(&s, 1, 2, 4.0, 0.0).unwrap();
        assert_eq!(e.lhs, 4.0);
        assert_eq!(e.rhs, 4.0);
        let flat = synthetic(&[(1.0, 8)]);
        let e = check_corollary_eta(&flat, 2, 3, 0.0, 0.0).unwrap();
        assert_eq!(e.lhs, 0.0);
    }

    #[test]
    fn insufficient_spectrum_is_an_error() {
        let s = sphere_laplace_spectrum(2, 1.0, 3).unwrap();
        let t = WeightedCurvatureTerms::constant(2, 1.0, 0.0);
        assert!(matches!(
            check_main_theorem(&s, 2, 2, &t),
            Err(Error::IndexOutOfRange { requested: 4, available: 3 })
        ));
        assert!(check_universal_sphere(&s, 5, 2, 0.0).is_err());
    }

    #[test]
    fn reilly_i_sphere_equality_and_kernel_contract() {
        let s = sphere_laplace_spectrum(2, 1.0, 10).unwrap();
        let r = check_reilly_i(&s, 2, 1, 4.0 * PI, 4.0 * PI).unwrap();
        assert_eq!(r.lhs, 2.0);
        assert!((r.rhs - 2.0).abs() < 1e-15);
        assert!(r.equality);
        assert_eq!(r.sub_reports.len(), 1);
        assert_eq!(r.sub_reports[0].lhs, 2.0);
        assert!(matches!(
            check_reilly_i(&s, 2, 2, 1.0, 1.0),
            Err(Error::InconsistentKernel { zero_dim: 1, requested: 2 })
        ));
    }

    #[test]
    fn projective_arithmetic() {
        let s = synthetic(&[(0.5, 3)]);
        let r = check_projective(&s, 1, 2, Field::C, ProjectiveForm::Minimal { s_inf: 0.0 }).unwrap();
        assert_eq!(r.rhs, 4.0 * 0.5 + 16.0);
    }

    #[test]
    fn index_corollary_contract() {
        let s = synthetic(&[(0.0, 2), (1.0, 1), (2.0, 1)]);
        let r = check_index_corollary(&s, 2, 2, 5.0).unwrap();
        assert_eq!(r.lhs, 3.0);
        assert!(r.satisfied);
        assert!(matches!(check_index_corollary(&s, 2, 0, 5.0), Err(Error::HypothesisViolated(_))));
        assert!(matches!(check_index_corollary(&s, 2, 1, 5.0), Err(Error::InconsistentKernel { .. })));
    }

    #[test]
    fn background_friedrich_and_bar_on_s2() {
        let s = sphere_dirac_spectrum(2, 1.0, 8).unwrap();
        let p = BackgroundParams {
            friedrich: Some(FriedrichParams { n: 2, s0: 2.0 }),
            bar_genus: Some(BarGenusParams { area: 4.0 * PI, genus: 0 }),
            ..Default::default()
        };
        let r = check_background_bounds(&s, &p).unwrap();
        assert_eq!(r.len(), 2);
        for x in &r {
            assert!(x.margin.abs() <= 1e-12, "{}", x.ineq_id);
            assert!(x.equality);
        }
    }

    #[test]
    fn weighted_integral_contract() {
        let mass = [0.25; 4];
        let s = [1.0; 4];
        assert_eq!(weighted_density_integral(&[3.0; 4], &s, &mass).unwrap(), 3.0);
        assert_eq!(weighted_density_integral(&[0.0; 4], &s, &mass).unwrap(), 0.0);
        assert!(matches!(weighted_density_integral(&[1.0; 4], &[2.0; 4], &mass), Err(Error::NotNormalized(_))));
        assert!(weighted_density_integral(&[1.0; 3], &s, &mass).is_err());
    }

    #[test]
    fn conjecture_rows() {
        let r = conjecture_probe(&Lattice::clifford(), 2.0 * PI * PI).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|x| x.exploratory));
        assert!(conjecture_probe(&Lattice::cubic(3, 1.0).unwrap(), 1.0).is_err());
    }
}

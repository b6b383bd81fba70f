//! `check`: evaluate inequalities on a model or mesh spectrum.

use serde::Serialize;
use specbound_core::inequality::{
    self as ineq, reports_to_csv, BackgroundParams, BarGenusParams, BaumParams, ChenParams, DomainParams,
    FriedrichParams, GapParams, HypersurfaceParams, InequalityReport, ProjectiveForm, WeightedCurvatureTerms,
};
use specbound_core::model::{spinor_rank, EigenvalueSource, Field, Lattice, ModelId};
use specbound_core::EigenBasis;

use crate::config::{parse_field, parse_j_range};
use crate::source::{spins_for, Geometry, MeshSource, ModelSource, Source, SourceInfo};
use crate::{emit, to_json, CliError, RunConfig, EXIT_OK, EXIT_UNSATISFIED};

/// Tolerance for deciding that a model sits in the unit sphere or is minimal there.
const MODEL_TOL: f64 = 1e-12;

/// Canonical id, or `None` for an unknown name.
pub fn canonical_id(name: &str) -> Option<&'static str> {
    Some(match name {
        "main" => "main",
        "eta" | "corollary_eta" => "eta",
        "universal_euclidean" => "universal_euclidean",
        "reilly1" | "reilly_i" => "reilly_i",
        "sphere" | "sphere_theorem" => "sphere_theorem",
        "reilly2" | "reilly_ii" => "reilly_ii",
        "universal_sphere" => "universal_sphere",
        "projective" => "projective",
        "reilly3" | "reilly_iii" => "reilly_iii",
        "lp_spin" => "lp_spin",
        "index" | "index_corollary" => "index_corollary",
        "conjecture" => "conjecture",
        "background" => "background",
        "friedrich" => "friedrich",
        "bar_genus" => "bar_genus",
        "anghel_gap" => "anghel_gap",
        "baum" => "baum",
        "bar_euclidean" => "bar_euclidean",
        "bar_sphere" => "bar_sphere",
        "yang" => "yang",
        "chen" => "chen",
        "levitin_parnovski" => "levitin_parnovski",
        _ => return None,
    })
}

pub fn parse_ids(cfg: &RunConfig) -> Result<Vec<&'static str>, CliError> {
    let text = cfg.ineq.as_deref().ok_or_else(|| CliError::missing("ineq", "check"))?;
    let ids = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| canonical_id(t).ok_or_else(|| CliError::usage("ineq", format!("unknown inequality '{t}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err(CliError::usage("ineq", "empty inequality list"));
    }
    Ok(ids)
}

/// Per-index checks run for every j in the range; the rest run once.
fn per_j(id: &str) -> bool {
    matches!(
        id,
        "main" | "eta" | "universal_euclidean" | "sphere_theorem" | "universal_sphere" | "projective" | "lp_spin"
            | "anghel_gap" | "yang" | "levitin_parnovski"
    )
}

/// Highest spectral index an id reads, given the largest j, n and kernel dimension m.
fn required(id: &str, j: usize, n: usize, m: usize, bg: Option<&BackgroundParams>) -> usize {
    match id {
        "main" | "eta" | "universal_euclidean" | "sphere_theorem" | "universal_sphere" | "projective" | "lp_spin"
        | "levitin_parnovski" => j + n,
        "reilly_i" | "reilly_ii" | "reilly_iii" | "index_corollary" => m + n,
        "anghel_gap" | "yang" => j + 1,
        "chen" => 1 + n,
        "friedrich" | "bar_genus" => 1,
        "baum" => m + 1,
        "bar_euclidean" | "bar_sphere" => spinor_rank(n),
        "background" => bg.map_or(0, |b| background_required(b, m)),
        _ => 0,
    }
}

fn background_required(b: &BackgroundParams, m: usize) -> usize {
    [
        b.friedrich.as_ref().map(|_| 1),
        b.bar_genus.as_ref().map(|_| 1),
        b.anghel_gap.as_ref().map(|p| p.k + 1),
        b.baum.as_ref().map(|_| m + 1),
        b.bar_euclidean.as_ref().map(|p| spinor_rank(p.n)),
        b.bar_sphere.as_ref().map(|p| spinor_rank(p.n)),
        b.yang.as_ref().map(|p| p.k + 1),
        b.chen.as_ref().map(|p| 1 + p.n),
        b.levitin_parnovski.as_ref().map(|p| p.j + p.n),
    ]
    .into_iter()
    .flatten()
    .max()
    .unwrap_or(0)
}

/// Spectral count for `ids`, checked against `--count` before anything is computed.
pub fn validated_count(cfg: &RunConfig, ids: &[&str], j_hi: usize, n: usize, m: usize) -> Result<usize, CliError> {
    let (need, by) = ids
        .iter()
        .map(|id| (required(id, j_hi, n, m, cfg.background.as_ref()), *id))
        .max()
        .unwrap_or((0, ""));
    match cfg.count {
        Some(c) if c < need => Err(CliError::usage(
            "count",
            format!("--count {c} is below the {need} eigenvalues {by} needs at j = {j_hi}"),
        )),
        Some(c) => Ok(c),
        None => Ok(need.max(1)),
    }
}

/// Constants the checks draw on, with flags already applied over model values.
struct Consts<'a> {
    n: usize,
    h_sq: Option<f64>,
    kappa: f64,
    b_sq: Option<f64>,
    s_min: Option<f64>,
    volume: Option<f64>,
    int_h_sq: Option<f64>,
    hbar_sq: Option<f64>,
    genus: Option<u32>,
    field: Option<Field>,
    projective: bool,
    lattice: Option<&'a Lattice>,
    area: Option<f64>,
    extrinsic_label: String,
    mesh: Option<MeshFields<'a>>,
}

struct MeshFields<'a> {
    h_sq: &'a [f64],
    mass: &'a [f64],
    basis: &'a EigenBasis,
}

fn need<T>(v: Option<T>, param: &str, id: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::missing(param, id))
}

impl Consts<'_> {
    fn h_sq(&self, id: &str) -> Result<f64, CliError> {
        need(self.h_sq, "h-sq", id)
    }

    fn hbar_sq(&self, id: &str) -> Result<f64, CliError> {
        need(self.hbar_sq, "hbar-sq", id)
    }

    fn volume(&self, id: &str) -> Result<f64, CliError> {
        need(self.volume, "volume", id)
    }

    fn b_sq(&self, id: &str) -> Result<f64, CliError> {
        need(self.b_sq, "b-sq", id)
    }

    fn field(&self, cfg: &RunConfig, id: &str) -> Result<Field, CliError> {
        match (self.field, cfg.field.as_deref()) {
            (Some(f), _) => Ok(f),
            (None, Some(s)) => parse_field(s),
            (None, None) => Err(CliError::missing("field", id)),
        }
    }

    fn main_terms(&self, cfg: &RunConfig, j: usize) -> Result<WeightedCurvatureTerms, CliError> {
        match (&self.mesh, cfg.h_sq) {
            (Some(f), None) => {
                let s = &f.basis.vectors[j - 1];
                let mut t = WeightedCurvatureTerms::from_field(self.n, f.h_sq, s, f.mass)?;
                t.r_term = 4.0 * self.kappa;
                Ok(t)
            }
            _ => Ok(WeightedCurvatureTerms::constant(self.n, self.h_sq("main")?, self.kappa)),
        }
    }
}

/// Reports for one id at one j (or once, for the index-free checks).
fn evaluate(
    id: &str,
    j: usize,
    cfg: &RunConfig,
    spec: &dyn EigenvalueSource,
    c: &Consts<'_>,
) -> Result<Vec<InequalityReport>, CliError> {
    let n = c.n;
    let nf = n as f64;
    let m = cfg.m.unwrap_or_else(|| spec.zero_dim());
    let one = |r: InequalityReport| Ok(vec![r]);
    match id {
        "main" => one(ineq::check_main_theorem(spec, j, n, &c.main_terms(cfg, j)?)?),
        "eta" => {
            let c_sup = cfg.c_sup.map_or_else(|| c.h_sq(id).map(|h| nf * nf * h), Ok)?;
            one(ineq::check_corollary_eta(spec, j, n, c_sup, c.kappa)?)
        }
        "universal_euclidean" => {
            let c1 = cfg.c1.map_or_else(|| c.h_sq(id).map(|h| nf * nf * h), Ok)?;
            let c2 = cfg.c2.unwrap_or(c.kappa);
            one(ineq::check_universal_euclidean(spec, j, n, c1, c2)?)
        }
        "reilly_i" => {
            let volume = c.volume(id)?;
            let int_h_sq = match c.int_h_sq {
                Some(v) => v,
                None => c.h_sq(id)? * volume,
            };
            one(ineq::check_reilly_i(spec, n, m, int_h_sq, volume)?)
        }
        "sphere_theorem" => {
            let weighted = c.hbar_sq(id)? + 1.0;
            one(ineq::check_sphere_theorem(spec, j, n, weighted, 4.0 * c.kappa)?)
        }
        "reilly_ii" => {
            let volume = c.volume(id)?;
            one(ineq::check_reilly_ii(spec, n, m, (c.hbar_sq(id)? + 1.0) * volume, volume)?)
        }
        "universal_sphere" => {
            let c3 = cfg.c3.unwrap_or(c.kappa);
            let mut r = ineq::check_universal_sphere(spec, j, n, c3)?;
            match c.hbar_sq {
                Some(h) if h.abs() <= MODEL_TOL => {}
                Some(_) => r = r.with_note("source is not minimal in the unit sphere"),
                None => r = r.with_note("minimality in the unit sphere is assumed, not checked"),
            }
            one(r)
        }
        "projective" => {
            let field = c.field(cfg, id)?;
            let form = match cfg.form.as_deref().unwrap_or("stated") {
                "stated" => {
                    let t = match (cfg.htilde_term, c.projective) {
                        (Some(t), _) => t,
                        // The model is minimal in its sphere, so the term is −4S.
                        (None, true) => -4.0 * need(c.s_min, "htilde-term", id)?,
                        (None, false) => return Err(CliError::missing("htilde-term", id)),
                    };
                    ProjectiveForm::Stated { htilde_sup_term: t }
                }
                "minimal" => ProjectiveForm::Minimal { s_inf: need(cfg.s_inf.or(c.s_min), "s-inf", id)? },
                other => return Err(CliError::usage("form", format!("unknown form '{other}'"))),
            };
            one(ineq::check_projective(spec, j, n, field, form)?)
        }
        "reilly_iii" => {
            let field = c.field(cfg, id)?;
            let int = match (cfg.int_htilde_sq, c.projective) {
                (Some(v), _) => v,
                (None, true) => 0.0,
                (None, false) => return Err(CliError::missing("int-htilde-sq", id)),
            };
            one(ineq::check_reilly_iii(spec, n, m, field, int, c.volume(id)?)?)
        }
        "lp_spin" => one(ineq::check_lp_spin(spec, j, n, c.b_sq(id)?)?),
        "index_corollary" => one(ineq::check_index_corollary(spec, n, m, c.b_sq(id)?)?),
        "conjecture" => {
            let lat = c.lattice.ok_or_else(|| CliError::usage("conjecture", "the conjecture probe needs a 2-torus lattice"))?;
            let area = cfg.area.unwrap_or_else(|| lat.covolume());
            Ok(ineq::conjecture_probe(lat, area)?)
        }
        "background" => {
            let bg = cfg.background.as_ref().ok_or_else(|| {
                CliError::usage("missing_parameter", "background needs a \"background\" entry in the --config file")
            })?;
            Ok(ineq::check_background_bounds(spec, bg)?)
        }
        "friedrich" => {
            let s0 = need(cfg.s0.or(c.s_min), "s0", id)?;
            one(ineq::check_friedrich(spec, &FriedrichParams { n, s0 })?)
        }
        "bar_genus" => {
            if n != 2 {
                return Err(CliError::usage("bar_genus", "bar_genus applies to surfaces"));
            }
            let area = need(c.area.or(c.volume), "area", id)?;
            let genus = need(cfg.genus.or(c.genus), "genus", id)?;
            one(ineq::check_bar_genus(spec, &BarGenusParams { area, genus })?)
        }
        "anghel_gap" | "yang" => {
            let p = GapParams { n, k: j, h_sq: c.h_sq(id)?, kappa: c.kappa };
            one(if id == "yang" { ineq::check_yang(spec, &p)? } else { ineq::check_anghel_gap(spec, &p)? })
        }
        "baum" => one(ineq::check_baum(spec, &BaumParams { n, b_sq_sup: c.b_sq(id)? })?),
        "bar_euclidean" | "bar_sphere" => {
            let volume = c.volume(id)?;
            let int_h_sq = if id == "bar_sphere" {
                c.hbar_sq(id)? * volume
            } else {
                match c.int_h_sq {
                    Some(v) => v,
                    None => c.h_sq(id)? * volume,
                }
            };
            let p = HypersurfaceParams { n, int_h_sq, volume };
            let bg = if id == "bar_sphere" {
                BackgroundParams { bar_sphere: Some(p), ..Default::default() }
            } else {
                BackgroundParams { bar_euclidean: Some(p), ..Default::default() }
            };
            Ok(ineq::check_background_bounds(spec, &bg)?)
        }
        "chen" => {
            let terms = WeightedCurvatureTerms::constant(n, c.h_sq(id)?, c.kappa);
            let bg = BackgroundParams { chen: Some(ChenParams { n, terms }), ..Default::default() };
            Ok(ineq::check_background_bounds(spec, &bg)?)
        }
        "levitin_parnovski" => one(ineq::check_levitin_parnovski(spec, &DomainParams { n, j })?),
        other => Err(CliError::usage("ineq", format!("unknown inequality '{other}'"))),
    }
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    source: SourceInfo,
    reports: &'a [InequalityReport],
    all_satisfied: bool,
}

/// True when every non-exploratory report, sub-reports included, is satisfied.
pub fn all_satisfied(reports: &[InequalityReport]) -> bool {
    reports.iter().flat_map(|r| r.flatten()).all(|r| r.exploratory || r.satisfied)
}

/// All reports requested by `cfg`, in id, spin and j order.
pub fn collect(cfg: &RunConfig) -> Result<(SourceInfo, Vec<InequalityReport>), CliError> {
    let ids = parse_ids(cfg)?;
    let range = cfg.j.as_deref().map(parse_j_range).transpose()?.unwrap_or((1, 1));
    let source = Source::resolve(cfg)?;
    let reports = match &source {
        Source::Model(model) => run_model(cfg, &ids, range, model)?,
        Source::Mesh(mesh) => run_mesh(cfg, &ids, range, mesh)?,
    };
    Ok((source.info(), reports))
}

pub fn run(cfg: &RunConfig) -> Result<i32, CliError> {
    let (source, reports) = collect(cfg)?;
    let ok = all_satisfied(&reports);
    let text = match cfg.format.as_deref().unwrap_or("json") {
        "json" => to_json(&CheckOutput { source, reports: &reports, all_satisfied: ok })?,
        "csv" => reports_to_csv(&reports)?,
        other => return Err(CliError::usage("format", format!("unknown format '{other}'"))),
    };
    emit(cfg.output.as_deref(), &text)?;
    Ok(if ok { EXIT_OK } else { EXIT_UNSATISFIED })
}

fn run_ids(
    cfg: &RunConfig,
    ids: &[&str],
    (j_lo, j_hi): (usize, usize),
    spec: &dyn EigenvalueSource,
    c: &Consts<'_>,
    spin: Option<&str>,
    out: &mut Vec<InequalityReport>,
) -> Result<(), CliError> {
    for id in ids {
        let js = if per_j(id) { j_lo..=j_hi } else { j_lo..=j_lo };
        for j in js {
            for mut r in evaluate(id, j, cfg, spec, c)? {
                if let Some(s) = spin {
                    if !r.params.contains_key("spin") {
                        r.params.insert("spin".into(), s.into());
                    }
                }
                if r.provenance.extrinsic.is_empty() {
                    r = r.with_extrinsic(c.extrinsic_label.clone());
                }
                out.push(r);
            }
        }
    }
    Ok(())
}

fn run_model(
    cfg: &RunConfig,
    ids: &[&str],
    range: (usize, usize),
    model: &ModelSource,
) -> Result<Vec<InequalityReport>, CliError> {
    let ext = model.extrinsic()?;
    let n = model.n();
    let in_unit_sphere = match &model.embedding {
        Some(ModelId::Sphere { radius, .. }) => (radius - 1.0).abs() <= MODEL_TOL,
        Some(ModelId::CliffordTorus) => true,
        Some(ModelId::ProductTorus { radii }) => {
            (radii.iter().map(|r| r * r).sum::<f64>() - 1.0).abs() <= MODEL_TOL
        }
        _ => false,
    };
    let h_sq = cfg.h_sq.or(ext.as_ref().map(|e| e.h_sq));
    let c = Consts {
        n,
        h_sq,
        kappa: cfg.kappa.unwrap_or_else(|| ext.as_ref().map_or(0.0, |e| e.kappa_for(model.operator))),
        b_sq: cfg.b_sq.or(ext.as_ref().map(|e| e.b_sq)),
        s_min: ext.as_ref().map(|e| e.scalar_curvature),
        volume: cfg.volume.or(Some(model.volume())),
        int_h_sq: cfg.int_h_sq,
        hbar_sq: cfg.hbar_sq.or(if in_unit_sphere { h_sq.map(|h| h - 1.0) } else { None }),
        genus: model.genus(),
        field: model.field,
        projective: model.field.is_some(),
        lattice: model.lattice(),
        area: cfg.area,
        extrinsic_label: ext.as_ref().map_or_else(|| "flags".into(), |e| e.model.clone()),
        mesh: None,
    };
    if ids.contains(&"conjecture") && !matches!(model.geometry, Geometry::Torus { .. }) {
        return Err(CliError::usage("conjecture", "the conjecture probe needs a 2-torus lattice"));
    }
    let mut out = Vec::new();
    // The probe enumerates spin structures itself and does not read the source spectrum.
    let (probe_ids, ids): (Vec<&str>, Vec<&str>) = ids.iter().partition(|id| **id == "conjecture");
    if !probe_ids.is_empty() {
        let unused = specbound_core::model::Spectrum::new(model.operator, Vec::new())?;
        run_ids(cfg, &probe_ids, range, &unused, &c, None, &mut out)?;
    }
    if ids.is_empty() {
        return Ok(out);
    }
    let spins = spins_for(cfg, model, "all")?;
    // Closed-form kernels are small, so a generous probe gives the exact zero_dim.
    let probe = model.spectra(&spins, 64)?;
    for p in probe {
        let m = cfg.m.unwrap_or(p.value.zero_dim());
        let count = validated_count(cfg, &ids, range.1, n, m)?;
        let spin_list: Vec<_> = match &p.spin {
            Some(label) => spins.iter().filter(|s| &s.label() == label).cloned().collect(),
            None => Vec::new(),
        };
        let spec = model.spectra(&spin_list, count)?.remove(0).value;
        run_ids(cfg, &ids, range, &spec, &c, p.spin.as_deref(), &mut out)?;
    }
    Ok(out)
}

fn run_mesh(
    cfg: &RunConfig,
    ids: &[&str],
    range: (usize, usize),
    src: &MeshSource,
) -> Result<Vec<InequalityReport>, CliError> {
    if ids.contains(&"conjecture") {
        return Err(CliError::usage("conjecture", "the conjecture probe needs a 2-torus lattice"));
    }
    let n = 2;
    let m = cfg.m.unwrap_or_else(|| src.components());
    let count = validated_count(cfg, ids, range.1, n, m)?;
    let data = src.extrinsic();
    let basis = src.solve(cfg, count)?;
    let s_min = data.scalar_curvature.iter().copied().fold(f64::INFINITY, f64::min);
    let c = Consts {
        n,
        h_sq: cfg.h_sq.or(Some(data.h_sq_max())),
        kappa: cfg.kappa.unwrap_or(0.0),
        b_sq: cfg.b_sq.or(Some(data.b_sq_max())),
        s_min: Some(s_min),
        volume: cfg.volume.or(Some(data.volume)),
        int_h_sq: cfg.int_h_sq.or(Some(data.willmore)),
        hbar_sq: cfg.hbar_sq,
        genus: src.genus(),
        field: None,
        projective: false,
        lattice: None,
        area: cfg.area,
        extrinsic_label: "mesh_discrete".into(),
        mesh: Some(MeshFields { h_sq: &data.h_sq, mass: &src.ops.mass, basis: &basis }),
    };
    let mut out = Vec::new();
    run_ids(cfg, ids, range, &basis, &c, None, &mut out)?;
    Ok(out)
}

//! Extrinsic constants of standard isometric embeddings into Euclidean space.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::projective::Field;
use super::sphere::sphere_volume;
use super::spectrum::OperatorKind;
use super::torus::Lattice;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModelId {
    /// Round Sⁿ(r) ⊂ ℝⁿ⁺¹.
    Sphere { n: usize, radius: f64 },
    /// S¹(1/√2)×S¹(1/√2) ⊂ S³(1) ⊂ ℝ⁴.
    CliffordTorus,
    /// Veronese surface: ℝP² of curvature 1/3, minimal in S⁴(1) ⊂ ℝ⁵.
    VeroneseRp2,
    /// 𝔽Pᵐ with its standard metric, embedded by z ↦ zz* into Hermitian matrices.
    ProjectivePointModel { field: Field, m: usize },
    /// S¹(ρ₁)×…×S¹(ρₖ) ⊂ ℝ²ᵏ, the flat torus of an orthogonal lattice.
    ProductTorus { radii: Vec<f64> },
}

impl ModelId {
    pub fn label(&self) -> String {
        match self {
            ModelId::Sphere { n, radius } => format!("sphere(n={n},r={radius})"),
            ModelId::CliffordTorus => "clifford_torus".into(),
            ModelId::VeroneseRp2 => "veronese_rp2".into(),
            ModelId::ProjectivePointModel { field, m } => {
                format!("projective({}P^{m})", field.symbol())
            }
            ModelId::ProductTorus { radii } => {
                let r: Vec<String> = radii.iter().map(|x| format!("{x}")).collect();
                format!("product_torus({})", r.join(","))
            }
        }
    }

    /// Product-of-circles embedding of the flat torus of an orthogonal lattice.
    pub fn product_torus_for(lat: &Lattice) -> Result<Self> {
        let sides = lat.orthogonal_sides().ok_or_else(|| {
            Error::InvalidModel("product-torus embedding needs an orthogonal lattice".into())
        })?;
        Ok(ModelId::ProductTorus {
            radii: sides.iter().map(|s| s / (2.0 * PI)).collect(),
        })
    }
}

/// Constant extrinsic data of a homogeneous model.
///
/// `h_sq` is the squared mean curvature normalized by Σ(Δx_A)² = n²H², `b_sq` is
/// |B|², and `curvature_term_kappa` is the spinor-bundle value ℜ = S/4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelExtrinsic {
    pub model: String,
    pub n: usize,
    pub h_sq: f64,
    pub b_sq: f64,
    pub scalar_curvature: f64,
    pub volume: f64,
    pub curvature_term_kappa: f64,
}

impl ModelExtrinsic {
    /// Lower bound for ⟨ℜs, s⟩ on the bundle the operator acts on: S/4 for the
    /// spinor bundle, 0 for functions.
    pub fn kappa_for(&self, operator: OperatorKind) -> f64 {
        match operator {
            OperatorKind::DiracSquared => self.curvature_term_kappa,
            OperatorKind::Laplace => 0.0,
        }
    }

    /// S − (n²H² − |B|²); zero for every shipped model.
    pub fn gauss_defect(&self) -> f64 {
        let n = self.n as f64;
        self.scalar_curvature - (n * n * self.h_sq - self.b_sq)
    }

    fn from_h_and_s(model: String, n: usize, h_sq: f64, s: f64, volume: f64) -> Self {
        let nf = n as f64;
        Self {
            model,
            n,
            h_sq,
            b_sq: nf * nf * h_sq - s,
            scalar_curvature: s,
            volume,
            curvature_term_kappa: s / 4.0,
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn model_extrinsic(id: &ModelId) -> Result<ModelExtrinsic> {
    let label = id.label();
    match id {
        ModelId::Sphere { n, radius } => {
            if *n < 1 || !(*radius > 0.0) {
                return Err(Error::InvalidModel(label));
            }
            let nf = *n as f64;
            let r2 = radius * radius;
            // B = g/r, so |B|² = n/r² and H² = 1/r².
            Ok(ModelExtrinsic {
                model: label,
                n: *n,
                h_sq: 1.0 / r2,
                b_sq: nf / r2,
                scalar_curvature: nf * (nf - 1.0) / r2,
                volume: sphere_volume(*n, *radius),
                curvature_term_kappa: nf * (nf - 1.0) / (4.0 * r2),
            })
        }
        ModelId::CliffordTorus => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let mut m = product_torus(&[r, r])?;
            m.model = label;
            Ok(m)
        }
        ModelId::ProductTorus { radii } => {
            let mut m = product_torus(radii)?;
            m.model = label;
            Ok(m)
        }
        ModelId::VeroneseRp2 => {
            // Minimal in S⁴(1): Δx = 2x, so 4H² = |Δx|² = 4. Gauss curvature 1/3.
            Ok(ModelExtrinsic::from_h_and_s(label, 2, 1.0, 2.0 / 3.0, 6.0 * PI))
        }
        ModelId::ProjectivePointModel { field, m } => {
            if *m < 1 {
                return Err(Error::InvalidModel(label));
            }
            let mf = *m as f64;
            let n = field.d_f() * m;
            // Minimal in the sphere of radius √(m/(2(m+1))), hence H² = 2(m+1)/m.
            let h_sq = 2.0 * (mf + 1.0) / mf;
            let (s, volume) = match field {
                Field::R => (mf * (mf - 1.0), sphere_volume(*m, 1.0) / 2.0),
                Field::C => (4.0 * mf * (mf + 1.0), PI.powi(*m as i32) / factorial(*m)),
                Field::Q => (
                    16.0 * mf * (mf + 2.0),
                    PI.powi(2 * *m as i32) / factorial(2 * m + 1),
                ),
            };
            Ok(ModelExtrinsic::from_h_and_s(label, n, h_sq, s, volume))
        }
    }
}

/// Each circle factor S¹(ρ) has coordinates with Δx = x/ρ², contributing 1/ρ² to
/// Σ(Δx_A)² and to |B|².
fn product_torus(radii: &[f64]) -> Result<ModelExtrinsic> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidModel("product torus radii must be positive".into()));
    }
    let n = radii.len();
    let nf = n as f64;
    let sum_inv: f64 = radii.iter().map(|r| 1.0 / (r * r)).sum();
    Ok(ModelExtrinsic {
        model: String::new(),
        n,
        h_sq: sum_inv / (nf * nf),
        b_sq: sum_inv,
        scalar_curvature: 0.0,
        volume: radii.iter().map(|r| 2.0 * PI * r).product(),
        curvature_term_kappa: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_s2() {
        let m = model_extrinsic(&ModelId::Sphere { n: 2, radius: 1.0 }).unwrap();
        assert_eq!(m.h_sq, 1.0);
        assert_eq!(m.b_sq, 2.0);
        assert_eq!(m.scalar_curvature, 2.0);
        assert!((m.volume - 4.0 * PI).abs() < 1e-14);
        assert_eq!(m.curvature_term_kappa, 0.5);
        assert_eq!(m.kappa_for(OperatorKind::Laplace), 0.0);
    }

    #[test]
    fn clifford_torus_is_flat_and_minimal_in_s3() {
        let m = model_extrinsic(&ModelId::CliffordTorus).unwrap();
        assert_eq!(m.scalar_curvature, 0.0);
        assert!((m.h_sq - 1.0).abs() < 1e-14);
        assert!((4.0 * m.h_sq - m.b_sq).abs() < 1e-14);
        assert!((m.volume - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn gauss_identity_for_every_model() {
        let mut ids = vec![ModelId::CliffordTorus, ModelId::VeroneseRp2];
        for n in 1..=6 {
            for r in [0.5, 1.0, 2.0] {
                ids.push(ModelId::Sphere { n, radius: r });
            }
        }
        for field in [Field::R, Field::C, Field::Q] {
            for m in 1..=4 {
                ids.push(ModelId::ProjectivePointModel { field, m });
            }
        }
        ids.push(ModelId::ProductTorus { radii: vec![1.0, 2.0] });
        for id in ids {
            let m = model_extrinsic(&id).unwrap();
            assert!(m.gauss_defect().abs() <= 1e-12, "{}", m.model);
        }
    }

    #[test]
    fn complex_projective_line_is_round_sphere_of_radius_half() {
        let m = model_extrinsic(&ModelId::ProjectivePointModel { field: Field::C, m: 1 }).unwrap();
        let s = model_extrinsic(&ModelId::Sphere { n: 2, radius: 0.5 }).unwrap();
        assert_eq!(m.n, 2);
        assert!((m.h_sq - s.h_sq).abs() < 1e-14);
        assert!((m.scalar_curvature - s.scalar_curvature).abs() < 1e-14);
        assert!((m.volume - s.volume).abs() < 1e-14);
        let q = model_extrinsic(&ModelId::ProjectivePointModel { field: Field::Q, m: 1 }).unwrap();
        let s4 = model_extrinsic(&ModelId::Sphere { n: 4, radius: 0.5 }).unwrap();
        assert!((q.volume - s4.volume).abs() < 1e-14);
        assert!((q.scalar_curvature - s4.scalar_curvature).abs() < 1e-12);
    }

    #[test]
    fn product_torus_from_square_lattice() {
        let id = ModelId::product_torus_for(&Lattice::cubic(2, 2.0 * PI).unwrap()).unwrap();
        let m = model_extrinsic(&id).unwrap();
        assert!((m.h_sq - 0.5).abs() < 1e-14);
        assert!((m.b_sq - 2.0).abs() < 1e-14);
        let clifford = ModelId::product_torus_for(&Lattice::clifford()).unwrap();
        let a = model_extrinsic(&clifford).unwrap();
        let b = model_extrinsic(&ModelId::CliffordTorus).unwrap();
        assert!((a.h_sq - b.h_sq).abs() < 1e-14);
        assert!((a.volume - b.volume).abs() < 1e-12);
    }
}

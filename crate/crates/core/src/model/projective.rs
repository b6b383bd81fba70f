//! The embedding 𝔽Pᵐ → H_{m+1}(𝔽), z ↦ zz*, over ℝ, ℂ and the quaternions.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    Q,
}

impl Field {
    /// Real dimension of the field: 1, 2 or 4.
    pub fn d_f(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::Q => 4,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::Q => "Q",
        }
    }

    fn contains(self, q: &Quaternion) -> bool {
        match self {
            Field::R => q.x == 0.0 && q.y == 0.0 && q.z == 0.0,
            Field::C => q.y == 0.0 && q.z == 0.0,
            Field::Q => true,
        }
    }
}

/// w + x i + y j + z k. Reals and complex numbers embed as the first one or two parts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub fn real(w: f64) -> Self {
        Self { w, ..Self::ZERO }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Self { w: re, x: im, ..Self::ZERO }
    }

    /// Negates all three imaginary parts.
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// Square matrix over 𝔽 stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix {
    pub field: Field,
    pub size: usize,
    pub entries: Vec<Quaternion>,
}

impl HermitianMatrix {
    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.entries[r * self.size + c]
    }

    pub fn identity_scaled(field: Field, size: usize, s: f64) -> Self {
        let mut entries = vec![Quaternion::ZERO; size * size];
        for i in 0..size {
            entries[i * size + i] = Quaternion::real(s);
        }
        Self { field, size, entries }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.size;
        let mut entries = vec![Quaternion::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc = Quaternion::ZERO;
                for k in 0..n {
                    acc = acc + self.get(r, k) * other.get(k, c);
                }
                entries[r * n + c] = acc;
            }
        }
        Self { field: self.field, size: n, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            field: self.field,
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        (0..self.size).map(|i| self.get(i, i).w).sum()
    }

    /// ⟨P, Q⟩ = ½ Re tr(PQ).
    pub fn inner(&self, other: &Self) -> f64 {
        0.5 * self.matmul(other).trace()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }

    /// max |a_rc − conj(a_cr)|
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.size {
            for c in 0..self.size {
                let d = self.get(r, c) - self.get(c, r).conj();
                worst = worst.max(d.norm_sq().sqrt());
            }
        }
        worst
    }

    /// max |(P² − P)_rc|
    pub fn idempotent_defect(&self) -> f64 {
        self.matmul(self)
            .sub(self)
            .entries
            .iter()
            .map(|q| q.norm_sq().sqrt())
            .fold(0.0, f64::max)
    }
}

/// ι(z) = zz* for a unit vector z ∈ 𝔽^{m+1}.
pub fn projective_embedding_point(z: &[Quaternion], field: Field) -> Result<HermitianMatrix> {
    if z.is_empty() {
        return Err(Error::InvalidRequest("empty vector".into()));
    }
    if let Some(bad) = z.iter().find(|q| !field.contains(q)) {
        return Err(Error::InvalidRequest(format!(
            "component {bad:?} is not in {}",
            field.symbol()
        )));
    }
    let norm = z.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitInput(norm));
    }
    let n = z.len();
    let mut entries = Vec::with_capacity(n * n);
    for a in z {
        for b in z {
            entries.push(*a * b.conj());
        }
    }
    Ok(HermitianMatrix { field, size: n, entries })
}

/// Radius √(m/(2(m+1))) of the sphere around I/(m+1) that contains ι(𝔽Pᵐ).
pub fn embedding_sphere_radius(m: usize) -> f64 {
    let mf = m as f64;
    (mf / (2.0 * (mf + 1.0))).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real_vec(v: &[f64]) -> Vec<Quaternion> {
        v.iter().map(|&x| Quaternion::real(x)).collect()
    }

    #[test]
    fn d_f_table() {
        assert_eq!(Field::R.d_f(), 1);
        assert_eq!(Field::C.d_f(), 2);
        assert_eq!(Field::Q.d_f(), 4);
    }

    #[test]
    fn axis_maps_to_diagonal_projector() {
        let p = projective_embedding_point(&real_vec(&[1.0, 0.0]), Field::R).unwrap();
        assert_eq!(p.get(0, 0), Quaternion::real(1.0));
        assert_eq!(p.get(0, 1), Quaternion::ZERO);
        assert_eq!(p.get(1, 1), Quaternion::ZERO);
    }

    #[test]
    fn diagonal_vector_and_sphere_radius() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = projective_embedding_point(&real_vec(&[h, h]), Field::R).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((p.get(r, c).w - 0.5).abs() < 1e-15);
            }
        }
        let center = HermitianMatrix::identity_scaled(Field::R, 2, 0.5);
        let d = p.sub(&center).norm();
        assert!((d - 0.5).abs() < 1e-15);
        assert!((d - embedding_sphere_radius(1)).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_unit_and_wrong_field() {
        assert!(matches!(
            projective_embedding_point(&real_vec(&[1.0, 1.0]), Field::R),
            Err(Error::NonUnitInput(_))
        ));
        assert!(projective_embedding_point(&[Quaternion::complex(0.0, 1.0)], Field::R).is_err());
    }

    #[test]
    fn quaternion_units() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * i, Quaternion::new(0.0, 0.0, 0.0, -1.0));
        assert_eq!(i * i, Quaternion::real(-1.0));
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q * q.conj(), Quaternion::real(q.norm_sq()));
    }

    fn unit_vector(field: Field, raw: Vec<f64>, m: usize) -> Vec<Quaternion> {
        let mut z: Vec<Quaternion> = (0..=m)
            .map(|a| {
                let c = &raw[4 * a..4 * a + 4];
                match field {
                    Field::R => Quaternion::real(c[0]),
                    Field::C => Quaternion::complex(c[0], c[1]),
                    Field::Q => Quaternion::new(c[0], c[1], c[2], c[3]),
                }
            })
            .collect();
        let norm = z.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
        for q in &mut z {
            *q = Quaternion::new(q.w / norm, q.x / norm, q.y / norm, q.z / norm);
        }
        z
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn rank_one_projector_algebra(
            field_idx in 0usize..3,
            m in 1usize..4,
            raw in proptest::collection::vec(-1.0f64..1.0, 16),
        ) {
            let field = [Field::R, Field::C, Field::Q][field_idx];
            let probe = unit_vector(field, raw.clone(), m);
            let scale: f64 = raw.iter().take(4 * (m + 1)).map(|x| x * x).sum();
            prop_assume!(scale > 1e-6);
            let p = projective_embedding_point(&probe, field).unwrap();
            prop_assert!(p.hermitian_defect() < 1e-12);
            prop_assert!(p.idempotent_defect() < 1e-12);
            prop_assert!((p.trace() - 1.0).abs() < 1e-12);
            let center = HermitianMatrix::identity_scaled(field, m + 1, 1.0 / (m as f64 + 1.0));
            prop_assert!((p.sub(&center).norm() - embedding_sphere_radius(m)).abs() < 1e-12);
        }
    }
}

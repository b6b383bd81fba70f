use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// P orthogonal with Q = PA upper triangular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangularization {
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
}

impl Triangularization {
    pub fn p_matrix(&self) -> DMatrix<f64> {
        rows_to_matrix(&self.p)
    }

    pub fn q_matrix(&self) -> DMatrix<f64> {
        rows_to_matrix(&self.q)
    }
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let m = rows.len();
    DMatrix::from_fn(m, m, |r, c| rows[r][c])
}

fn matrix_to_rows(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    a.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Householder reflections accumulated into P; rows are then flipped so the
/// nonzero diagonal entries of Q are positive.
pub fn gram_schmidt_upper(a: &DMatrix<f64>) -> Result<Triangularization> {
    let m = a.nrows();
    if a.ncols() != m {
        return Err(Error::DimensionMismatch { expected: m, got: a.ncols() });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidRequest("matrix has non-finite entries".into()));
    }
    let mut q = a.clone();
    let mut p = DMatrix::<f64>::identity(m, m);
    for c in 0..m.saturating_sub(1) {
        let below: f64 = (c + 1..m).map(|r| q[(r, c)] * q[(r, c)]).sum();
        if below == 0.0 {
            continue;
        }
        let x0 = q[(c, c)];
        let norm = (x0 * x0 + below).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (c..m).map(|r| q[(r, c)]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        for target in [&mut q, &mut p] {
            for col in 0..m {
                let d: f64 = v.iter().enumerate().map(|(i, vi)| vi * target[(c + i, col)]).sum();
                let f = 2.0 * d / vv;
                for (i, vi) in v.iter().enumerate() {
                    target[(c + i, col)] -= f * vi;
                }
            }
        }
        q[(c, c)] = alpha;
        for r in c + 1..m {
            q[(r, c)] = 0.0;
        }
    }
    for r in 0..m {
        if q[(r, r)] < 0.0 {
            q.row_mut(r).neg_mut();
            p.row_mut(r).neg_mut();
        }
    }
    Ok(Triangularization { p: matrix_to_rows(&p), q: matrix_to_rows(&q) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        let t = gram_schmidt_upper(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(t.p_matrix(), DMatrix::identity(4, 4));
        assert_eq!(t.q_matrix(), DMatrix::identity(4, 4));
        let t = gram_schmidt_upper(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(t.p_matrix(), DMatrix::identity(3, 3));
        assert_eq!(t.q_matrix(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn rank_deficient_and_errors() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 2.0, 4.0, 0.0, 3.0, 6.0, 0.0]);
        let t = gram_schmidt_upper(&a).unwrap();
        let (p, q) = (t.p_matrix(), t.q_matrix());
        assert!((&p * &a - &q).amax() < 1e-12 * a.norm());
        assert!((p.transpose() * &p - DMatrix::identity(3, 3)).amax() < 1e-12);
        assert!(gram_schmidt_upper(&DMatrix::zeros(2, 3)).is_err());
        assert!(gram_schmidt_upper(&DMatrix::from_element(2, 2, f64::NAN)).is_err());
    }

    #[test]
    fn diagonal_signs() {
        let a = DMatrix::from_row_slice(2, 2, &[-2.0, 1.0, 0.0, -3.0]);
        let q = gram_schmidt_upper(&a).unwrap().q_matrix();
        assert_eq!(q, DMatrix::from_row_slice(2, 2, &[2.0, -1.0, 0.0, 3.0]));
    }
}

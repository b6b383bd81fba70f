//! Proof-lab quantities against independent recomputation.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specbound_core::eigen::{solve_dense, solve_smallest};
use specbound_core::mesh::{assemble_operators, ellipsoid, icosphere};
use specbound_core::prooflab::{
    expansion_coefficients, gram_schmidt_upper, verify_prop31, GradientScheme,
};

#[test]
fn expansion_table_matches_dense_products() {
    let mesh = ellipsoid(1.0, 1.2, 0.9, 2).unwrap();
    let ops = assemble_operators(&mesh);
    let basis = solve_smallest(&ops, 30, 1e-10, 3).unwrap();
    let n = ops.dim();
    let s = DMatrix::from_fn(n, basis.len(), |r, c| basis.vectors[c][r]);
    for (psi_axis, j) in [(0, 2), (1, 5), (2, 11)] {
        let psi = mesh.coordinate(psi_axis);
        let w = DMatrix::from_fn(n, n, |r, c| if r == c { psi[r] * ops.mass[r] } else { 0.0 });
        let alpha = s.transpose() * w * &s;
        let table = expansion_coefficients(&psi, &basis, &ops.mass, j, basis.len()).unwrap();
        for (k, a) in table.coefficients.iter().enumerate() {
            assert!((a - alpha[(j - 1, k)]).abs() <= 1e-9, "j = {j}, k = {k}");
        }
    }
}

#[test]
fn bessel_tail_shrinks_with_truncation() {
    let mesh = icosphere(4).unwrap();
    let ops = assemble_operators(&mesh);
    let basis = solve_smallest(&ops, 200, 1e-10, 0).unwrap();
    let psi = mesh.coordinate(0);
    let tails: Vec<f64> = [50, 100, 200]
        .iter()
        .map(|&k| expansion_coefficients(&psi, &basis, &ops.mass, 2, k).unwrap().bessel_tail())
        .collect();
    assert!(tails[0] >= tails[1] && tails[1] >= tails[2], "{tails:?}");
    assert!(tails[2] >= -1e-10, "{tails:?}");
    assert!(expansion_coefficients(&psi, &basis, &ops.mass, 2, 200).unwrap().bessel_holds());
}

#[test]
fn expansion_identity_is_exact_with_a_dense_basis_in_the_edge_scheme() {
    let mesh = ellipsoid(1.0, 1.0, 2.0, 2).unwrap();
    let ops = assemble_operators(&mesh);
    let basis = solve_dense(&ops).unwrap();
    for j in [1, 2, 7, 20] {
        for axis in 0..3 {
            let psi = mesh.coordinate(axis);
            let r = verify_prop31(&mesh, &ops, &psi, &basis, j, basis.len(), GradientScheme::Edge).unwrap();
            assert!(r.relative_residual <= 1e-6, "j = {j}, axis {axis}: {}", r.relative_residual);
        }
    }
}

/// Row signs d with Q = D·R, taken from the oracle's diagonal.
fn matches_qr_oracle(a: &DMatrix<f64>, tol: f64) -> bool {
    let t = gram_schmidt_upper(a).unwrap();
    let (q, p) = (t.q_matrix(), t.p_matrix());
    let qr = a.clone().qr();
    let r = qr.r();
    let q_oracle = qr.q();
    let m = a.nrows();
    (0..m).all(|i| {
        let d = if r[(i, i)] < 0.0 { -1.0 } else { 1.0 };
        (0..m).all(|c| (q[(i, c)] - d * r[(i, c)]).abs() <= tol * a.norm().max(1.0))
            && (0..m).all(|c| (p[(i, c)] - d * q_oracle[(c, i)]).abs() <= tol * 10.0)
    })
}

#[test]
fn triangularization_matches_householder_qr_on_seeded_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let m = rng.random_range(2..=10);
        let a = DMatrix::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
        assert!(matches_qr_oracle(&a, 1e-10));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangularization_invariants(m in 2usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(m, m, |_, _| rng.random_range(-10.0..10.0));
        let t = gram_schmidt_upper(&a).unwrap();
        let (p, q) = (t.p_matrix(), t.q_matrix());
        prop_assert!((&p * &a - &q).norm() <= 1e-12 * a.norm());
        prop_assert!((p.determinant().abs() - 1.0).abs() <= 1e-10);
        prop_assert!((&p * p.transpose() - DMatrix::identity(m, m)).norm() <= 1e-12);
        for r in 0..m {
            for c in 0..r {
                prop_assert!(q[(r, c)].abs() <= 1e-12 * a.norm());
            }
            prop_assert!(q[(r, r)] >= 0.0);
        }
    }
}

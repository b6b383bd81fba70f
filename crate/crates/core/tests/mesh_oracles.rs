//! Discrete geometry against quadrature oracles, and invariance of mesh spectra.

use std::f64::consts::PI;

use proptest::prelude::*;
use specbound_core::eigen::{solve_dense, solve_smallest};
use specbound_core::inequality::{check_main_theorem, check_reilly_i, WeightedCurvatureTerms};
use specbound_core::mesh::{assemble_operators, ellipsoid, extrinsic_summary, extrinsic_summary_with, icosphere};
use specbound_core::Error;

/// ∫H² dA on the ellipsoid x²/a² + y²/b² + z²/c² = 1 with H = (k₁+k₂)/2, by a
/// midpoint rule in (θ, φ) and the implicit-surface curvature formula.
fn ellipsoid_willmore_oracle(a: f64, b: f64, c: f64, steps: usize) -> f64 {
    let (dt, dp) = (PI / steps as f64, 2.0 * PI / (2 * steps) as f64);
    let mut total = 0.0;
    for i in 0..steps {
        let t = (i as f64 + 0.5) * dt;
        let (st, ct) = t.sin_cos();
        for k in 0..2 * steps {
            let p = (k as f64 + 0.5) * dp;
            let (sp, cp) = p.sin_cos();
            let x = [a * st * cp, b * st * sp, c * ct];
            let xt = [a * ct * cp, b * ct * sp, -c * st];
            let xp = [-a * st * sp, b * st * cp, 0.0];
            let cr = [
                xt[1] * xp[2] - xt[2] * xp[1],
                xt[2] * xp[0] - xt[0] * xp[2],
                xt[0] * xp[1] - xt[1] * xp[0],
            ];
            let da = (cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]).sqrt() * dt * dp;
            let hd = [2.0 / (a * a), 2.0 / (b * b), 2.0 / (c * c)];
            let g = [hd[0] * x[0], hd[1] * x[1], hd[2] * x[2]];
            let g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
            let ghg = hd[0] * g[0] * g[0] + hd[1] * g[1] * g[1] + hd[2] * g[2] * g[2];
            let h = (g2 * (hd[0] + hd[1] + hd[2]) - ghg) / (2.0 * g2.powf(1.5));
            total += h * h * da;
        }
    }
    total
}

#[test]
fn willmore_oracle_is_4pi_on_the_sphere() {
    let w = ellipsoid_willmore_oracle(1.0, 1.0, 1.0, 400);
    assert!((w - 4.0 * PI).abs() < 1e-4);
}

#[test]
fn ellipsoid_willmore_converges_to_quadrature() {
    let oracle = ellipsoid_willmore_oracle(1.0, 1.0, 2.0, 1500);
    let mut errs = Vec::new();
    for level in [3, 4, 5] {
        let w = extrinsic_summary(&ellipsoid(1.0, 1.0, 2.0, level).unwrap()).willmore;
        errs.push((w - oracle).abs() / oracle);
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 0.02, "{errs:?}");
}

#[test]
fn ellipsoid_inequalities_and_truncation_errors() {
    let mesh = ellipsoid(1.0, 1.0, 2.0, 3).unwrap();
    let ops = assemble_operators(&mesh);
    let data = extrinsic_summary_with(&mesh, &ops);
    let basis = solve_smallest(&ops, 12, 1e-10, 0).unwrap();
    for j in 1..=10 {
        let terms = WeightedCurvatureTerms::from_field(2, &data.h_sq, &basis.vectors[j - 1], &ops.mass).unwrap();
        let r = check_main_theorem(&basis, j, 2, &terms).unwrap();
        assert!(r.margin > 0.0, "j = {j}: {}", r.margin);
    }
    let r = check_reilly_i(&basis, 2, basis.zero_dim(), data.willmore, data.volume).unwrap();
    assert!(r.margin > 0.0);
    let e = check_main_theorem(&basis, 11, 2, &WeightedCurvatureTerms::constant(2, 1.0, 0.0));
    assert!(matches!(e, Err(Error::IndexOutOfRange { requested: 13, available: 12 })));
}

fn rotation(ax: f64, ay: f64, az: f64) -> [[f64; 3]; 3] {
    let (sx, cx) = ax.sin_cos();
    let (sy, cy) = ay.sin_cos();
    let (sz, cz) = az.sin_cos();
    let rx = [[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]];
    let ry = [[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]];
    let rz = [[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]];
    let mul = |a: [[f64; 3]; 3], b: [[f64; 3]; 3]| {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        m
    };
    mul(rz, mul(ry, rx))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rigid_motions_preserve_spectrum_and_willmore(
        ax in -PI..PI, ay in -PI..PI, az in -PI..PI,
        tx in -5.0f64..5.0, ty in -5.0f64..5.0, tz in -5.0f64..5.0,
    ) {
        let mesh = ellipsoid(1.0, 1.5, 0.8, 1).unwrap();
        let r = rotation(ax, ay, az);
        let moved = mesh.map_vertices(|v| {
            let mut w = [tx, ty, tz];
            for i in 0..3 {
                for k in 0..3 {
                    w[i] += r[i][k] * v[k];
                }
            }
            w
        }).unwrap();
        let a = solve_dense(&assemble_operators(&mesh)).unwrap();
        let b = solve_dense(&assemble_operators(&moved)).unwrap();
        let scale = a.lambda_max();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
        let wa = extrinsic_summary(&mesh).willmore;
        let wb = extrinsic_summary(&moved).willmore;
        prop_assert!((wa - wb).abs() <= 1e-9 * wa);
    }

    #[test]
    fn scaling_divides_mesh_eigenvalues_by_t_squared(t in 0.1f64..10.0) {
        let mesh = icosphere(1).unwrap();
        let a = solve_dense(&assemble_operators(&mesh)).unwrap();
        let scaled = mesh.scaled(t).unwrap();
        let b = solve_dense(&assemble_operators(&scaled)).unwrap();
        let scale = a.lambda_max();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((y * t * t - x).abs() <= 1e-9 * scale);
        }
        prop_assert!((scaled.total_area() - t * t * mesh.total_area()).abs() <= 1e-12 * t * t * mesh.total_area());
        let wa = extrinsic_summary(&mesh).willmore;
        let wb = extrinsic_summary(&scaled).willmore;
        prop_assert!((wa - wb).abs() <= 1e-9 * wa);
    }
}

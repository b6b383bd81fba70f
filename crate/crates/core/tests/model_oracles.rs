//! Closed-form spectra against brute-force oracles and invariance properties.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use specbound_core::inequality::{check_bar_genus, check_friedrich, BarGenusParams, FriedrichParams};
use specbound_core::model::{
    model_extrinsic, sphere_dirac_spectrum, sphere_laplace_spectrum, torus_dirac_spectrum, torus_laplace_spectrum,
    Lattice, ModelId, SpinStructure,
};

/// |γ + shift·dual|² over a box of integer coefficients, sorted, each repeated `rank` times.
fn brute_force_torus(lat: &Lattice, shift: &[f64], rank: usize, reach: i64, count: usize) -> Vec<f64> {
    let dual = lat.dual_basis();
    let mut vals = Vec::new();
    for a in -reach..=reach {
        for b in -reach..=reach {
            let c = [a as f64 + shift[0], b as f64 + shift[1]];
            let g0 = dual[(0, 0)] * c[0] + dual[(0, 1)] * c[1];
            let g1 = dual[(1, 0)] * c[0] + dual[(1, 1)] * c[1];
            for _ in 0..rank {
                vals.push(g0 * g0 + g1 * g1);
            }
        }
    }
    vals.sort_by(f64::total_cmp);
    vals.truncate(count);
    vals
}

fn close(a: &[f64], b: &[f64], rel: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0))
}

#[test]
fn spectrum_examples() {
    let s = sphere_dirac_spectrum(2, 1.0, 20).unwrap();
    assert_eq!(&s.values()[..5], &[1.0, 1.0, 1.0, 1.0, 4.0]);
    assert_eq!(s.len(), 20);

    let lat = Lattice::from_rows(&[vec![6.2832, 0.0], vec![0.0, 6.2832]]).unwrap();
    let half = SpinStructure::new(vec![0.5, 0.5]).unwrap();
    let t = torus_dirac_spectrum(&lat, &half, 8).unwrap();
    // (2π/6.2832)²·(1/4 + 1/4).
    let expected = (2.0 * PI / 6.2832).powi(2) * 0.5;
    assert!((t.gamma(1).unwrap() - expected).abs() < 1e-14);
    assert!((t.gamma(1).unwrap() - 0.5).abs() < 1e-5);

    let l = sphere_laplace_spectrum(2, 1.0, 9).unwrap();
    assert_eq!(l.values(), vec![0.0, 2.0, 2.0, 2.0, 6.0, 6.0, 6.0, 6.0, 6.0]);
}

#[test]
fn torus_spectra_match_enumeration() {
    let lats = [
        Lattice::cubic(2, 2.0 * PI).unwrap(),
        Lattice::rectangular(&[2.0 * PI, 4.0 * PI]).unwrap(),
        Lattice::from_rows(&[vec![1.0, 0.3], vec![-0.2, 1.7]]).unwrap(),
        Lattice::clifford(),
    ];
    for lat in &lats {
        for spin in SpinStructure::all(2) {
            let got = torus_dirac_spectrum(lat, &spin, 60).unwrap().values();
            let want = brute_force_torus(lat, spin.shift(), 2, 25, 60);
            assert!(close(&got, &want, 1e-12), "{:?} {}", lat.basis(), spin.label());
        }
        let got = torus_laplace_spectrum(lat, 40).unwrap().values();
        let want = brute_force_torus(lat, &[0.0, 0.0], 1, 25, 40);
        assert!(close(&got, &want, 1e-12));
    }
}

#[test]
fn friedrich_is_sharp_on_unit_spheres() {
    for n in 2..=6 {
        let spec = sphere_dirac_spectrum(n, 1.0, 4).unwrap();
        let s0 = model_extrinsic(&ModelId::Sphere { n, radius: 1.0 }).unwrap().scalar_curvature;
        let r = check_friedrich(&spec, &FriedrichParams { n, s0 }).unwrap();
        assert!((r.lhs - r.rhs).abs() <= 1e-12, "n = {n}");
        assert!(r.equality && r.satisfied);
    }
    let s2 = sphere_dirac_spectrum(2, 1.0, 4).unwrap();
    let r = check_bar_genus(&s2, &BarGenusParams { area: 4.0 * PI, genus: 0 }).unwrap();
    assert!((r.lhs - r.rhs).abs() <= 1e-12);
}

fn unimodular(ops: &[(usize, i64)]) -> DMatrix<i64> {
    let mut u = DMatrix::<i64>::identity(2, 2);
    for &(kind, k) in ops {
        let e = match kind % 3 {
            0 => DMatrix::from_row_slice(2, 2, &[1, k, 0, 1]),
            1 => DMatrix::from_row_slice(2, 2, &[1, 0, k, 1]),
            _ => DMatrix::from_row_slice(2, 2, &[0, 1, 1, 0]),
        };
        u = &u * e;
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rebasing_leaves_spectra_unchanged(
        a in 0.5f64..3.0, b in 0.5f64..3.0, shear in -1.0f64..1.0,
        ops in prop::collection::vec((0usize..3, -2i64..=2), 1..5),
    ) {
        let lat = Lattice::from_rows(&[vec![a, 0.0], vec![shear, b]]).unwrap();
        let u = unimodular(&ops);
        let re = lat.rebased(&u).unwrap();
        prop_assert!((lat.covolume() - re.covolume()).abs() <= 1e-12 * lat.covolume());
        let x = torus_laplace_spectrum(&lat, 30).unwrap().values();
        let y = torus_laplace_spectrum(&re, 30).unwrap().values();
        prop_assert!(close(&x, &y, 1e-9));
        // Spin structures are tied to the basis; compare the set of all four.
        let mut xs: Vec<Vec<f64>> = SpinStructure::all(2).iter()
            .map(|s| torus_dirac_spectrum(&lat, s, 12).unwrap().values()).collect();
        let mut ys: Vec<Vec<f64>> = SpinStructure::all(2).iter()
            .map(|s| torus_dirac_spectrum(&re, s, 12).unwrap().values()).collect();
        let key = |v: &Vec<f64>| v.iter().map(|x| (x * 1e6).round() as i64).collect::<Vec<_>>();
        xs.sort_by_key(key);
        ys.sort_by_key(key);
        for (p, q) in xs.iter().zip(&ys) {
            prop_assert!(close(p, q, 1e-9));
        }
    }

    #[test]
    fn scaling_divides_eigenvalues_by_t_squared(t in 0.2f64..5.0, n in 2usize..6) {
        let base = sphere_dirac_spectrum(n, 1.0, 30).unwrap().values();
        let scaled = sphere_dirac_spectrum(n, t, 30).unwrap().values();
        for (b, s) in base.iter().zip(&scaled) {
            prop_assert!((s * t * t - b).abs() <= 1e-12 * b.max(1.0));
        }
        let lat = Lattice::rectangular(&[1.0, 1.6]).unwrap();
        let x = torus_laplace_spectrum(&lat, 20).unwrap().values();
        let y = torus_laplace_spectrum(&lat.scaled(t).unwrap(), 20).unwrap().values();
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((b * t * t - a).abs() <= 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn friedrich_holds_on_any_sphere(n in 2usize..=6, r in 0.1f64..10.0) {
        let spec = sphere_dirac_spectrum(n, r, 2).unwrap();
        let s0 = model_extrinsic(&ModelId::Sphere { n, radius: r }).unwrap().scalar_curvature;
        let rep = check_friedrich(&spec, &FriedrichParams { n, s0 }).unwrap();
        prop_assert!(rep.equality);
    }

    #[test]
    fn zero_dim_only_for_trivial_spin(a in 0.5f64..3.0, b in 0.5f64..3.0) {
        let lat = Lattice::rectangular(&[a, b]).unwrap();
        for spin in SpinStructure::all(2) {
            let s = torus_dirac_spectrum(&lat, &spin, 4).unwrap();
            let trivial = spin.shift().iter().all(|&x| x == 0.0);
            prop_assert_eq!(s.zero_dim(), if trivial { 2 } else { 0 });
        }
    }
}

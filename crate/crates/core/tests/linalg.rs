use proptest::prelude::*;
use tubecalc::fusion::Obj;
use tubecalc::linalg::{column_space, max_abs, max_abs_diff, null_space, pinv, rank, singular_values, CMat, C64};
use tubecalc::module::ModuleSystem;
use tubecalc::presets;
use tubecalc::trace::Tube;

fn low_rank(entries: &[(f64, f64)], rows: usize, cols: usize, r: usize) -> CMat {
    let a = CMat::from_fn(rows, r, |i, j| C64::new(entries[i * r + j].0, entries[i * r + j].1));
    let off = rows * r;
    let b = CMat::from_fn(r, cols, |i, j| C64::new(entries[off + i * cols + j].0, entries[off + i * cols + j].1));
    a * b
}

fn check_penrose(m: &CMat) {
    let p = pinv(m, 1e-10);
    assert!(max_abs_diff(&(m * &p * m), m) < 1e-9);
    assert!(max_abs_diff(&(&p * m * &p), &p) < 1e-9);
    let mp = m * &p;
    assert!(max_abs_diff(&mp, &mp.adjoint()) < 1e-9);
}

#[test]
fn structured_traciator_block() {
    // A Hermitian rank-one projector on which a direct complex SVD is inaccurate.
    let ms = ModuleSystem::regular(&presets::category("ising").unwrap()).unwrap();
    let x = ms.endofunctor_label("sigma").unwrap();
    let t = Tube::new(ms).unwrap();
    let w = Obj::word(&t.ms.sk, &[x]);
    let tau = t.traciator(&Obj::empty(1), &w).unwrap();
    for m in tau.blocks.values() {
        check_penrose(m);
        let cs = column_space(m, 1e-9);
        assert_eq!(cs.ncols(), rank(m, 1e-9));
        assert!(max_abs_diff(&(&cs * cs.adjoint() * m), m) < 1e-12);
        assert!(max_abs(&(m * null_space(m, 1e-9))) < 1e-12);
    }
}

#[test]
fn singular_values_of_a_diagonal() {
    let m = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(0.0, 3.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]));
    let s = singular_values(&m);
    assert_eq!(s.len(), 3);
    assert!((s[0] - 3.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12 && s[2].abs() < 1e-12);
    assert_eq!(rank(&m, 1e-9), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn low_rank_decompositions(entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64), rows in 1usize..5, cols in 1usize..5, r in 1usize..3) {
        let m = low_rank(&entries, rows, cols, r);
        check_penrose(&m);
        let k = rank(&m, 1e-9);
        prop_assert!(k <= r.min(rows).min(cols));
        let cs = column_space(&m, 1e-9);
        let ns = null_space(&m, 1e-9);
        prop_assert_eq!(cs.ncols(), k);
        prop_assert_eq!(ns.ncols(), cols - k);
        prop_assert!(max_abs_diff(&(cs.adjoint() * &cs), &CMat::identity(k, k)) < 1e-9);
        prop_assert!(max_abs(&(&m * &ns)) < 1e-9);
        prop_assert!(max_abs_diff(&(&cs * cs.adjoint() * &m), &m) < 1e-9);
    }
}

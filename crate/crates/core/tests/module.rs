use proptest::prelude::*;
use tubecalc::fusion::Obj;
use tubecalc::module::{Endo, ModuleSystem, RawModule};
use tubecalc::presets;
use tubecalc::Error;

fn regular(name: &str) -> ModuleSystem {
    ModuleSystem::regular(&presets::category(name).unwrap()).unwrap()
}

fn vecz2_on_vec(base: &str) -> ModuleSystem {
    presets::module("vecz2-on-vec", &presets::category(base).unwrap()).unwrap()
}

#[test]
fn regular_modules_validate() {
    for name in presets::NAMES {
        let m = regular(name);
        for (eq, r) in m.report.entries() {
            assert!(r.value < 1e-12, "{name} {eq}: {}", r.value);
        }
        assert!(m.dim_residual < 1e-12);
        for (i, &s) in m.m_labels.iter().enumerate() {
            assert!((m.dims[i] - m.base.qdim(s - m.nc())).abs() < 1e-12);
        }
    }
}

#[test]
fn fib_internal_hom() {
    let m = regular("fib");
    let t = m.label("M:tau").unwrap();
    assert_eq!(m.internal_hom(t, t), vec![1, 1]);
    let one = m.label("M:1").unwrap();
    assert_eq!(m.internal_hom(one, t), vec![0, 1]);
}

#[test]
fn vecz2_on_vec_loads_over_both_braidings() {
    for base in ["vecz2-plus", "vecz2-minus"] {
        let m = vecz2_on_vec(base);
        let s = m.label("m").unwrap();
        assert_eq!(m.internal_hom(s, s), vec![1, 1]);
        assert!((m.m_dim(s) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(m.e_labels.len(), 2);
        for (eq, r) in m.report.entries() {
            assert!(r.value < 1e-12, "{base} {eq}");
        }
    }
}

#[test]
fn ising_sigma_object_map() {
    let m = regular("ising");
    let y = m.endo_word(&[m.endofunctor_label("sigma").unwrap()]);
    let s = m.label("M:sigma").unwrap();
    assert_eq!(m.object_map(&y, s), vec![1, 0, 1]);
    let z = m.endofunctor_from_object(&[1, 0, 1]).unwrap();
    assert_eq!(m.object_map(&z, m.label("M:psi").unwrap()), vec![1, 0, 1]);
    assert_eq!(m.object_map(&z, s), vec![0, 2, 0]);
}

#[test]
fn endofunctor_from_object_errors() {
    let m = regular("fib");
    assert!(matches!(m.endofunctor_from_object(&[0, 0]), Err(Error::Invalid(_))));
    assert!(matches!(m.endofunctor_from_object(&[1]), Err(Error::Mismatch(_))));
    let v = vecz2_on_vec("vecz2-plus");
    assert!(v.endofunctor_from_object(&[1, 0]).is_err());
}

#[test]
fn internal_hom_dimension_identity() {
    let mut systems: Vec<ModuleSystem> = presets::NAMES.iter().map(|n| regular(n)).collect();
    systems.push(vecz2_on_vec("vecz2-minus"));
    for m in &systems {
        for &s in &m.m_labels {
            for &t in &m.m_labels {
                let lhs: f64 = m.internal_hom(s, t).iter().enumerate().map(|(x, &n)| n as f64 * m.c_dim(x)).sum();
                assert!((lhs - m.m_dim(s) * m.m_dim(t)).abs() < 1e-12, "{}", m.name);
            }
        }
    }
}

#[test]
fn endofunctor_snakes() {
    let m = regular("ising");
    let sig = m.endofunctor_label("sigma").unwrap();
    let psi = m.endofunctor_label("psi").unwrap();
    assert!(m.endofunctor_snake_residual(&m.endo_word(&[sig, psi])).unwrap() < 1e-12);
    let v = vecz2_on_vec("vecz2-minus");
    let chi = v.endofunctor_label("chi").unwrap();
    assert!(v.endofunctor_snake_residual(&v.endo_word(&[chi])).unwrap() < 1e-12);
}

#[test]
fn dual_endofunctor_transposes_object_map() {
    let m = regular("fib");
    let t = m.endofunctor_label("tau").unwrap();
    let y = m.endo_word(&[t, t]);
    let yd = m.endofunctor_dual(&y).unwrap();
    for (i, &s) in m.m_labels.iter().enumerate() {
        for (j, &u) in m.m_labels.iter().enumerate() {
            assert_eq!(m.object_map(&y, s)[j], m.object_map(&yd, u)[i]);
        }
    }
}

#[test]
fn base_part_acts_by_left_multiplication() {
    let m = regular("fib");
    let x = Endo::from_left(Obj::simple(&m.sk, m.label("tau").unwrap()));
    assert_eq!(m.object_map(&x, m.label("M:tau").unwrap()), vec![1, 1]);
    let st = m.module_structure(&x, &Obj::simple(&m.sk, 1), &Obj::simple(&m.sk, m.label("M:tau").unwrap())).unwrap();
    let inv = m.sk.invert(&st).unwrap();
    assert!(st.then(&inv).residual(&m.sk.identity(&st.src)) < 1e-12);
}

fn raw_module() -> RawModule {
    serde_json::from_str(presets::module_json("vecz2-on-vec").unwrap()).unwrap()
}

#[test]
fn broken_coherence_is_reported() {
    let base = presets::category("vecz2-minus").unwrap();
    let mut raw = raw_module();
    raw.endofunctors[1].coherence[1].value = [0.0, 1.0];
    match ModuleSystem::from_raw(&raw, &base) {
        Err(Error::Residual { equation, residual, .. }) => {
            assert!(equation.contains("pentagon"), "{equation}");
            assert!(residual > 0.5);
        }
        other => panic!("expected a residual error, got {other:?}"),
    }
}

#[test]
fn duplicate_labels_are_rejected() {
    let base = presets::category("vecz2-plus").unwrap();
    let mut raw = raw_module();
    raw.module_labels = vec!["g".into()];
    assert!(matches!(ModuleSystem::from_raw(&raw, &base), Err(Error::Schema(_))));
}

#[test]
fn schema_errors() {
    let base = presets::category("vec").unwrap();
    assert!(matches!(ModuleSystem::load("{}", &base), Err(Error::Schema(_))));
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..3, 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn composite_object_map_is_matrix_product(a in word(), b in word()) {
        let m = regular("ising");
        let la: Vec<_> = a.iter().map(|&l| m.e_labels[l]).collect();
        let lb: Vec<_> = b.iter().map(|&l| m.e_labels[l]).collect();
        let x = m.endo_word(&la);
        let y = m.endo_word(&lb);
        let xy = m.compose_endofunctors(&x, &y);
        for &s in &m.m_labels {
            let ys = m.object_map(&y, s);
            let mut want = vec![0u32; m.m_labels.len()];
            for (j, &t) in m.m_labels.iter().enumerate() {
                for (k, n) in m.object_map(&x, t).iter().enumerate() {
                    want[k] += ys[j] * n;
                }
            }
            prop_assert_eq!(m.object_map(&xy, s), want);
        }
    }
}

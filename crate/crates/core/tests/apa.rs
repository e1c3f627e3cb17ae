use proptest::prelude::*;
use tubecalc::apa::{corrupt_r, self_dual_check, Apa};
use tubecalc::fusion::Obj;
use tubecalc::linalg::C64;
use tubecalc::module::ModuleSystem;
use tubecalc::presets;
use tubecalc::trace::Tube;

const TOL: f64 = 1e-9;

fn regular(name: &str) -> ModuleSystem {
    ModuleSystem::regular(&presets::category(name).unwrap()).unwrap()
}

fn apa(name: &str, gen: &str, n_max: usize) -> Apa {
    let ms = regular(name);
    let x = ms.endofunctor_label(gen).unwrap();
    Apa::build(Tube::new(ms).unwrap(), x, n_max).unwrap()
}

/// Multiplicities of `x^{⊗n}` from the fusion rules alone.
fn fusion_power(ms: &ModuleSystem, x: usize, n: usize) -> Vec<u32> {
    let mut v = vec![0u32; ms.nc()];
    v[ms.sk.unit(0)] = 1;
    for _ in 0..n {
        let mut w = vec![0u32; ms.nc()];
        for b in ms.c_labels() {
            for c in ms.c_labels() {
                w[c] += v[b] * ms.sk.n(b, x, c);
            }
        }
        v = w;
    }
    v
}

#[test]
fn vec_apa_is_trivial() {
    let a = apa("vec", "1", 3);
    let r = a.check_axioms(TOL).unwrap();
    for ax in &r.axioms {
        assert_eq!(ax.residual, 0.0, "{}", ax.name);
    }
    for b in &r.boxes {
        assert_eq!(b.multiplicities["1"], 1);
    }
}

#[test]
fn fib_tau_passes_all_axioms() {
    let a = apa("fib", "tau", 3);
    let r = a.check_axioms(TOL).unwrap();
    assert_eq!(r.axioms.len(), 9);
    for ax in &r.axioms {
        assert!(ax.pass && ax.instances > 0, "{}: {}", ax.name, ax.residual);
    }
    assert_eq!(r.boxes[2].multiplicities["1"], 1);
    assert_eq!(r.boxes[2].multiplicities["tau"], 1);
}

#[test]
fn ising_sigma_passes_all_axioms() {
    let a = apa("ising", "sigma", 3);
    let r = a.check_axioms(TOL).unwrap();
    assert!(r.all_pass(), "{:?}", r.axioms);
    let p2 = &r.boxes[2].multiplicities;
    assert_eq!((p2["1"], p2["psi"], p2["sigma"]), (1, 1, 0));
}

#[test]
fn boxes_are_fusion_powers() {
    for (name, gen) in [("fib", "tau"), ("ising", "sigma"), ("ising", "psi"), ("vecz2-minus", "g")] {
        let a = apa(name, gen, 3);
        let x = a.tube.ms.label(gen).unwrap();
        for n in 0..=3 {
            assert_eq!(a.multiplicities(n).unwrap(), fusion_power(&a.tube.ms, x, n), "{name} P[{n}]");
        }
    }
}

#[test]
fn circle_is_quantum_dimension() {
    for (name, gen) in [("fib", "tau"), ("ising", "sigma")] {
        let a = apa(name, gen, 3);
        let d = a.tube.ms.base.qdim(a.tube.ms.label(gen).unwrap());
        assert!((a.witness.dim - d).abs() < 1e-12);
        for n in 0..=1 {
            for i in 0..=n {
                let loop_ = a.cup(i, n).unwrap().then(&a.cap(i, n).unwrap());
                assert!(loop_.residual(&a.id(n).unwrap().scale(C64::new(d, 0.0))) <= TOL);
            }
        }
    }
}

#[test]
fn witnesses() {
    assert!(self_dual_check(&regular("vec"), regular("vec").e_labels[0]).is_ok());
    for (name, gen) in [("fib", "tau"), ("ising", "sigma"), ("ising", "psi")] {
        let ms = regular(name);
        let w = self_dual_check(&ms, ms.endofunctor_label(gen).unwrap()).unwrap();
        assert!((w.fs_indicator - C64::new(1.0, 0.0)).norm() < 1e-12, "{name} {gen}");
    }
    let ms = regular("fib");
    assert!(self_dual_check(&ms, ms.label("tau").unwrap()).is_err());
}

#[test]
fn box_cap_is_enforced() {
    let a = apa("fib", "tau", 2);
    assert!(a.p(3).is_err());
    assert!(a.cap(0, 1).is_err());
    assert!(a.mult(0, 1, 2).is_err());
    assert!(a.cup(2, 0).is_err());
}

#[test]
fn braid_and_twist_axioms_match_the_coherence_checks() {
    let a = apa("ising", "sigma", 3);
    let r = a.check_axioms(TOL).unwrap();
    let t = &a.tube;
    let mut braid: f64 = 0.0;
    let mut twist: f64 = 0.0;
    for p in 0..=3 {
        twist = twist.max(t.twist_compat_residual(&a.word(p)).unwrap());
        for q in 0..=3 - p {
            braid = braid.max(t.braid_compat_residuals(&a.word(p), &a.word(q)).unwrap().framed);
        }
    }
    assert!((r.axiom("C8").unwrap().residual - braid).abs() <= 1e-12);
    assert!((r.axiom("C9").unwrap().residual - twist).abs() <= 1e-12);
}

#[test]
fn corrupted_ambient_braiding_fails_only_braid_and_twist() {
    let ms = regular("fib");
    let tau = ms.label("tau").unwrap();
    let bad = ms.sk.with_r_entry(tau, tau, ms.sk.unit(0), 0, 0, C64::new(0.3, 0.1));
    let x = ms.endofunctor_label("tau").unwrap();
    let a = Apa::build(Tube::new(ms).unwrap(), x, 2).unwrap().with_ambient(bad);
    let r = a.check_axioms(TOL).unwrap();
    assert!(!r.axiom("C8").unwrap().pass);
    for name in ["C1", "C2", "C3", "C4", "C5", "C6", "C7"] {
        assert!(r.axiom(name).unwrap().pass, "{name}");
    }
}

#[test]
fn corrupted_module_data_breaks_the_construction() {
    // Φ's half-braiding reads the same R-symbols, so the idempotents and
    // products are affected along with the braid check.
    let ms = regular("fib");
    let tau = ms.label("tau").unwrap();
    let bad = corrupt_r(&ms, (tau, tau, ms.sk.unit(0)), (0, 0), C64::new(0.3, 0.1));
    let x = bad.endofunctor_label("tau").unwrap();
    let a = Apa::build(Tube::new(bad).unwrap(), x, 2).unwrap();
    let r = a.check_axioms(TOL).unwrap();
    assert!(!r.axiom("C8").unwrap().pass);
    assert!(r.axiom("C4").unwrap().pass);
    assert!(!r.axiom("C1").unwrap().pass);
    assert!(!r.axiom("C7").unwrap().pass);
}

#[test]
fn report_json_shape() {
    let a = apa("vecz2-minus", "g", 2);
    let v = serde_json::to_value(a.check_axioms(TOL).unwrap()).unwrap();
    let axioms = v["axioms"].as_array().unwrap();
    assert_eq!(axioms.len(), 9);
    for ax in axioms {
        for key in ["name", "residual", "pass", "instances"] {
            assert!(ax.get(key).is_some(), "{key}");
        }
    }
    let boxes = v["boxes"].as_array().unwrap();
    assert_eq!(boxes.len(), 3);
    assert_eq!(boxes[1]["n"], 1);
    assert_eq!(boxes[1]["multiplicities"]["g"], 1);
}

#[test]
fn rotation_of_the_empty_box_is_trivial() {
    let a = apa("fib", "tau", 1);
    assert!(a.rotate(3, 0).unwrap().residual(&a.id(0).unwrap()) == 0.0);
    assert_eq!(a.word(0), Obj::empty(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn fib_insertion_is_unital_and_associative(n in 0usize..3, i in 0usize..3, k in 0usize..2) {
        let a = apa("fib", "tau", 3);
        let sk = &a.tube.ms.sk;
        let i = i.min(n);
        let eta = a.eta().unwrap();
        let id = a.id(n).unwrap();
        prop_assert!(sk.tensor(&id, &eta).then(&a.mult(i, 0, n).unwrap()).residual(&id) <= TOL);
        if n < 3 {
            let k = k.min(1);
            let lhs = sk.tensor(&id, &a.mult(k, 0, 1).unwrap()).then(&a.mult(i, 1, n).unwrap());
            let rhs = sk.tensor(&a.mult(i, 1, n).unwrap(), &a.id(0).unwrap()).then(&a.mult(i + k, 0, n + 1).unwrap());
            prop_assert!(lhs.residual(&rhs) <= TOL);
        }
    }
}

//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;

use tubecalc::apa::Apa;
use tubecalc::fusion::{Label, Obj};
use tubecalc::ladder::LadderObj;
use tubecalc::linalg::C64;
use tubecalc::module::{Endo, ModuleSystem};
use tubecalc::presets;
use tubecalc::trace::coherence::Check;
use tubecalc::trace::mult::MultMode;
use tubecalc::trace::Tube;
use tubecalc_tangle::{parse, run, typecheck, Pos, TangleError};

const TOL: f64 = 1e-9;

type Outcome = Result<(bool, String), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn regular(name: &str) -> ModuleSystem {
    ModuleSystem::regular(&presets::category(name).unwrap()).unwrap()
}

fn on_vec(base: &str) -> ModuleSystem {
    presets::module("vecz2-on-vec", &presets::category(base).unwrap()).unwrap()
}

fn all_systems() -> Vec<ModuleSystem> {
    let mut v: Vec<ModuleSystem> = presets::NAMES.iter().map(|n| regular(n)).collect();
    v.push(on_vec("vecz2-plus"));
    v.push(on_vec("vecz2-minus"));
    v
}

fn simples(ms: &ModuleSystem) -> Vec<Endo> {
    ms.e_labels.iter().map(|&l| ms.endo_word(&[l])).collect()
}

fn validation() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in presets::NAMES {
        let data = presets::category(name).map_err(|e| e.to_string())?;
        for (_, r) in data.report.entries() {
            worst = worst.max(r.value);
        }
    }
    Ok((worst <= TOL, format!("max pentagon/hexagon/snake residual {worst:.2e} over {} presets", presets::NAMES.len())))
}

fn idempotency() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut kronecker = true;
    for ms in [regular("fib"), regular("ising"), on_vec("vecz2-plus"), on_vec("vecz2-minus")] {
        let (e, _) = ms.build_idempotent().map_err(|err| err.to_string())?;
        let e2 = ms.ladder_compose(&e, &e).map_err(|err| err.to_string())?;
        worst = worst.max(ms.ladder_residual(&e2, &e));
        let k = ms.karoubi_split(&e).map_err(|err| err.to_string())?;
        for &s in &ms.m_labels {
            for &t in &ms.m_labels {
                let d = ms.karoubi_hom_dim(&k, &LadderObj::pair(&ms, s, t)).map_err(|err| err.to_string())?;
                kronecker &= d == usize::from(s == t);
            }
        }
    }
    Ok((worst <= TOL && kronecker, format!("e∘e residual {worst:.2e}; Karoubi hom dimensions Kronecker: {kronecker}")))
}

fn zigzags(tubes: &[Tube]) -> Outcome {
    let mut worst: f64 = 0.0;
    for t in tubes {
        for r in t.zigzag_residuals().map_err(|e| e.to_string())? {
            worst = worst.max(r);
        }
    }
    Ok((worst <= TOL, format!("max of four zigzags {worst:.2e} over {} module systems", tubes.len())))
}

/// `Σ_s dim Hom(x ▷ s, y(s))`, counted from fusion multiplicities.
fn carrier_count(ms: &ModuleSystem, y: &Endo, x: Label) -> u32 {
    let mut n = 0;
    for &s in &ms.m_labels {
        let ys = ms.object_map(y, s);
        for (&t, &m) in ms.m_labels.iter().zip(&ys) {
            n += ms.sk.n(x, s, t) * m;
        }
    }
    n
}

fn trace_oracle(tubes: &[Tube]) -> Outcome {
    let (mut objects, mut carriers, mut cases) = (true, true, 0);
    for t in tubes {
        let ms = &t.ms;
        for (l, y) in simples(ms).iter().enumerate() {
            let tr = t.trace(y).map_err(|e| e.to_string())?;
            if ms.regular {
                let want: Vec<u32> = ms.c_labels().map(|c| u32::from(c == l)).collect();
                objects &= tr.mult[..ms.nc()] == want[..];
            }
            let got = t.carrier_mult(y).map_err(|e| e.to_string())?;
            let want: Vec<u32> = ms.c_labels().map(|x| carrier_count(ms, y, x)).collect();
            carriers &= got == want;
            cases += 1;
        }
    }
    Ok((objects && carriers, format!("Tr(y) ≅ y: {objects}; carrier = counting oracle: {carriers} ({cases} cases)")))
}

fn multiplication(tubes: &[Tube]) -> Outcome {
    let (mut agree, mut assoc, mut unit): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for t in tubes {
        let mut ys = vec![Endo::identity()];
        ys.extend(simples(&t.ms));
        for a in &ys {
            unit = unit.max(t.unit_residual(a, MultMode::Pants).map_err(|e| e.to_string())?);
            for b in &ys {
                agree = agree.max(t.mult_agreement(a, b).map_err(|e| e.to_string())?);
                for c in &ys[1..] {
                    assoc = assoc.max(t.associativity_residual(a, b, c, MultMode::Pants).map_err(|e| e.to_string())?);
                }
            }
        }
    }
    let pass = agree <= TOL && assoc <= TOL && unit <= TOL;
    Ok((pass, format!("pants/mate/interchange {agree:.2e}, associativity {assoc:.2e}, unit {unit:.2e}")))
}

fn traciator(tubes: &[Tube]) -> Outcome {
    let (mut cocycle, mut hpt): (f64, f64) = (0.0, 0.0);
    for t in tubes {
        let ws: Vec<Obj> = t.ms.e_labels.iter().map(|&l| t.ms.simple(l)).collect();
        for a in &ws {
            for b in &ws {
                let tau = t.traciator(a, b).map_err(|e| e.to_string())?;
                hpt = hpt.max(tau.residual(&t.hpt_traciator(a, b).map_err(|e| e.to_string())?));
                for c in &ws {
                    cocycle = cocycle.max(t.cocycle_residual(a, b, c).map_err(|e| e.to_string())?);
                }
            }
        }
    }
    Ok((cocycle <= TOL && hpt <= TOL, format!("cocycle {cocycle:.2e}, mate formula {hpt:.2e}")))
}

fn coherence() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["fib", "ising"] {
        let t = Tube::new(regular(name)).map_err(|e| e.to_string())?;
        for c in Check::ALL {
            let r = t.coherence_report(c, TOL).map_err(|e| e.to_string())?;
            pass &= r.pass;
            parts.push(format!("{name}/{} {:.1e}", r.check, r.residual));
        }
    }
    Ok((pass, parts.join(", ")))
}

fn build_apa(name: &str, gen: &str, n_max: usize) -> Result<Apa, String> {
    let ms = regular(name);
    let x = ms.endofunctor_label(gen).map_err(|e| e.to_string())?;
    Apa::build(Tube::new(ms).map_err(|e| e.to_string())?, x, n_max).map_err(|e| e.to_string())
}

fn apa_axioms() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, gen) in [("fib", "tau"), ("ising", "sigma")] {
        let r = build_apa(name, gen, 3)?.check_axioms(TOL).map_err(|e| e.to_string())?;
        let worst = r.axioms.iter().map(|a| a.residual).fold(0.0, f64::max);
        pass &= r.all_pass();
        parts.push(format!("{name}/{gen} nine axioms max {worst:.1e}"));
    }
    // One R-symbol of the braiding the boxes are compared against.
    let apa = build_apa("fib", "tau", 2)?;
    let ms = &apa.tube.ms;
    let tau = ms.label("tau").map_err(|e| e.to_string())?;
    let bad = ms.sk.with_r_entry(tau, tau, ms.sk.unit(0), 0, 0, C64::new(0.3, 0.1));
    let r = apa.with_ambient(bad).check_axioms(TOL).map_err(|e| e.to_string())?;
    let res = |n: &str| r.axiom(n).map(|a| (a.pass, a.residual)).unwrap_or((false, f64::NAN));
    let (c8, c8r) = res("C8");
    let kept = ["C1", "C4", "C7"].iter().all(|n| res(n).0);
    pass &= !c8 && kept;
    parts.push(format!("fault: C8 {} ({c8r:.2e}), C1/C4/C7 pass: {kept}", if c8 { "pass" } else { "fails" }));
    Ok((pass, parts.join("; ")))
}

fn pairing(tubes: &[Tube]) -> Outcome {
    let (mut pass, mut worst, mut count) = (true, 1.0f64, 0);
    for t in tubes {
        for &y in &t.ms.e_labels {
            let p = t.pairing(y).map_err(|e| e.to_string())?;
            pass &= p.full_rank();
            worst = worst.max(p.condition);
            count += 1;
        }
    }
    Ok((pass, format!("full rank for {count} simples; max condition number {worst:.3}")))
}

const ISOTOPY: [(&str, &str, &str); 5] = [
    ("unit", "(eta * id[1]) ; mult(0,1,0)", "(id[1] * eta) ; mult(1,0,1)"),
    ("cap/cup naturality", "cap(1,1) ; rotate(1,1)", "rotate(1,3) ; cap(0,1)"),
    ("snake", "cup(0,1) ; cap(1,1)", "cup(1,1) ; cap(0,1)"),
    ("associativity", "(id[1] * mult(0,0,1)) ; mult(1,1,1)", "(mult(1,1,1) * id[0]) ; mult(1,0,2)"),
    ("rotation compatibility", "rotate(2,3) ; cap(1,1)", "cap(0,1)"),
];

fn tangles() -> Outcome {
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for (name, gen) in [("fib", "tau"), ("ising", "sigma")] {
        let apa = build_apa(name, gen, 3)?;
        let eval = |s: &str| run(s, &apa).map(|r| r.1).map_err(|e| format!("{s}: {e}"));
        let id1 = apa.id(1).map_err(|e| e.to_string())?;
        let unit = eval("(eta * id[1]) ; mult(0,1,0)")?.residual(&id1);
        let circle = eval("cup(0,1) ; cap(0,1)")?.residual(&id1.scale(C64::new(apa.witness.dim, 0.0)));
        worst = worst.max(unit).max(circle);
        for (_, a, b) in ISOTOPY {
            worst = worst.max(eval(a)?.residual(&eval(b)?));
        }
    }
    pass &= worst <= TOL;
    let syntax = parse("mult(0,1").err().and_then(|e| e.pos()) == Some(Pos { line: 1, col: 9 });
    let mismatch = match parse("eta ; cap(0,0)").map(|t| typecheck(&t)) {
        Ok(Err(TangleError::Mismatch { left, right, pos, .. })) => left == "eta" && right == "cap(0,0)" && pos.col == 5,
        _ => false,
    };
    pass &= syntax && mismatch;
    Ok((pass, format!("unit, circle and {} isotopy pairs max {worst:.2e}; positioned diagnostics: {}", ISOTOPY.len(), syntax && mismatch)))
}

fn main() -> ExitCode {
    let tubes: Vec<Tube> = all_systems().into_iter().map(|ms| Tube::new(ms).unwrap()).collect();
    let criteria: Vec<Criterion> = vec![
        ("data validation", Box::new(validation)),
        ("idempotency and Karoubi homs", Box::new(idempotency)),
        ("biadjunction zigzags", Box::new(|| zigzags(&tubes))),
        ("trace oracle", Box::new(|| trace_oracle(&tubes))),
        ("multiplication agreement", Box::new(|| multiplication(&tubes))),
        ("traciator", Box::new(|| traciator(&tubes))),
        ("coherence suite", Box::new(coherence)),
        ("APA axioms and fault injection", Box::new(apa_axioms)),
        ("pairing", Box::new(|| pairing(&tubes))),
        ("tangle evaluator", Box::new(tangles)),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        failures += usize::from(!pass);
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria pass at tolerance {TOL:e}", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

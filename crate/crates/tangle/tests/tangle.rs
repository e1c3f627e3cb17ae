use std::sync::OnceLock;

use proptest::prelude::*;
use tubecalc::apa::Apa;
use tubecalc::fusion::Morphism;
use tubecalc::linalg::C64;
use tubecalc::module::ModuleSystem;
use tubecalc::presets;
use tubecalc::trace::Tube;
use tubecalc_tangle::{parse, run, typecheck, Atom, Node, Pos, TangleError, Term, Typed};

const TOL: f64 = 1e-9;

fn build(name: &str, gen: &str) -> Apa {
    let ms = ModuleSystem::regular(&presets::category(name).unwrap()).unwrap();
    let x = ms.endofunctor_label(gen).unwrap();
    Apa::build(Tube::new(ms).unwrap(), x, 3).unwrap()
}

fn fib() -> &'static Apa {
    static A: OnceLock<Apa> = OnceLock::new();
    A.get_or_init(|| build("fib", "tau"))
}

fn ising() -> &'static Apa {
    static A: OnceLock<Apa> = OnceLock::new();
    A.get_or_init(|| build("ising", "sigma"))
}

fn residual(apa: &Apa, a: &str, b: &str) -> f64 {
    let (sa, ma) = run(a, apa).unwrap();
    let (sb, mb) = run(b, apa).unwrap();
    assert_eq!(sa, sb, "{a} vs {b}");
    ma.residual(&mb)
}

#[test]
fn parses_leaf_and_tree() {
    assert!(matches!(parse("eta").unwrap(), Term::Atom(Atom::Eta, Pos { line: 1, col: 1 })));
    let t = parse("(eta * id[1]) ; mult(0,1,1)").unwrap();
    let Term::Compose(lhs, rhs, _) = &t else { panic!("{t:?}") };
    assert!(matches!(**lhs, Term::Tensor(..)));
    assert!(matches!(**rhs, Term::Atom(Atom::Mult(0, 1, 1), _)));
}

#[test]
fn semicolon_binds_looser_than_star() {
    let t = parse("id[1] * id[2] ; braid(1,2)").unwrap();
    assert!(t.same_as(&parse("(id[1] * id[2]) ; braid(1,2)").unwrap()));
    assert!(!t.same_as(&parse("id[1] * (id[2] ; braid(1,2))").unwrap()));
}

#[test]
fn whitespace_and_comments() {
    let t = parse("# unit\n  cup( 0 , 1 )\n;cap(0,1)   # loop\n").unwrap();
    assert!(t.same_as(&parse("cup(0,1);cap(0,1)").unwrap()));
}

#[test]
fn unbalanced_paren_is_positioned() {
    let e = parse("mult(0,1").unwrap_err();
    assert!(matches!(e, TangleError::Syntax { .. }), "{e}");
    assert_eq!(e.pos(), Some(Pos { line: 1, col: 9 }));
    assert!(e.to_string().starts_with("syntax error at 1:9"));
}

#[test]
fn other_syntax_errors_are_positioned() {
    let cases = [
        ("eta ;", Pos { line: 1, col: 6 }),
        ("frob(1)", Pos { line: 1, col: 1 }),
        ("id[1] ; \n  cap(0,1) )", Pos { line: 2, col: 12 }),
        ("(eta", Pos { line: 1, col: 5 }),
        ("id(1)", Pos { line: 1, col: 3 }),
        ("eta & eta", Pos { line: 1, col: 5 }),
    ];
    for (src, pos) in cases {
        let e = parse(src).unwrap_err();
        assert_eq!(e.pos(), Some(pos), "{src}: {e}");
    }
}

#[test]
fn arity_errors() {
    let e = parse("cap(0)").unwrap_err();
    assert!(matches!(e, TangleError::Arity { expected: 2, found: 1, .. }), "{e}");
    let e = parse("x * mult(1,2)").unwrap_err();
    assert!(matches!(e, TangleError::Syntax { .. }), "{e}");
    let e = parse("eta * mult(1,2)").unwrap_err();
    assert_eq!(e.pos(), Some(Pos { line: 1, col: 7 }));
}

#[test]
fn signatures() {
    let sig = |s: &str| typecheck(&parse(s).unwrap()).unwrap().sig;
    let e = sig("eta");
    assert!(e.source.is_empty() && e.target == vec![0]);
    let c = sig("cup(0,1) ; cap(0,1)");
    assert_eq!((c.source_strands(), c.target_strands()), (1, 1));
    assert_eq!(sig("cap(1,2)").source, vec![4]);
    assert_eq!(sig("mult(1,2,1)").source, vec![1, 2]);
    assert_eq!(sig("mult(1,2,1)").target, vec![3]);
    assert_eq!(sig("braid(1,2)").target, vec![2, 1]);
}

#[test]
fn boundary_mismatch_names_both_sides() {
    let e = typecheck(&parse("eta ; cap(0,0)").unwrap()).unwrap_err();
    let TangleError::Mismatch { left, right, left_target, right_source, pos } = &e else { panic!("{e}") };
    assert_eq!((left.as_str(), right.as_str()), ("eta", "cap(0,0)"));
    assert_eq!((left_target.clone(), right_source.clone()), (vec![0], vec![2]));
    assert_eq!(*pos, Pos { line: 1, col: 5 });
    let msg = e.to_string();
    assert!(msg.contains("`eta`") && msg.contains("`cap(0,0)`"), "{msg}");
}

#[test]
fn offsets_are_range_checked() {
    for src in ["cap(2,1)", "cup(3,2)", "mult(2,0,1)"] {
        let e = typecheck(&parse(src).unwrap()).unwrap_err();
        assert!(matches!(e, TangleError::Range { .. }), "{src}: {e}");
    }
}

#[test]
fn n_max_is_enforced() {
    let e = run("cup(0,2)", fib()).unwrap_err();
    assert!(matches!(e, TangleError::NMax { requested: 4, n_max: 3 }), "{e}");
}

#[test]
fn unit_insertion_is_identity() {
    for apa in [fib(), ising()] {
        let (sig, m) = run("(eta * id[1]) ; mult(0,1,0)", apa).unwrap();
        assert_eq!((sig.source, sig.target), (vec![1], vec![1]));
        assert!(m.residual(&apa.id(1).unwrap()) <= TOL);
    }
}

#[test]
fn circle_is_quantum_dimension() {
    for apa in [fib(), ising()] {
        let d = apa.witness.dim;
        let (_, m) = run("cup(0,1) ; cap(0,1)", apa).unwrap();
        assert!(m.residual(&apa.id(1).unwrap().scale(C64::new(d, 0.0))) <= TOL);
    }
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((fib().witness.dim - golden).abs() < 1e-12);
    assert!((ising().witness.dim - 2f64.sqrt()).abs() < 1e-12);
}

/// Pairs of distinct terms for the same diagram, one or more per relation family.
const ISOTOPY_PAIRS: &[(&str, &str, &str)] = &[
    ("unit", "(eta * id[1]) ; mult(0,1,0)", "(id[1] * eta) ; mult(1,0,1)"),
    ("unit", "(id[2] * eta) ; mult(0,0,2)", "id[2]"),
    ("cap/cup naturality", "cap(1,1) ; rotate(1,1)", "rotate(1,3) ; cap(0,1)"),
    ("cap/cup naturality", "cup(1,1) ; rotate(1,3)", "rotate(1,1) ; cup(0,1)"),
    ("snake", "cup(0,1) ; cap(1,1)", "cup(1,1) ; cap(0,1)"),
    ("associativity", "(id[1] * mult(0,0,1)) ; mult(1,1,1)", "(mult(1,1,1) * id[0]) ; mult(1,0,2)"),
    ("associativity", "(id[1] * id[1]) * id[1] ; (mult(1,1,1) * id[1]) ; mult(2,1,2)", "id[1] * (id[1] * id[1]) ; (id[1] * mult(1,1,1)) ; mult(1,2,1)"),
    ("rotation compatibility", "rotate(2,3) ; cap(1,1)", "cap(0,1)"),
    ("rotation compatibility", "rotate(2,2)", "twist(2)"),
];

#[test]
fn isotopy_spot_pairs() {
    for apa in [fib(), ising()] {
        for (family, a, b) in ISOTOPY_PAIRS {
            let r = residual(apa, a, b);
            assert!(r <= TOL, "{family}: {a} vs {b}: {r:.3e}");
        }
    }
}

#[test]
fn full_rotation_is_not_the_identity() {
    // P[2] contains τ, whose twist is non-trivial.
    assert!(residual(fib(), "rotate(2,2)", "id[2]") > 0.1);
}

#[test]
fn snake_is_identity() {
    assert!(residual(fib(), "cup(0,1) ; cap(1,1)", "id[1]") <= TOL);
}

#[test]
fn substitution_is_a_congruence() {
    let apa = fib();
    for ctx in ["({}) * id[1] ; mult(1,1,1)", "({}) * id[2] ; mult(1,2,1) ; cap(0,1)", "{} ; cup(1,1) ; rotate(1,3)"] {
        let a = ctx.replace("{}", "id[1]");
        let b = ctx.replace("{}", "cup(0,1) ; cap(1,1)");
        assert!(residual(apa, &a, &b) <= TOL, "{ctx}");
    }
}

#[test]
fn print_parse_round_trip_evaluates_identically() {
    for (_, a, b) in ISOTOPY_PAIRS {
        for src in [a, b] {
            let t = parse(src).unwrap();
            let printed = t.to_string();
            let back = parse(&printed).unwrap();
            assert!(t.same_as(&back), "{src} -> {printed}");
            let m1 = run(src, fib()).unwrap().1;
            let m2 = run(&printed, fib()).unwrap().1;
            assert_eq!(m1.residual(&m2), 0.0);
        }
    }
}

/// Most strands crossing any horizontal slice of the term.
fn widest(t: &Typed) -> usize {
    let here = t.sig.source_strands().max(t.sig.target_strands());
    match &t.node {
        Node::Atom(_) => here,
        Node::Compose(a, b) | Node::Tensor(a, b) => here.max(widest(a)).max(widest(b)),
    }
}

/// Identity of the tensor product of the given boxes.
fn boxes_id(sizes: &[usize]) -> Morphism {
    let sk = &fib().tube.ms.sk;
    sizes.iter().fold(sk.identity(&fib().eta().unwrap().src), |acc, &n| sk.tensor(&acc, &fib().id(n).unwrap()))
}

fn arb_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (0usize..4).prop_map(Atom::Id),
        Just(Atom::Eta),
        (0usize..3, 0usize..3).prop_map(|(i, n)| Atom::Cap(i, n)),
        (0usize..3, 0usize..3).prop_map(|(i, n)| Atom::Cup(i, n)),
        (0usize..3, 0usize..3, 0usize..3).prop_map(|(i, j, n)| Atom::Mult(i, j, n)),
        (0usize..5, 0usize..4).prop_map(|(k, n)| Atom::Rotate(k, n)),
        (0usize..3, 0usize..3).prop_map(|(n, m)| Atom::Braid(n, m)),
        (0usize..4).prop_map(Atom::Twist),
    ]
}

fn arb_term() -> impl Strategy<Value = Term> {
    arb_atom().prop_map(|a| Term::Atom(a, Pos::default())).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Compose(Box::new(a), Box::new(b), Pos::default())),
            (inner.clone(), inner).prop_map(|(a, b)| Term::Tensor(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn printing_round_trips(t in arb_term()) {
        let printed = t.to_string();
        let back = parse(&printed).unwrap();
        prop_assert!(t.same_as(&back), "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn typecheck_agrees_with_evaluation(t in arb_term()) {
        if let Ok(typed) = typecheck(&t) {
            if tubecalc_tangle::max_box(&typed) <= 3 && widest(&typed) <= 4 {
                let m = tubecalc_tangle::evaluate(&typed, fib()).unwrap();
                let (src, tgt) = (boxes_id(&typed.sig.source), boxes_id(&typed.sig.target));
                prop_assert!(src.then(&m).then(&tgt).residual(&m) <= TOL);
            }
        }
    }
}

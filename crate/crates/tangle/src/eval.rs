use tubecalc::apa::Apa;
use tubecalc::fusion::Morphism;

use crate::check::{max_box, Node, Typed};
use crate::syntax::Atom;
use crate::TangleError;

fn atom(apa: &Apa, a: Atom) -> tubecalc::Result<Morphism> {
    match a {
        Atom::Id(n) => apa.id(n),
        Atom::Eta => apa.eta(),
        Atom::Cap(i, n) => apa.cap(i, n),
        Atom::Cup(i, n) => apa.cup(i, n),
        Atom::Mult(i, j, n) => apa.mult(i, j, n),
        Atom::Rotate(k, n) => apa.rotate(k, n),
        Atom::Braid(n, m) => apa.braid(n, m),
        Atom::Twist(n) => apa.twist(n),
    }
}

fn go(t: &Typed, apa: &Apa) -> tubecalc::Result<Morphism> {
    match &t.node {
        Node::Atom(a) => atom(apa, *a),
        Node::Compose(a, b) => Ok(go(a, apa)?.then(&go(b, apa)?)),
        Node::Tensor(a, b) => Ok(apa.tube.ms.sk.tensor(&go(a, apa)?, &go(b, apa)?)),
    }
}

/// `;` composes, `*` tensors; products of boxes always use the pants multiplication.
pub fn evaluate(t: &Typed, apa: &Apa) -> Result<Morphism, TangleError> {
    let need = max_box(t);
    if need > apa.n_max {
        return Err(TangleError::NMax { requested: need, n_max: apa.n_max });
    }
    Ok(go(t, apa)?)
}

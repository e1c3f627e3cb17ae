use std::fmt;

use crate::syntax::{Atom, Term};
use crate::TangleError;

/// Source and target as lists of box sizes; `[]` is the unit object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
}

impl Signature {
    pub fn source_strands(&self) -> usize {
        self.source.iter().sum()
    }

    pub fn target_strands(&self) -> usize {
        self.target.iter().sum()
    }

    /// Largest box touched on either side.
    pub fn max_box(&self) -> usize {
        self.source.iter().chain(&self.target).copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.source, self.target)
    }
}

/// A term with the signature of every node.
#[derive(Clone, Debug)]
pub struct Typed {
    pub sig: Signature,
    pub node: Node,
}

#[derive(Clone, Debug)]
pub enum Node {
    Atom(Atom),
    Compose(Box<Typed>, Box<Typed>),
    Tensor(Box<Typed>, Box<Typed>),
}

fn atom_sig(a: Atom) -> Result<Signature, String> {
    let sig = |s: &[usize], t: &[usize]| Signature { source: s.to_vec(), target: t.to_vec() };
    let in_range = |what: &str, i: usize, n: usize| {
        if i > n {
            Err(format!("{what} offset {i} out of range 0..={n}"))
        } else {
            Ok(())
        }
    };
    Ok(match a {
        Atom::Id(n) | Atom::Rotate(_, n) | Atom::Twist(n) => sig(&[n], &[n]),
        Atom::Eta => sig(&[], &[0]),
        Atom::Cap(i, n) => {
            in_range("cap", i, n)?;
            sig(&[n + 2], &[n])
        }
        Atom::Cup(i, n) => {
            in_range("cup", i, n)?;
            sig(&[n], &[n + 2])
        }
        Atom::Mult(i, j, n) => {
            in_range("mult", i, n)?;
            sig(&[n, j], &[n + j])
        }
        Atom::Braid(n, m) => sig(&[n, m], &[m, n]),
    })
}

pub fn typecheck(t: &Term) -> Result<Typed, TangleError> {
    match t {
        Term::Atom(a, pos) => {
            let sig = atom_sig(*a).map_err(|msg| TangleError::Range { pos: *pos, atom: a.to_string(), msg })?;
            Ok(Typed { sig, node: Node::Atom(*a) })
        }
        Term::Compose(a, b, pos) => {
            let (ta, tb) = (typecheck(a)?, typecheck(b)?);
            if ta.sig.target != tb.sig.source {
                return Err(TangleError::Mismatch {
                    pos: *pos,
                    left: a.to_string(),
                    left_target: ta.sig.target,
                    right: b.to_string(),
                    right_source: tb.sig.source,
                });
            }
            let sig = Signature { source: ta.sig.source.clone(), target: tb.sig.target.clone() };
            Ok(Typed { sig, node: Node::Compose(Box::new(ta), Box::new(tb)) })
        }
        Term::Tensor(a, b) => {
            let (ta, tb) = (typecheck(a)?, typecheck(b)?);
            let sig = Signature {
                source: [ta.sig.source.clone(), tb.sig.source.clone()].concat(),
                target: [ta.sig.target.clone(), tb.sig.target.clone()].concat(),
            };
            Ok(Typed { sig, node: Node::Tensor(Box::new(ta), Box::new(tb)) })
        }
    }
}

/// Largest box any node of the term touches.
pub fn max_box(t: &Typed) -> usize {
    let inner = match &t.node {
        Node::Atom(_) => 0,
        Node::Compose(a, b) | Node::Tensor(a, b) => max_box(a).max(max_box(b)),
    };
    t.sig.max_box().max(inner)
}

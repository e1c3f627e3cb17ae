use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Id(usize),
    Eta,
    Cap(usize, usize),
    Cup(usize, usize),
    Mult(usize, usize, usize),
    Rotate(usize, usize),
    Braid(usize, usize),
    Twist(usize),
}

impl Atom {
    /// Keyword and number of integer arguments.
    pub(crate) fn arity(name: &str) -> Option<usize> {
        Some(match name {
            "id" | "twist" => 1,
            "eta" => 0,
            "cap" | "cup" | "rotate" | "braid" => 2,
            "mult" => 3,
            _ => return None,
        })
    }

    pub(crate) fn from_parts(name: &str, a: &[usize]) -> Atom {
        match name {
            "id" => Atom::Id(a[0]),
            "eta" => Atom::Eta,
            "cap" => Atom::Cap(a[0], a[1]),
            "cup" => Atom::Cup(a[0], a[1]),
            "mult" => Atom::Mult(a[0], a[1], a[2]),
            "rotate" => Atom::Rotate(a[0], a[1]),
            "braid" => Atom::Braid(a[0], a[1]),
            "twist" => Atom::Twist(a[0]),
            _ => unreachable!("unknown atom {name}"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Id(n) => write!(f, "id[{n}]"),
            Atom::Eta => write!(f, "eta"),
            Atom::Cap(i, n) => write!(f, "cap({i},{n})"),
            Atom::Cup(i, n) => write!(f, "cup({i},{n})"),
            Atom::Mult(i, j, n) => write!(f, "mult({i},{j},{n})"),
            Atom::Rotate(k, n) => write!(f, "rotate({k},{n})"),
            Atom::Braid(n, m) => write!(f, "braid({n},{m})"),
            Atom::Twist(n) => write!(f, "twist({n})"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Term {
    Atom(Atom, Pos),
    /// `a ; b`: `a` first.
    Compose(Box<Term>, Box<Term>, Pos),
    /// `a * b`: boxes of `a` followed by boxes of `b`.
    Tensor(Box<Term>, Box<Term>),
}

impl Term {
    pub fn pos(&self) -> Pos {
        match self {
            Term::Atom(_, p) => *p,
            Term::Compose(a, _, _) | Term::Tensor(a, _) => a.pos(),
        }
    }

    /// Structural equality, ignoring positions.
    pub fn same_as(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Atom(a, _), Term::Atom(b, _)) => a == b,
            (Term::Compose(a, b, _), Term::Compose(c, d, _)) | (Term::Tensor(a, b), Term::Tensor(c, d)) => a.same_as(c) && b.same_as(d),
            _ => false,
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree;
/// both operators associate to the left.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a, _) => write!(f, "{a}"),
            Term::Compose(a, b, _) => match **b {
                Term::Compose(..) => write!(f, "{a} ; ({b})"),
                _ => write!(f, "{a} ; {b}"),
            },
            Term::Tensor(a, b) => {
                match **a {
                    Term::Compose(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                match **b {
                    Term::Atom(..) => write!(f, " * {b}"),
                    _ => write!(f, " * ({b})"),
                }
            }
        }
    }
}

//! A small language of tangle terms over the generators of an anchored
//! planar algebra, with a boundary typechecker and an evaluator to
//! morphisms between boxes.
//!
//! ```text
//! term := atom | term ";" term | term "*" term | "(" term ")"
//! atom := id[n] | eta | cap(i,n) | cup(i,n) | mult(i,j,n) | rotate(k,n)
//!       | braid(n,m) | twist(n)
//! ```
//!
//! `;` binds looser than `*` and `#` starts a line comment.

mod check;
mod eval;
mod parse;
mod syntax;

pub use check::{max_box, typecheck, Node, Signature, Typed};
pub use eval::evaluate;
pub use parse::parse;
pub use syntax::{Atom, Pos, Term};

use thiserror::Error;
use tubecalc::apa::Apa;
use tubecalc::fusion::Morphism;

#[derive(Debug, Error)]
pub enum TangleError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("arity error at {pos}: '{name}' takes {expected} argument(s), found {found}")]
    Arity { pos: Pos, name: String, expected: usize, found: usize },
    #[error("range error at {pos}: {atom}: {msg}")]
    Range { pos: Pos, atom: String, msg: String },
    #[error("boundary mismatch at {pos}: `{left}` has target {left_target:?} but `{right}` has source {right_source:?}")]
    Mismatch { pos: Pos, left: String, left_target: Vec<usize>, right: String, right_source: Vec<usize> },
    #[error("term needs box P[{requested}] but n_max is {n_max}")]
    NMax { requested: usize, n_max: usize },
    #[error(transparent)]
    Eval(#[from] tubecalc::Error),
}

impl TangleError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            TangleError::Syntax { pos, .. }
            | TangleError::Arity { pos, .. }
            | TangleError::Range { pos, .. }
            | TangleError::Mismatch { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

/// Parse, typecheck and evaluate in one step.
pub fn run(text: &str, apa: &Apa) -> Result<(Signature, Morphism), TangleError> {
    let typed = typecheck(&parse(text)?)?;
    let m = evaluate(&typed, apa)?;
    Ok((typed.sig, m))
}

use crate::syntax::{Atom, Pos, Term};
use crate::TangleError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Num(n) => format!("'{n}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, TangleError> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut c = 0;
        while c < chars.len() {
            let pos = Pos { line: l + 1, col: c + 1 };
            let ch = chars[c];
            if ch == '#' {
                break;
            } else if ch.is_whitespace() {
                c += 1;
            } else if ch.is_ascii_alphabetic() {
                let start = c;
                while c < chars.len() && (chars[c].is_ascii_alphanumeric() || chars[c] == '_') {
                    c += 1;
                }
                out.push((Tok::Ident(chars[start..c].iter().collect()), pos));
            } else if ch.is_ascii_digit() {
                let start = c;
                while c < chars.len() && chars[c].is_ascii_digit() {
                    c += 1;
                }
                let s: String = chars[start..c].iter().collect();
                let n = s.parse().map_err(|_| TangleError::Syntax { pos, msg: format!("integer '{s}' out of range") })?;
                out.push((Tok::Num(n), pos));
            } else if "()[],;*".contains(ch) {
                out.push((Tok::Sym(ch), pos));
                c += 1;
            } else {
                return Err(TangleError::Syntax { pos, msg: format!("unexpected character '{ch}'") });
            }
        }
    }
    let end = match text.lines().enumerate().last() {
        Some((l, line)) => Pos { line: l + 1, col: line.chars().count() + 1 },
        None => Pos { line: 1, col: 1 },
    };
    out.push((Tok::Eof, end));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, sym: char, context: &str) -> Result<Pos, TangleError> {
        match self.next() {
            (Tok::Sym(c), p) if c == sym => Ok(p),
            (t, pos) => Err(TangleError::Syntax { pos, msg: format!("expected '{sym}' {context}, found {}", t.describe()) }),
        }
    }

    fn compose(&mut self) -> Result<Term, TangleError> {
        let mut lhs = self.tensor()?;
        while let (Tok::Sym(';'), pos) = self.peek().clone() {
            self.next();
            let rhs = self.tensor()?;
            lhs = Term::Compose(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<Term, TangleError> {
        let mut lhs = self.primary()?;
        while self.peek().0 == Tok::Sym('*') {
            self.next();
            let rhs = self.primary()?;
            lhs = Term::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Term, TangleError> {
        match self.next() {
            (Tok::Sym('('), _) => {
                let t = self.compose()?;
                self.expect(')', "to close parenthesis")?;
                Ok(t)
            }
            (Tok::Ident(name), pos) => self.atom(name, pos),
            (t, pos) => Err(TangleError::Syntax { pos, msg: format!("expected a term, found {}", t.describe()) }),
        }
    }

    fn atom(&mut self, name: String, pos: Pos) -> Result<Term, TangleError> {
        let Some(arity) = Atom::arity(&name) else {
            return Err(TangleError::Syntax { pos, msg: format!("unknown generator '{name}'") });
        };
        let args = if name == "id" {
            self.expect('[', "after 'id'")?;
            let n = self.number()?;
            self.expect(']', "after box size")?;
            vec![n]
        } else if self.peek().0 == Tok::Sym('(') {
            self.next();
            let mut args = vec![self.number()?];
            loop {
                match self.next() {
                    (Tok::Sym(','), _) => args.push(self.number()?),
                    (Tok::Sym(')'), _) => break,
                    (t, pos) => return Err(TangleError::Syntax { pos, msg: format!("expected ',' or ')', found {}", t.describe()) }),
                }
            }
            args
        } else {
            Vec::new()
        };
        if args.len() != arity {
            return Err(TangleError::Arity { pos, name, expected: arity, found: args.len() });
        }
        Ok(Term::Atom(Atom::from_parts(&name, &args), pos))
    }

    fn number(&mut self) -> Result<usize, TangleError> {
        match self.next() {
            (Tok::Num(n), _) => Ok(n),
            (t, pos) => Err(TangleError::Syntax { pos, msg: format!("expected an integer, found {}", t.describe()) }),
        }
    }
}

pub fn parse(text: &str) -> Result<Term, TangleError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let t = p.compose()?;
    match p.next() {
        (Tok::Eof, _) => Ok(t),
        (t, pos) => Err(TangleError::Syntax { pos, msg: format!("expected ';', '*' or end of input, found {}", t.describe()) }),
    }
}

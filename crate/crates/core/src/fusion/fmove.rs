//! F-moves on vectors of arbitrarily bracketed fusion trees.
//!
//! This is a second, independent route to recoupling: the tensor machinery in
//! `tensor.rs` only ever uses left-nested trees, while here trees of any shape
//! are rewritten one associativity site at a time.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

use super::skeleton::{Label, Skeleton};

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Shape {
    Leaf(Label),
    /// `(left, right -> charge; vertex)`
    Node(Box<Shape>, Box<Shape>, Label, usize),
}

impl Shape {
    pub fn charge(&self) -> Label {
        match self {
            Shape::Leaf(l) => *l,
            Shape::Node(_, _, c, _) => *c,
        }
    }

    pub fn node(l: Shape, r: Shape, c: Label, v: usize) -> Shape {
        Shape::Node(Box::new(l), Box::new(r), c, v)
    }

    pub fn leaves(&self) -> Vec<Label> {
        match self {
            Shape::Leaf(l) => vec![*l],
            Shape::Node(a, b, _, _) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }
}

/// A formal linear combination of trees.
pub type TreeVec = BTreeMap<Shape, C64>;

/// Path from the root: `false` = left child, `true` = right child.
pub type Site = Vec<bool>;

fn at<'a>(s: &'a Shape, path: &[bool]) -> Option<&'a Shape> {
    match (path.split_first(), s) {
        (None, _) => Some(s),
        (Some((&dir, rest)), Shape::Node(l, r, _, _)) => at(if dir { r } else { l }, rest),
        _ => None,
    }
}

fn replace(s: &Shape, path: &[bool], new: Shape) -> Shape {
    match (path.split_first(), s) {
        (None, _) => new,
        (Some((&dir, rest)), Shape::Node(l, r, c, v)) => {
            if dir {
                Shape::node((**l).clone(), replace(r, rest, new), *c, *v)
            } else {
                Shape::node(replace(l, rest, new), (**r).clone(), *c, *v)
            }
        }
        _ => unreachable!("path validated before replace"),
    }
}

fn add(out: &mut TreeVec, t: Shape, z: C64) {
    if z == ZERO {
        return;
    }
    *out.entry(t).or_insert(ZERO) += z;
}

impl Skeleton {
    /// Rewrites `((A B -> e) C -> d)` at `site` into `(A (B C -> f) -> d)`.
    pub fn f_move(&self, v: &TreeVec, site: &[bool]) -> Result<TreeVec> {
        let mut out = TreeVec::new();
        for (t, &z) in v {
            let node = at(t, site).ok_or_else(|| Error::Invalid("site outside the tree".into()))?;
            let Shape::Node(left, cc, d, be) = node else {
                return Err(Error::Invalid("site is a leaf".into()));
            };
            let Shape::Node(aa, bb, e, al) = &**left else {
                return Err(Error::Invalid("site has no left-associated pair".into()));
            };
            let (a, b, c) = (aa.charge(), bb.charge(), cc.charge());
            let Some(block) = self.fblock(a, b, c, *d) else { continue };
            let Some(i) = block.row((*e, *al, *be)) else { continue };
            for (j, &(f, mu, nu)) in block.cols.iter().enumerate() {
                let new = Shape::node((**aa).clone(), Shape::node((**bb).clone(), (**cc).clone(), f, mu), *d, nu);
                add(&mut out, replace(t, site, new), z * block.mat[(i, j)]);
            }
        }
        Ok(out)
    }

    /// Inverse move `(A (B C -> f) -> d)` into `((A B -> e) C -> d)` at `site`.
    pub fn f_move_inv(&self, v: &TreeVec, site: &[bool]) -> Result<TreeVec> {
        let mut out = TreeVec::new();
        for (t, &z) in v {
            let node = at(t, site).ok_or_else(|| Error::Invalid("site outside the tree".into()))?;
            let Shape::Node(aa, right, d, nu) = node else {
                return Err(Error::Invalid("site is a leaf".into()));
            };
            let Shape::Node(bb, cc, f, mu) = &**right else {
                return Err(Error::Invalid("site has no right-associated pair".into()));
            };
            let (a, b, c) = (aa.charge(), bb.charge(), cc.charge());
            let Some(block) = self.fblock(a, b, c, *d) else { continue };
            let Some(j) = block.col((*f, *mu, *nu)) else { continue };
            for (i, &(e, al, be)) in block.rows.iter().enumerate() {
                let new = Shape::node(Shape::node((**aa).clone(), (**bb).clone(), e, al), (**cc).clone(), *d, be);
                add(&mut out, replace(t, site, new), z * block.inv[(j, i)]);
            }
        }
        Ok(out)
    }

    /// All left-nested trees on `labels` with total charge `top`.
    pub fn left_nested_trees(&self, labels: &[Label], top: Label) -> Vec<Shape> {
        let mut layer = vec![Shape::Leaf(labels[0])];
        for &l in &labels[1..] {
            let mut next = Vec::new();
            for t in &layer {
                for c in 0..self.len() {
                    for v in 0..self.n(t.charge(), l, c) as usize {
                        next.push(Shape::node(t.clone(), Shape::Leaf(l), c, v));
                    }
                }
            }
            layer = next;
        }
        layer.into_iter().filter(|t| t.charge() == top).collect()
    }

    /// Both pentagon paths from a left-nested 4-leaf tree to right-nested
    /// trees; returns the max coefficient difference.
    pub fn pentagon_paths(&self, start: &Shape) -> Result<f64> {
        let v: TreeVec = [(start.clone(), ONE)].into_iter().collect();
        // ((ab)c)d -> (ab)(cd) -> a(b(cd))
        let p1 = self.f_move(&self.f_move(&v, &[])?, &[])?;
        // ((ab)c)d -> (a(bc))d -> a((bc)d) -> a(b(cd))
        let q = self.f_move(&v, &[false])?;
        let q = self.f_move(&q, &[])?;
        let p2 = self.f_move(&q, &[true])?;
        Ok(tree_vec_diff(&p1, &p2))
    }
}

pub fn tree_vec_diff(a: &TreeVec, b: &TreeVec) -> f64 {
    let mut m: f64 = 0.0;
    for (k, z) in a {
        m = m.max((z - b.get(k).copied().unwrap_or(ZERO)).norm());
    }
    for (k, z) in b {
        if !a.contains_key(k) {
            m = m.max(z.norm());
        }
    }
    m
}

//! Elementary morphisms: trivalent vertices, (co)evaluations, braidings,
//! twists and quantum dimensions.

use crate::error::{Error, Result};
use crate::linalg::{inverse, C64, ONE, ZERO};

use super::basis::{Obj, Slot};
use super::morphism::{compose, Morphism};
use super::skeleton::{Label, Skeleton};

/// Bases of `V(a⊗b -> c)` and `V(c -> a⊗b)` dual under composition.
#[derive(Clone, Debug)]
pub struct DualBasisPair {
    pub space: (Label, Label, Label),
    pub basis: Vec<Morphism>,
    pub dual: Vec<Morphism>,
}

impl Skeleton {
    /// Fusion vertex `[a, b] -> [c]` with multiplicity index `mu`.
    pub fn vertex(&self, a: Label, b: Label, c: Label, mu: usize) -> Morphism {
        let src = Obj::word(self, &[a, b]);
        let tgt = Obj::simple(self, c);
        let mut m = self.zero(&src, &tgt);
        if let Some(bl) = m.blocks.get_mut(&c) {
            if mu < bl.ncols() {
                bl[(0, mu)] = ONE;
            }
        }
        m
    }

    /// Splitting vertex `[c] -> [a, b]`, dual to [`Skeleton::vertex`].
    pub fn splitting(&self, a: Label, b: Label, c: Label, mu: usize) -> Morphism {
        let src = Obj::simple(self, c);
        let tgt = Obj::word(self, &[a, b]);
        let mut m = self.zero(&src, &tgt);
        if let Some(bl) = m.blocks.get_mut(&c) {
            if mu < bl.nrows() {
                bl[(mu, 0)] = ONE;
            }
        }
        m
    }

    pub fn dual_basis(&self, a: Label, b: Label, c: Label) -> Result<DualBasisPair> {
        let n = self.n(a, b, c) as usize;
        if n == 0 {
            return Err(Error::ZeroSpace(format!("V({}⊗{} -> {})", self.name(a), self.name(b), self.name(c))));
        }
        let basis: Vec<Morphism> = (0..n).map(|mu| self.vertex(a, b, c, mu)).collect();
        Ok(DualBasisPair { space: (a, b, c), dual: self.dual_of(&basis)?, basis })
    }

    /// Dual family of an arbitrary basis of a vertex space `[a,b] -> [c]`,
    /// found by inverting the composition Gram matrix against splittings.
    pub fn dual_of(&self, basis: &[Morphism]) -> Result<Vec<Morphism>> {
        let Some(first) = basis.first() else { return Ok(Vec::new()) };
        let c = first.tgt.slots[0].labels().next().expect("simple target");
        let (a, b) = {
            let mut it = first.src.slots.iter().map(|s| s.labels().next().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        };
        let n = basis.len();
        let split: Vec<Morphism> = (0..n).map(|mu| self.splitting(a, b, c, mu)).collect();
        let mut gram = crate::linalg::CMat::zeros(n, n);
        for (i, bi) in basis.iter().enumerate() {
            for (j, sj) in split.iter().enumerate() {
                gram[(i, j)] = compose(sj, bi)?.blocks[&c][(0, 0)];
            }
        }
        let ginv = inverse(&gram).ok_or(Error::Singular { kind: "dual-basis Gram", at: format!("({a},{b};{c})") })?;
        Ok((0..n)
            .map(|j| {
                let mut acc = self.zero(&split[0].src, &split[0].tgt);
                for (k, sk_) in split.iter().enumerate() {
                    acc = acc.add(&sk_.scale(ginv[(k, j)]));
                }
                acc
            })
            .collect())
    }

    fn require_dual(&self, a: Label) -> Result<Label> {
        self.dual(a).ok_or_else(|| Error::Invalid(format!("{} has no dual", self.name(a))))
    }

    /// `ev_a : [a*, a] -> []`, coefficient 1 on the unique tree.
    pub fn ev(&self, a: Label) -> Result<Morphism> {
        let ad = self.require_dual(a)?;
        let src = Obj::word(self, &[ad, a]);
        let tgt = Obj::empty(self.color(a).1);
        let u = self.unit(self.color(a).1);
        let mut m = self.zero(&src, &tgt);
        m.blocks.get_mut(&u).unwrap()[(0, 0)] = ONE;
        Ok(m)
    }

    /// Scalar of the left snake `(id_a ⊗ ev_a)(coev⊗id_a)` when coev has coefficient 1.
    fn snake_factor(&self, a: Label) -> Result<C64> {
        let ad = self.require_dual(a)?;
        let ul = self.unit(self.color(a).0);
        let ur = self.unit(self.color(a).1);
        // Pair tree (a, (a* a -> 1), (a, 1 -> a)) against left tree ((a a* -> 1)(1 a -> a)).
        Ok(self.finv((a, ad, a, a), (ur, 0, 0), (ul, 0, 0)))
    }

    /// `coev_a : [] -> [a, a*]`, normalized so that the left snakes hold.
    pub fn coev(&self, a: Label) -> Result<Morphism> {
        let ad = self.require_dual(a)?;
        let src = Obj::empty(self.color(a).0);
        let tgt = Obj::word(self, &[a, ad]);
        let u = self.unit(self.color(a).0);
        let mut m = self.zero(&src, &tgt);
        m.blocks.get_mut(&u).unwrap()[(0, 0)] = ONE / self.snake_factor(a)?;
        Ok(m)
    }

    /// Right evaluation `[a, a*] -> []` = `ev_{a*} ∘ (p_a ⊗ id)`.
    pub fn ev_right(&self, a: Label) -> Result<Morphism> {
        let ad = self.require_dual(a)?;
        Ok(self.ev(ad)?.scale(self.pivotal(a)))
    }

    /// Right coevaluation `[] -> [a*, a]` = `(id ⊗ p_a^{-1}) ∘ coev_{a*}`.
    pub fn coev_right(&self, a: Label) -> Result<Morphism> {
        let ad = self.require_dual(a)?;
        Ok(self.coev(ad)?.scale(ONE / self.pivotal(a)))
    }

    /// `(ev_a, coev_a, ev~_a, coev~_a)`.
    pub fn ev_coev(&self, a: Label) -> Result<(Morphism, Morphism, Morphism, Morphism)> {
        Ok((self.ev(a)?, self.coev(a)?, self.ev_right(a)?, self.coev_right(a)?))
    }

    /// Quantum dimension: the circle `ev~_a ∘ coev_a`.
    pub fn qdim(&self, a: Label) -> Result<C64> {
        let circle = compose(&self.coev(a)?, &self.ev_right(a)?)?;
        let u = self.unit(self.color(a).0);
        Ok(circle.blocks[&u][(0, 0)])
    }

    /// Braiding of two slots `[x, y] -> [y, x]`; copies are spectators.
    pub fn braid_slots(&self, x: &Slot, y: &Slot) -> Result<Morphism> {
        self.braid_slots_with(x, y, false)
    }

    /// Inverse braiding `[y, x] -> [x, y]`, i.e. `β_{x,y}^{-1}`.
    pub fn braid_slots_inv(&self, x: &Slot, y: &Slot) -> Result<Morphism> {
        self.braid_slots_with(x, y, true)
    }

    fn braid_slots_with(&self, x: &Slot, y: &Slot, inv: bool) -> Result<Morphism> {
        if !self.has_braiding() {
            return Err(Error::NoBraiding);
        }
        let xy = Obj::from_slots(self, vec![x.clone(), y.clone()]);
        let yx = Obj::from_slots(self, vec![y.clone(), x.clone()]);
        let (src, tgt) = if inv { (yx.clone(), xy.clone()) } else { (xy.clone(), yx.clone()) };
        let bxy = self.basis(&xy);
        let byx = self.basis(&yx);
        let mut m = self.zero(&src, &tgt);
        for (c, blk) in m.blocks.iter_mut() {
            for (col, t) in bxy.trees(*c).iter().enumerate() {
                let (a, ca) = t.leaves[0];
                let (b, cb) = t.leaves[1];
                let mu = t.vtx[1] as usize;
                let r = self.rblock(a, b, *c).ok_or(Error::NoBraiding)?;
                let rm = if inv { inverse(r).ok_or(Error::NoBraiding)? } else { r.clone() };
                for mu2 in 0..rm.nrows() {
                    let t2 = super::basis::Tree {
                        leaves: vec![(b, cb), (a, ca)],
                        charges: vec![b, *c],
                        vtx: vec![0, mu2 as u32],
                        top: *c,
                    };
                    let row = byx.index(&t2).unwrap();
                    if inv {
                        // (R^{-1})[nu, mu2]: [b,a] tree mu2 -> [a,b] tree nu
                        blk[(col, row)] = rm[(mu, mu2)];
                    } else {
                        blk[(row, col)] = rm[(mu2, mu)];
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn braiding(&self, a: Label, b: Label) -> Result<Morphism> {
        self.braid_slots(&Slot::simple(self, a), &Slot::simple(self, b))
    }

    /// Braiding of whole words `A ⊗ B -> B ⊗ A` (or its inverse `B ⊗ A -> A ⊗ B`)
    /// assembled from adjacent slot crossings.
    pub fn braid_words(&self, a: &Obj, b: &Obj, inv: bool) -> Result<Morphism> {
        if a.is_empty() || b.is_empty() {
            let w = if inv { b.concat(a) } else { a.concat(b) };
            return Ok(self.identity(&w));
        }
        // Move each slot of A (last first) across all of B.
        let mut cur = a.concat(b);
        let mut acc = self.identity(&cur);
        let na = a.len();
        let nb = b.len();
        for i in (0..na).rev() {
            for j in 0..nb {
                let pos = i + j;
                let x = cur.slots[pos].clone();
                let y = cur.slots[pos + 1].clone();
                let pre = cur.sub(0, pos, self);
                let post = cur.sub(pos + 2, cur.len(), self);
                let s = self.braid_slots(&x, &y)?;
                let step = self.whisker(&pre, &s, &post);
                cur = step.tgt.clone();
                acc = acc.then(&step);
            }
        }
        if inv {
            let blocks = acc
                .blocks
                .iter()
                .map(|(c, m)| (*c, inverse(m).expect("braiding is invertible")))
                .collect();
            return Ok(Morphism { src: acc.tgt, tgt: acc.src, blocks });
        }
        Ok(acc)
    }

    /// Twist via `(id_a ⊗ ev~_a)(β_{a,a} ⊗ id_{a*})(id_a ⊗ coev_a)`.
    pub fn twist(&self, a: Label) -> Result<C64> {
        let oa = Obj::simple(self, a);
        let step1 = self.tensor(&self.identity(&oa), &self.coev(a)?);
        let step2 = self.tensor(&self.braiding(a, a)?, &self.identity(&Obj::simple(self, self.require_dual(a)?)));
        let step3 = self.tensor(&self.identity(&oa), &self.ev_right(a)?);
        let m = step1.then(&step2).then(&step3);
        Ok(m.blocks[&a][(0, 0)])
    }

    /// `θ_a = d_a^{-1} Σ_c d_c tr R^{aa}_c`, an independent route to the twist.
    pub fn twist_from_r(&self, a: Label) -> Result<C64> {
        let mut acc = ZERO;
        for cc in 0..self.len() {
            if let Some(r) = self.rblock(a, a, cc) {
                acc += self.qdim(cc)? * r.trace();
            }
        }
        Ok(acc / self.qdim(a)?)
    }

    /// `[1, w...] -> [w...]` removing a leading unit slot.
    pub fn unit_absorb_left(&self, w: &Obj) -> Morphism {
        let u = self.unit(w.color.0);
        let src = Obj::simple(self, u).concat(w);
        self.relabel(&src, w, |t| {
            let mut t2 = t.clone();
            t2.leaves.remove(0);
            t2.charges.remove(0);
            t2.vtx.remove(0);
            if !t2.vtx.is_empty() {
                t2.vtx[0] = 0;
            }
            t2
        })
    }

    /// `[w..., 1] -> [w...]` removing a trailing unit slot.
    pub fn unit_absorb_right(&self, w: &Obj) -> Morphism {
        let u = self.unit(w.color.1);
        let src = w.concat(&Obj::simple(self, u));
        self.relabel(&src, w, |t| t.prefix(t.leaves.len() - 1, self.unit(w.color.0)))
    }

    /// The morphism sending each tree of `src` to the tree `map(t)` of `tgt`.
    fn relabel(&self, src: &Obj, tgt: &Obj, map: impl Fn(&super::basis::Tree) -> super::basis::Tree) -> Morphism {
        let bs = self.basis(src);
        let bt = self.basis(tgt);
        let mut m = self.zero(src, tgt);
        for (c, blk) in m.blocks.iter_mut() {
            for (j, t) in bs.trees(*c).iter().enumerate() {
                let t2 = map(t);
                let i = bt.index(&t2).expect("relabelled tree exists");
                blk[(i, j)] = ONE;
            }
        }
        m
    }

    /// Inverse of a morphism whose blocks are all square and invertible.
    pub fn invert(&self, m: &Morphism) -> Result<Morphism> {
        let mut blocks = std::collections::BTreeMap::new();
        for (c, b) in &m.blocks {
            blocks.insert(*c, inverse(b).ok_or(Error::Singular { kind: "morphism", at: self.name(*c).to_string() })?);
        }
        Ok(Morphism { src: m.tgt.clone(), tgt: m.src.clone(), blocks })
    }
}

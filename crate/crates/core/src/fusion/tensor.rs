//! Tensor product of morphisms.
//!
//! For words `A`, `B` the "pair basis" of `A ⊗ B` at charge `c` consists of a
//! tree of `A` with charge `a`, a tree of `B` with charge `b` and a vertex
//! `(a, b -> c; mu)`. Tensoring is block-diagonal in pair bases; the change
//! matrix `P` (rows: pair trees, columns: left-nested trees) is built by peeling
//! the last slot of `B` with one inverse F-move at a time.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::linalg::{inverse, CMat, ONE};

use super::basis::Obj;
use super::morphism::Morphism;
use super::skeleton::{Label, Skeleton};

/// `(a, b, mu, index of A-tree, index of B-tree)`.
pub type PairKey = (Label, Label, usize, usize, usize);

#[derive(Debug)]
pub struct PairBlock {
    pub pairs: Vec<PairKey>,
    pub index: HashMap<PairKey, usize>,
    pub p: CMat,
    pub pinv: CMat,
}

#[derive(Debug)]
pub struct PairChange {
    pub per_charge: BTreeMap<Label, PairBlock>,
}

impl Skeleton {
    fn pair_keys(&self, a_obj: &Obj, b_obj: &Obj, c: Label) -> Vec<PairKey> {
        let ba = self.basis(a_obj);
        let bb = self.basis(b_obj);
        let mut keys = Vec::new();
        for a in ba.charges() {
            for b in bb.charges() {
                for mu in 0..self.n(a, b, c) as usize {
                    for i in 0..ba.dim(a) {
                        for k in 0..bb.dim(b) {
                            keys.push((a, b, mu, i, k));
                        }
                    }
                }
            }
        }
        keys
    }

    pub fn pair_change(&self, a_obj: &Obj, b_obj: &Obj) -> Arc<PairChange> {
        let key = (a_obj.clone(), b_obj.clone());
        if let Some(p) = self.cache.pairs.lock().unwrap().get(&key) {
            return p.clone();
        }
        let pc = Arc::new(self.compute_pair_change(a_obj, b_obj));
        self.cache.pairs.lock().unwrap().insert(key, pc.clone());
        pc
    }

    fn compute_pair_change(&self, a_obj: &Obj, b_obj: &Obj) -> PairChange {
        let ab = a_obj.concat(b_obj);
        let bab = self.basis(&ab);
        let ba = self.basis(a_obj);
        let bb = self.basis(b_obj);
        let mut per_charge = BTreeMap::new();
        for c in bab.charges() {
            let pairs = self.pair_keys(a_obj, b_obj, c);
            let index: HashMap<PairKey, usize> = pairs.iter().enumerate().map(|(i, k)| (*k, i)).collect();
            let dim = bab.dim(c);
            assert_eq!(pairs.len(), dim, "pair basis size differs from tree basis size");
            let mut p = CMat::zeros(dim, dim);
            for (row, &(a, b, mu, i, k)) in pairs.iter().enumerate() {
                let ta = &ba.trees(a)[i];
                let tb = &bb.trees(b)[k];
                if a_obj.is_empty() {
                    // unit ⊗ tB = tB
                    let col = bab.index(tb).expect("tree of B is a tree of A·B");
                    p[(row, col)] = ONE;
                    continue;
                }
                if b_obj.is_empty() {
                    let col = bab.index(ta).expect("tree of A is a tree of A·B");
                    p[(row, col)] = ONE;
                    continue;
                }
                if b_obj.len() == 1 {
                    let t = ta.push(tb.leaves[0], c, mu as u32);
                    p[(row, bab.index(&t).unwrap())] = ONE;
                    continue;
                }
                // tB = (tB' at b') · (leaf l, (b', l -> b; nu))
                let nb = tb.leaves.len();
                let b_prime_obj = Obj { slots: b_obj.slots[..nb - 1].to_vec(), color: (b_obj.color.0, self.color(tb.charges[nb - 2]).1) };
                let sub = self.pair_change(a_obj, &b_prime_obj);
                let tbp = tb.prefix(nb - 1, 0);
                let kp = self.basis(&b_prime_obj).index(&tbp).unwrap();
                let bp = tbp.top;
                let (l, cp) = tb.leaves[nb - 1];
                let nu = tb.vtx[nb - 1] as usize;
                let block = self.fblock(a, bp, l, c).expect("F-block for admissible quadruple");
                let abp = a_obj.concat(&b_prime_obj);
                let babp = self.basis(&abp);
                for &(e, al, be) in &block.rows {
                    let coef = self.finv((a, bp, l, c), (b, nu, mu), (e, al, be));
                    if coef == crate::linalg::ZERO {
                        continue;
                    }
                    let Some(pb) = sub.per_charge.get(&e) else { continue };
                    let prow = pb.index[&(a, bp, al, i, kp)];
                    for (lcol, t) in babp.trees(e).iter().enumerate() {
                        let w = pb.p[(prow, lcol)];
                        if w == crate::linalg::ZERO {
                            continue;
                        }
                        let t2 = t.push((l, cp), c, be as u32);
                        let col = bab.index(&t2).unwrap();
                        p[(row, col)] += coef * w;
                    }
                }
            }
            let pinv = inverse(&p).expect("pair change matrix is invertible");
            per_charge.insert(c, PairBlock { pairs, index, p, pinv });
        }
        PairChange { per_charge }
    }

    /// `f ⊗ g : src(f)·src(g) -> tgt(f)·tgt(g)`.
    pub fn tensor(&self, f: &Morphism, g: &Morphism) -> Morphism {
        let src = f.src.concat(&g.src);
        let tgt = f.tgt.concat(&g.tgt);
        let ps = self.pair_change(&f.src, &g.src);
        let pt = self.pair_change(&f.tgt, &g.tgt);
        let mut out = self.zero(&src, &tgt);
        for (c, blk) in out.blocks.iter_mut() {
            let (Some(ps), Some(pt)) = (ps.per_charge.get(c), pt.per_charge.get(c)) else { continue };
            let mut mp = CMat::zeros(pt.pairs.len(), ps.pairs.len());
            for (r, &(a, b, mu, i, k)) in pt.pairs.iter().enumerate() {
                let (Some(fa), Some(gb)) = (f.blocks.get(&a), g.blocks.get(&b)) else { continue };
                if fa.ncols() == 0 || gb.ncols() == 0 {
                    continue;
                }
                for j in 0..fa.ncols() {
                    let x = fa[(i, j)];
                    if x == crate::linalg::ZERO {
                        continue;
                    }
                    for l in 0..gb.ncols() {
                        let y = gb[(k, l)];
                        if y == crate::linalg::ZERO {
                            continue;
                        }
                        let col = ps.index[&(a, b, mu, j, l)];
                        mp[(r, col)] = x * y;
                    }
                }
            }
            *blk = &pt.pinv * mp * &ps.p;
        }
        out
    }

    /// `id_pre ⊗ f ⊗ id_post`.
    pub fn whisker(&self, pre: &Obj, f: &Morphism, post: &Obj) -> Morphism {
        let left = if pre.is_empty() { f.clone() } else { self.tensor(&self.identity(pre), f) };
        if post.is_empty() {
            left
        } else {
            self.tensor(&left, &self.identity(post))
        }
    }
}

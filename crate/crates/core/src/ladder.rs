//! The relative Deligne product `M^op ⊠_A M` in the ladder model.
//!
//! Summands are pairs `(s, T)` with `s` a simple module label on the back
//! sheet and `T` a module word on the front sheet. A morphism
//! `(s, T) -> (u, V)` is a sum over rungs `a` of tensors
//! `φ ⊗ ψ` with `φ: u -> a ▷ s` and `ψ: a ▷ T -> V`; the back leg is kept in
//! this rotated form instead of `a* ▷ u -> s`. Components are coefficient
//! matrices over the matrix-unit bases of the two hom spaces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{HomSpace, Label, Morphism, Obj};
use crate::linalg::{rank, real, CMat, CVec, C64, ZERO};
use crate::module::{Endo, ModuleSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderObj {
    pub summands: Vec<(Label, Obj)>,
}

/// Component key: (source summand, target summand, rung).
pub type CompKey = (usize, usize, Label);

#[derive(Clone, Debug)]
pub struct LadderMor {
    pub src: LadderObj,
    pub tgt: LadderObj,
    pub comps: BTreeMap<CompKey, CMat>,
}

/// A formal image of an idempotent ladder endomorphism.
#[derive(Clone, Debug)]
pub struct KaroubiObj {
    pub carrier: LadderObj,
    pub idem: LadderMor,
}

impl LadderObj {
    /// `⊕_s (s, s)` over all module simples.
    pub fn diagonal(ms: &ModuleSystem) -> LadderObj {
        LadderObj { summands: ms.m_labels.iter().map(|&s| (s, ms.simple(s))).collect() }
    }

    pub fn pair(ms: &ModuleSystem, s: Label, t: Label) -> LadderObj {
        LadderObj { summands: vec![(s, ms.simple(t))] }
    }

    /// The front leg transported by an endofunctor.
    pub fn apply(&self, w: &Endo) -> LadderObj {
        LadderObj { summands: self.summands.iter().map(|(s, t)| (*s, w.on(t))).collect() }
    }
}

impl ModuleSystem {
    pub fn back_space(&self, s: Label, u: Label, a: Label) -> HomSpace {
        self.sk.hom_space(&self.simple(u), &Obj::word(&self.sk, &[a, s]))
    }

    pub fn front_space(&self, t: &Obj, v: &Obj, a: Label) -> HomSpace {
        self.sk.hom_space(&self.simple(a).concat(t), v)
    }

    fn rungs(&self) -> std::ops::Range<Label> {
        self.c_labels()
    }

    pub fn ladder_zero(&self, src: &LadderObj, tgt: &LadderObj) -> LadderMor {
        LadderMor { src: src.clone(), tgt: tgt.clone(), comps: BTreeMap::new() }
    }

    /// Adds `z · φ ⊗ ψ` to the component `(i, j, a)`.
    pub fn ladder_add_term(&self, f: &mut LadderMor, key: CompKey, z: C64, phi: &Morphism, psi: &Morphism) {
        let (i, j, a) = key;
        let (s, t) = &f.src.summands[i];
        let (u, v) = &f.tgt.summands[j];
        let bs = self.back_space(*s, *u, a);
        let fs = self.front_space(t, v, a);
        let p = bs.coords(phi);
        let q = fs.coords(psi);
        let m = f.comps.entry(key).or_insert_with(|| CMat::zeros(bs.dim(), fs.dim()));
        *m += (p * q.transpose()) * z;
    }

    pub fn ladder_identity(&self, obj: &LadderObj) -> LadderMor {
        let mut f = self.ladder_zero(obj, obj);
        let one = self.sk.unit(0);
        for (i, (s, t)) in obj.summands.iter().enumerate() {
            let phi = self.sk.invert(&self.sk.unit_absorb_left(&self.simple(*s))).expect("unit absorption is invertible");
            let psi = self.sk.unit_absorb_left(t);
            self.ladder_add_term(&mut f, (i, i, one), real(1.0), &phi, &psi);
        }
        f
    }

    /// `g ∘ f`; `f` is applied first.
    pub fn ladder_compose(&self, f: &LadderMor, g: &LadderMor) -> Result<LadderMor> {
        if f.tgt != g.src {
            return Err(Error::Mismatch("ladder morphisms are not composable".into()));
        }
        let sk = &self.sk;
        let mut out = self.ladder_zero(&f.src, &g.tgt);
        let e0 = Obj::empty(0);
        for (&(i, j, a), fm) in &f.comps {
            let (s, t) = &f.src.summands[i];
            let (u, v) = &f.tgt.summands[j];
            let bs1 = self.back_space(*s, *u, a);
            let fs1 = self.front_space(t, v, a);
            for (&(j2, k, b), gm) in g.comps.range((j, 0, 0)..(j + 1, 0, 0)) {
                debug_assert_eq!(j2, j);
                let (w, x) = &g.tgt.summands[k];
                let bs2 = self.back_space(*u, *w, b);
                let fs2 = self.front_space(v, x, b);
                let ob = self.simple(b);
                let lifted_back: Vec<Morphism> =
                    (0..bs1.dim()).map(|p| sk.whisker(&ob, &bs1.basis_element(p), &Obj::empty(1))).collect();
                let lifted_front: Vec<Morphism> =
                    (0..fs1.dim()).map(|q| sk.whisker(&ob, &fs1.basis_element(q), &Obj::empty(1))).collect();
                for c in self.rungs() {
                    for mu in 0..sk.n(b, a, c) as usize {
                        let gamma = sk.whisker(&e0, &sk.vertex(b, a, c, mu), &self.simple(*s));
                        let gstar = sk.whisker(&e0, &sk.splitting(b, a, c, mu), t);
                        let bs = self.back_space(*s, *w, c);
                        let fs = self.front_space(t, x, c);
                        // back[p2][p1] and front[q1][q2] as coordinate vectors.
                        let mut back = Vec::new();
                        for p2 in 0..bs2.dim() {
                            let phi2 = bs2.basis_element(p2);
                            back.push(
                                lifted_back
                                    .iter()
                                    .map(|l1| bs.coords(&phi2.then(l1).then(&gamma)))
                                    .collect::<Vec<CVec>>(),
                            );
                        }
                        let mut front = Vec::new();
                        for l1 in &lifted_front {
                            let pre = gstar.then(l1);
                            front.push(
                                (0..fs2.dim()).map(|q2| fs.coords(&pre.then(&fs2.basis_element(q2)))).collect::<Vec<CVec>>(),
                            );
                        }
                        let mut acc = CMat::zeros(bs.dim(), fs.dim());
                        for p1 in 0..bs1.dim() {
                            for p2 in 0..bs2.dim() {
                                let mut fv = CVec::zeros(fs.dim());
                                for q1 in 0..fs1.dim() {
                                    let x1 = fm[(p1, q1)];
                                    if x1 == ZERO {
                                        continue;
                                    }
                                    for q2 in 0..fs2.dim() {
                                        let x2 = gm[(p2, q2)];
                                        if x2 == ZERO {
                                            continue;
                                        }
                                        fv += &front[q1][q2] * (x1 * x2);
                                    }
                                }
                                acc += &back[p2][p1] * fv.transpose();
                            }
                        }
                        let m = out.comps.entry((i, k, c)).or_insert_with(|| CMat::zeros(bs.dim(), fs.dim()));
                        *m += acc;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn ladder_add(&self, f: &LadderMor, g: &LadderMor) -> LadderMor {
        assert!(f.src == g.src && f.tgt == g.tgt, "ladder morphisms are not parallel");
        let mut out = f.clone();
        for (k, m) in &g.comps {
            match out.comps.get_mut(k) {
                Some(x) => *x += m,
                None => {
                    out.comps.insert(*k, m.clone());
                }
            }
        }
        out
    }

    pub fn ladder_scale(&self, f: &LadderMor, z: C64) -> LadderMor {
        let mut out = f.clone();
        for m in out.comps.values_mut() {
            *m *= z;
        }
        out
    }

    /// Max-abs difference of two parallel ladder morphisms.
    pub fn ladder_residual(&self, f: &LadderMor, g: &LadderMor) -> f64 {
        assert!(f.src == g.src && f.tgt == g.tgt, "ladder morphisms are not parallel");
        let mut worst: f64 = 0.0;
        for k in f.comps.keys().chain(g.comps.keys()) {
            let d = match (f.comps.get(k), g.comps.get(k)) {
                (Some(x), Some(y)) => crate::linalg::max_abs_diff(x, y),
                (Some(x), None) | (None, Some(x)) => crate::linalg::max_abs(x),
                (None, None) => 0.0,
            };
            worst = worst.max(d);
        }
        worst
    }

    /// `(M^op ⊠ W)(f)`: transports the front leg along `W = Z ▷ - ◁ Y`, using
    /// the module structure `a ▷ Z ≅ Z ▷ a` of the base part.
    pub fn ladder_apply(&self, w: &Endo, f: &LadderMor) -> Result<LadderMor> {
        let sk = &self.sk;
        let src = f.src.apply(w);
        let tgt = f.tgt.apply(w);
        let mut out = self.ladder_zero(&src, &tgt);
        for (&(i, j, a), m) in &f.comps {
            let (s, t) = &f.src.summands[i];
            let (u, v) = &f.tgt.summands[j];
            let fs = self.front_space(t, v, a);
            let bs = self.back_space(*s, *u, a);
            let new_fs = self.front_space(&src.summands[i].1, &tgt.summands[j].1, a);
            let omega = sk.whisker(&Obj::empty(0), &self.module_structure(&Endo::from_left(w.left.clone()), &self.simple(a), t)?, &w.right);
            let mut trans = CMat::zeros(fs.dim(), new_fs.dim());
            for q in 0..fs.dim() {
                let psi = omega.then(&self.apply_endofunctor(w, &fs.basis_element(q)));
                trans.set_row(q, &new_fs.coords(&psi).transpose());
            }
            out.comps.insert((i, j, a), m * trans);
            debug_assert_eq!(bs.dim(), m.nrows());
        }
        Ok(out)
    }

    /// Dimension of the space of all ladder morphisms `src -> tgt`.
    pub fn ladder_hom_dim(&self, src: &LadderObj, tgt: &LadderObj) -> usize {
        self.ladder_hom_keys(src, tgt).iter().map(|(_, r, c)| r * c).sum()
    }

    fn ladder_hom_keys(&self, src: &LadderObj, tgt: &LadderObj) -> Vec<(CompKey, usize, usize)> {
        let mut keys = Vec::new();
        for (i, (s, t)) in src.summands.iter().enumerate() {
            for (j, (u, v)) in tgt.summands.iter().enumerate() {
                for a in self.rungs() {
                    let r = self.back_space(*s, *u, a).dim();
                    let c = self.front_space(t, v, a).dim();
                    if r * c > 0 {
                        keys.push(((i, j, a), r, c));
                    }
                }
            }
        }
        keys
    }

    /// The ladder morphisms `src -> tgt` with one unit coefficient each.
    pub fn ladder_hom_basis(&self, src: &LadderObj, tgt: &LadderObj) -> Vec<LadderMor> {
        let mut out = Vec::new();
        for (key, r, c) in self.ladder_hom_keys(src, tgt) {
            for p in 0..r {
                for q in 0..c {
                    let mut m = CMat::zeros(r, c);
                    m[(p, q)] = real(1.0);
                    let mut f = self.ladder_zero(src, tgt);
                    f.comps.insert(key, m);
                    out.push(f);
                }
            }
        }
        out
    }

    /// Flattens a morphism in the order of `ladder_hom_basis`.
    pub fn ladder_coords(&self, f: &LadderMor) -> CVec {
        let mut v = Vec::new();
        for (key, r, c) in self.ladder_hom_keys(&f.src, &f.tgt) {
            for p in 0..r {
                for q in 0..c {
                    v.push(f.comps.get(&key).map(|m| m[(p, q)]).unwrap_or(ZERO));
                }
            }
        }
        CVec::from_vec(v)
    }

    /// `e` with weight `w(a, s, t)` on the summand `(s -> t, a)`.
    pub fn idempotent_with(&self, weight: impl Fn(Label, Label, Label) -> f64) -> LadderMor {
        let obj = LadderObj::diagonal(self);
        let mut e = self.ladder_zero(&obj, &obj);
        for (i, &s) in self.m_labels.iter().enumerate() {
            for (j, &t) in self.m_labels.iter().enumerate() {
                for a in self.rungs() {
                    if self.sk.n(a, s, t) == 0 {
                        continue;
                    }
                    let front = self.front_space(&self.simple(s), &self.simple(t), a);
                    let z = real(weight(a, s, t));
                    for q in 0..front.dim() {
                        let beta = front.basis_element(q);
                        let dual = front.dual_element(&self.sk, q);
                        self.ladder_add_term(&mut e, (i, j, a), z, &dual, &beta);
                    }
                }
            }
        }
        e
    }

    /// The quantum-dimension weights `d_a d_s / (D² d_t)`.
    pub fn idempotent_weight(&self, a: Label, s: Label, t: Label) -> f64 {
        self.c_dim(a) * self.m_dim(s) / (self.global_dim_sq() * self.m_dim(t))
    }

    /// The idempotent `e` on `⊕_s (s, s)` and its idempotency residual.
    pub fn build_idempotent(&self) -> Result<(LadderMor, f64)> {
        let e = self.idempotent_with(|a, s, t| self.idempotent_weight(a, s, t));
        let e2 = self.ladder_compose(&e, &e)?;
        let res = self.ladder_residual(&e2, &e);
        if res > self.tol {
            return Err(Error::Normalization(res));
        }
        Ok((e, res))
    }

    pub fn karoubi_split(&self, idem: &LadderMor) -> Result<KaroubiObj> {
        let sq = self.ladder_compose(idem, idem)?;
        let res = self.ladder_residual(&sq, idem);
        if res > self.tol || idem.src != idem.tgt {
            return Err(Error::Normalization(res));
        }
        Ok(KaroubiObj { carrier: idem.src.clone(), idem: idem.clone() })
    }

    /// `dim { f : carrier -> tgt | f ∘ idem = f }`, i.e. `dim Hom(S, tgt)`.
    pub fn karoubi_hom_dim(&self, k: &KaroubiObj, tgt: &LadderObj) -> Result<usize> {
        let basis = self.ladder_hom_basis(&k.carrier, tgt);
        let n = basis.len();
        if n == 0 {
            return Ok(0);
        }
        let mut m = CMat::zeros(n, n);
        for (col, f) in basis.iter().enumerate() {
            let fe = self.ladder_compose(&k.idem, f)?;
            let mut v = self.ladder_coords(&fe);
            v[col] -= real(1.0);
            m.set_column(col, &v);
        }
        Ok(n - rank(&m, 1e-9))
    }

    /// JSON dump of a ladder morphism with `[re, im]` entries.
    pub fn ladder_json(&self, f: &LadderMor) -> serde_json::Value {
        #[derive(Serialize)]
        struct Comp {
            source: usize,
            target: usize,
            rung: String,
            matrix: Vec<Vec<[f64; 2]>>,
        }
        let comps: Vec<Comp> = f
            .comps
            .iter()
            .map(|(&(i, j, a), m)| Comp {
                source: i,
                target: j,
                rung: self.sk.name(a).to_string(),
                matrix: (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect(),
            })
            .collect();
        let names = |o: &LadderObj| -> Vec<(String, Vec<String>)> {
            o.summands
                .iter()
                .map(|(s, t)| {
                    let ws = self.sk.word_labels(t).unwrap_or_default();
                    (self.sk.name(*s).to_string(), ws.iter().map(|&l| self.sk.name(l).to_string()).collect())
                })
                .collect()
        };
        serde_json::json!({ "source": names(&f.src), "target": names(&f.tgt), "components": comps })
    }
}

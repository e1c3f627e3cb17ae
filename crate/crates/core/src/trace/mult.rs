//! Families of module maps, the evaluation counit and the three
//! multiplications `Tr(x) ⊗ Tr(y) -> Tr(x ∘ y)`.

use std::str::FromStr;

use super::{Fstar, Trace, Tube};
use crate::error::{Error, Result};
use crate::fusion::{Label, Morphism, Obj};
use crate::module::Endo;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultMode {
    Pants,
    Mate,
    Interchange,
}

impl MultMode {
    pub const ALL: [MultMode; 3] = [MultMode::Pants, MultMode::Mate, MultMode::Interchange];

    pub fn name(self) -> &'static str {
        match self {
            MultMode::Pants => "pants",
            MultMode::Mate => "mate",
            MultMode::Interchange => "interchange",
        }
    }
}

impl FromStr for MultMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<MultMode> {
        match s {
            "pants" => Ok(MultMode::Pants),
            "mate" => Ok(MultMode::Mate),
            "interchange" => Ok(MultMode::Interchange),
            _ => Err(Error::Invalid(format!("unknown multiplication mode '{s}'"))),
        }
    }
}

impl Tube {
    /// The family `s ↦ Σ_k v_k g_k` of a carrier vector of charge `x`, one
    /// morphism `[x, s_i] -> T_i` per summand.
    pub fn family(&self, fs: &Fstar, x: Label, v: &[crate::linalg::C64]) -> Vec<Morphism> {
        let sk = &self.ms.sk;
        let x_obj = self.ms.simple(x);
        fs.obj
            .summands
            .iter()
            .enumerate()
            .map(|(i, (s, t))| {
                let sp = &fs.spaces[x][i];
                let mut m = sk.zero(&x_obj.concat(&self.ms.simple(*s)), t);
                for k in 0..sp.dim() {
                    let z = v[fs.copy(x, i, k)];
                    if z.norm() != 0.0 {
                        m = m.add(&sp.basis_element(k).scale(z));
                    }
                }
                m
            })
            .collect()
    }

    /// The natural family of copy `cp` of `x` after projecting with `E_W`.
    pub fn projected_family(&self, t: &Trace, x: Label, cp: usize) -> Vec<Morphism> {
        let col: Vec<_> = t.idem.blocks[&x].column(cp).iter().copied().collect();
        self.family(&t.fs, x, &col)
    }

    /// Extends a family on module simples to a module word `v`:
    /// `Σ_{t,k} W(ι_k) ∘ g_t ∘ (x ▷ π_k)`.
    pub fn extend(&self, fam: &[Morphism], w: &Endo, x: Label, v: &Obj) -> Morphism {
        let ms = &self.ms;
        let sk = &ms.sk;
        let xo = ms.simple(x);
        let mut out = sk.zero(&xo.concat(v), &w.on(v));
        for (i, &t) in ms.m_labels.iter().enumerate() {
            let hs = sk.hom_space(v, &ms.simple(t));
            for k in 0..hs.dim() {
                let pi = sk.whisker(&xo, &hs.basis_element(k), &Obj::empty(1));
                let iota = sk.whisker(&w.left, &hs.dual_element(sk, k), &w.right);
                out = out.add(&pi.then(&fam[i]).then(&iota));
            }
        }
        out
    }

    /// Evaluation counit `Φ(Tr(W)) ⇒ W` at a module word `v`:
    /// `[C_W] ++ v -> W(v)`.
    pub fn counit_at(&self, t: &Trace, v: &Obj) -> Morphism {
        let sk = &self.ms.sk;
        let c = t.carrier();
        let mut out = sk.zero(&c.concat(v), &t.endo.on(v));
        for x in 0..self.ms.nc() {
            for cp in 0..t.fs.mult[x] as usize {
                let fam = self.projected_family(t, x, cp);
                let pr = sk.whisker(&Obj::empty(0), &self.copy_projection(c, x, cp), v);
                out = out.add(&pr.then(&self.extend(&fam, &t.endo, x, v)));
            }
        }
        out
    }

    /// `Tr` of a natural transformation given by its components on simples.
    pub fn trace_map(&self, src: &Trace, tgt: &Trace, alpha: impl Fn(Label) -> Morphism) -> Morphism {
        let comps: Vec<Morphism> = self.ms.m_labels.iter().map(|&s| alpha(s)).collect();
        let raw = self.carrier_map(&src.fs, &tgt.fs, |x, i, k| vec![(i, src.fs.element(x, i, k).then(&comps[i]))]);
        src.idem.then(&raw).then(&tgt.idem)
    }

    /// `μ_{A,B}: Tr(A) ⊗ Tr(B) -> Tr(A ∘ B)` on carriers, projected on both sides.
    pub fn multiply(&self, a: &Endo, b: &Endo, mode: MultMode) -> Result<Morphism> {
        let ta = self.trace(a)?;
        let tb = self.trace(b)?;
        let tab = self.trace(&a.after(b))?;
        let raw = match mode {
            MultMode::Pants => self.pants(&ta, &tb, &tab)?,
            MultMode::Interchange => self.interchange(&ta, &tb, &tab)?,
            MultMode::Mate => self.mate(&ta, &tb, &tab)?,
        };
        let sk = &self.ms.sk;
        Ok(sk.tensor(&ta.idem, &tb.idem).then(&raw).then(&tab.idem))
    }

    /// Fills a map out of `[C_A, C_B]` tree by tree.
    fn from_pairs(
        &self,
        ta: &Trace,
        tb: &Trace,
        tab: &Trace,
        mut image: impl FnMut(Label, (Label, usize), (Label, usize), usize) -> Result<Vec<(usize, Morphism)>>,
    ) -> Result<Morphism> {
        let sk = &self.ms.sk;
        let src = ta.carrier().concat(tb.carrier());
        let basis = sk.basis(&src);
        let mut m = sk.zero(&src, tab.carrier());
        for c in basis.charges().collect::<Vec<_>>() {
            for (col, tree) in basis.trees(c).iter().enumerate() {
                let (x1, cp1) = tree.leaves[0];
                let (x2, cp2) = tree.leaves[1];
                let v = tree.vtx[1] as usize;
                for (i, h) in image(c, (x1, cp1 as usize), (x2, cp2 as usize), v)? {
                    let coords = tab.fs.spaces[c][i].coords(&h);
                    let blk = m.blocks.get_mut(&c).unwrap();
                    for (r, z) in coords.iter().enumerate() {
                        blk[(tab.fs.copy(c, i, r), col)] += *z;
                    }
                }
            }
        }
        Ok(m)
    }

    /// `F*(A(ε^ℓ_{B(S)}))` after the identification `C_A ⊗ C_B ≅ F*(A(C_B ▷ S))`.
    fn pants(&self, ta: &Trace, tb: &Trace, tab: &Trace) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let a = &ta.endo;
        self.from_pairs(ta, tb, tab, |c, (x1, cp1), (x2, cp2), v| {
            let (i1, k1) = ta.fs.locate(x1, cp1);
            let (i2, k2) = tb.fs.locate(x2, cp2);
            if i1 != i2 {
                return Ok(vec![]);
            }
            let so = ms.simple(ms.m_labels[i1]);
            let e0 = Obj::empty(0);
            let split = sk.whisker(&e0, &sk.splitting(x1, x2, c, v), &so);
            let br = sk.whisker(&e0, &ms.half_braiding(&ms.simple(x1), &ms.simple(x2))?, &so);
            let g1 = sk.whisker(&ms.simple(x2), &ta.fs.element(x1, i1, k1), &Obj::empty(1));
            let om = ms.module_structure(a, &ms.simple(x2), &so)?;
            let g2 = sk.whisker(&a.left, &tb.fs.element(x2, i2, k2), &a.right);
            Ok(vec![(i1, split.then(&br).then(&g1).then(&om).then(&g2))])
        })
    }

    /// Horizontal composite of the two natural families.
    fn interchange(&self, ta: &Trace, tb: &Trace, tab: &Trace) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let (a, b) = (&ta.endo, &tb.endo);
        self.from_pairs(ta, tb, tab, |c, (x1, cp1), (x2, cp2), v| {
            let fa = self.projected_family(ta, x1, cp1);
            let fb = self.projected_family(tb, x2, cp2);
            let mut out = Vec::new();
            for (i, &s) in ms.m_labels.iter().enumerate() {
                let so = ms.simple(s);
                let split = sk.whisker(&Obj::empty(0), &sk.splitting(x1, x2, c, v), &so);
                let h = sk.whisker(&ms.simple(x1), &fb[i], &Obj::empty(1));
                let g = self.extend(&fa, a, x1, &b.on(&so));
                out.push((i, split.then(&h).then(&g)));
            }
            Ok(out)
        })
    }

    /// Mate of `Φ(C_A ⊗ C_B) ⇒ Φ(C_A) Φ(C_B) ⇒ A ∘ B` under `Φ ⊣ Tr`, with
    /// unit `z ⊗ η^ℓ` and the evaluation counit.
    fn mate(&self, ta: &Trace, tb: &Trace, tab: &Trace) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let p = ta.carrier().concat(tb.carrier());
        let eta = self.eta_l_at(&p)?;
        let fp = self.f_obj(&p)?;
        let comps: Vec<Morphism> = ms
            .m_labels
            .iter()
            .map(|&s| {
                let so = ms.simple(s);
                let inner = sk.whisker(ta.carrier(), &self.counit_at(tb, &so), &Obj::empty(1));
                inner.then(&self.counit_at(ta, &tb.endo.on(&so)))
            })
            .collect();
        let tr = self.carrier_map(&fp.0, &tab.fs, |x, i, k| vec![(i, fp.0.element(x, i, k).then(&comps[i]))]);
        Ok(eta.then(&tr))
    }

    /// Residual of `μ(η^ℓ ⊗ id) = id = μ(id ⊗ η^ℓ)` on `Tr(A)`.
    pub fn unit_residual(&self, a: &Endo, mode: MultMode) -> Result<f64> {
        let sk = &self.ms.sk;
        let ta = self.trace(a)?;
        let eta = self.eta_l()?;
        let id = sk.identity(ta.carrier());
        let left = sk.tensor(&eta, &id).then(&self.multiply(&Endo::identity(), a, mode)?);
        let right = sk.tensor(&id, &eta).then(&self.multiply(a, &Endo::identity(), mode)?);
        Ok(left.residual(&ta.idem).max(right.residual(&ta.idem)))
    }

    /// Residual of `μ(μ ⊗ id) = μ(id ⊗ μ)`.
    pub fn associativity_residual(&self, a: &Endo, b: &Endo, c: &Endo, mode: MultMode) -> Result<f64> {
        let sk = &self.ms.sk;
        let ids = |e: &Endo| -> Result<Morphism> { Ok(sk.identity(self.trace(e)?.carrier())) };
        let lhs = sk.tensor(&self.multiply(a, b, mode)?, &ids(c)?).then(&self.multiply(&a.after(b), c, mode)?);
        let rhs = sk.tensor(&ids(a)?, &self.multiply(b, c, mode)?).then(&self.multiply(a, &b.after(c), mode)?);
        Ok(lhs.residual(&rhs))
    }

    /// Largest pairwise difference between the three multiplications.
    pub fn mult_agreement(&self, a: &Endo, b: &Endo) -> Result<f64> {
        let ms: Vec<Morphism> = MultMode::ALL.iter().map(|&m| self.multiply(a, b, m)).collect::<Result<_>>()?;
        Ok(ms[0].residual(&ms[1]).max(ms[0].residual(&ms[2])).max(ms[1].residual(&ms[2])))
    }
}

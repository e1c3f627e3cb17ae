//! Half-traciators, the traciator `Tr(a ++ b) -> Tr(b ++ a)` for endofunctor
//! words, and the mate formula built from the `Φ ⊣ Tr` adjunction.

use super::{Fstar, Trace, Tube};
use crate::error::{Error, Result};
use crate::fusion::{Morphism, Obj};
use crate::linalg::pinv;
use crate::module::Endo;

/// Residuals of the braid compatibility, see [`Tube::braid_compat_residuals`].
#[derive(Clone, Copy, Debug)]
pub struct BraidResiduals {
    pub framed: f64,
    pub over: f64,
    pub under: f64,
}

impl Tube {
    fn word_trace(&self, w: &Obj) -> Result<std::sync::Arc<Trace>> {
        self.trace(&Endo::from_right(w.clone()))
    }

    /// Splits `Tr(W)` for a pure endofunctor word into its word.
    pub fn right_word(e: &Endo) -> Result<&Obj> {
        if !e.left.is_empty() {
            return Err(Error::Invalid("traciators are defined for endofunctor words only".into()));
        }
        Ok(&e.right)
    }

    /// `⊕_t [t ++ a*, t ++ b]`, the middle object of the traciator.
    pub fn traciator_middle(&self, a: &Obj, b: &Obj) -> Result<Fstar> {
        let ad = self.ms.sk.dual_word(a)?;
        let pairs: Vec<(Obj, Obj)> = self
            .ms
            .m_labels
            .iter()
            .map(|&t| {
                let to = self.ms.simple(t);
                (to.concat(&ad), to.concat(b))
            })
            .collect();
        self.fstar_pairs(&pairs)
    }

    /// `τ^ℓ`: `[s, s a b] -> ⊕_t [t a*, t b]`, extending the family to
    /// `t a*` and evaluating `a* a`.
    pub fn tau_l(&self, a: &Obj, b: &Obj) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let src = self.word_trace(&a.concat(b))?;
        let mid = self.traciator_middle(a, b)?;
        let ad = sk.dual_word(a)?;
        let ev = sk.ev_word(a)?;
        let n = ms.m_labels.len();
        let raw = self.carrier_map(&src.fs, &mid, |x, i, k| {
            let xo = ms.simple(x);
            let mut fam: Vec<Morphism> = ms
                .m_labels
                .iter()
                .map(|&s| sk.zero(&xo.concat(&ms.simple(s)), &ms.simple(s).concat(a).concat(b)))
                .collect();
            fam[i] = src.fs.element(x, i, k);
            (0..n)
                .map(|j| {
                    let to = ms.simple(ms.m_labels[j]);
                    let g = self.extend(&fam, &src.endo, x, &to.concat(&ad));
                    (j, g.then(&sk.whisker(&to, &ev, b)))
                })
                .collect()
        });
        Ok(src.idem.then(&raw))
    }

    /// `τ^r`: `[t, t b a] -> [t a*, t b]` by the right duality of `a`.
    pub fn tau_r(&self, a: &Obj, b: &Obj) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let src = self.word_trace(&b.concat(a))?;
        let mid = self.traciator_middle(a, b)?;
        let ad = sk.dual_word(a)?;
        let ev = sk.ev_right_word(a)?;
        Ok(self.carrier_map(&src.fs, &mid, |x, i, k| {
            let tb = ms.simple(ms.m_labels[i]).concat(b);
            let g = sk.tensor(&src.fs.element(x, i, k), &sk.identity(&ad));
            vec![(i, g.then(&sk.whisker(&tb, &ev, &Obj::empty(1))))]
        }))
    }

    /// `(τ^r)^{-1}`: `[t a*, t b] -> [t, t b a]`.
    pub fn tau_r_inv(&self, a: &Obj, b: &Obj) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let tgt = self.word_trace(&b.concat(a))?;
        let mid = self.traciator_middle(a, b)?;
        let coev = sk.coev_right_word(a)?;
        Ok(self.carrier_map(&mid, &tgt.fs, |x, j, k| {
            let xt = ms.simple(x).concat(&ms.simple(ms.m_labels[j]));
            let pre = sk.whisker(&xt, &coev, &Obj::empty(1));
            let g = sk.tensor(&mid.element(x, j, k), &sk.identity(a));
            vec![(j, pre.then(&g))]
        }))
    }

    /// `τ_{a,b}: Tr(a ++ b) -> Tr(b ++ a)`, i.e. `(τ^r)^{-1} ∘ τ^ℓ`.
    pub fn traciator(&self, a: &Obj, b: &Obj) -> Result<Morphism> {
        let tgt = self.word_trace(&b.concat(a))?;
        Ok(self.tau_l(a, b)?.then(&self.tau_r_inv(a, b)?).then(&tgt.idem))
    }

    /// Residual of `τ^r ∘ (τ^r)^{-1} = id` and `(τ^r)^{-1} ∘ τ^r = id` on carriers.
    pub fn tau_r_inverse_residual(&self, a: &Obj, b: &Obj) -> Result<f64> {
        let sk = &self.ms.sk;
        let r = self.tau_r(a, b)?;
        let ri = self.tau_r_inv(a, b)?;
        let one = r.then(&ri).residual(&sk.identity(&r.src));
        Ok(one.max(ri.then(&r).residual(&sk.identity(&r.tgt))))
    }

    /// `τ_{a,b}^{-1}: Tr(b ++ a) -> Tr(a ++ b)`, inverted on the images.
    pub fn traciator_inv(&self, a: &Obj, b: &Obj) -> Result<Morphism> {
        let src = self.word_trace(&a.concat(b))?;
        let tgt = self.word_trace(&b.concat(a))?;
        Ok(self.image_inverse(&self.traciator(a, b)?, &src.idem, &tgt.idem))
    }

    /// `E_s ∘ f^+ ∘ E_t` for `f` an isomorphism from the image of `E_s` onto
    /// the image of `E_t`.
    pub fn image_inverse(&self, f: &Morphism, src_idem: &Morphism, tgt_idem: &Morphism) -> Morphism {
        let mut p = self.ms.sk.zero(&f.tgt, &f.src);
        for (c, blk) in p.blocks.iter_mut() {
            *blk = pinv(&f.blocks[c], 1e-10);
        }
        tgt_idem.then(&p).then(src_idem)
    }

    /// Post-composes with `θ^{±1}` charge by charge.
    pub fn scale_by_twist(&self, m: &Morphism, power: i32) -> Result<Morphism> {
        let sk = &self.ms.sk;
        let mut out = m.clone();
        for (c, blk) in out.blocks.iter_mut() {
            let th = sk.twist(*c)?.powi(power);
            *blk *= th;
        }
        Ok(out)
    }

    /// `θ` on the image of `Tr(W)`.
    pub fn trace_twist(&self, t: &Trace) -> Result<Morphism> {
        self.scale_by_twist(&t.idem, 1)
    }

    /// The traciator as the mate of
    /// `Φ(Tr(ab)) ⇒ Φ(Tr(ab)) a* a ⇒ a b a ⇒ b a` (right coevaluation,
    /// evaluation counit, left evaluation).
    pub fn hpt_traciator(&self, a: &Obj, b: &Obj) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let src = self.word_trace(&a.concat(b))?;
        let tgt = self.word_trace(&b.concat(a))?;
        let c = src.carrier().clone();
        let ad = sk.dual_word(a)?;
        let coev = sk.coev_right_word(a)?;
        let ev = sk.ev_word(a)?;
        let comps: Vec<Morphism> = ms
            .m_labels
            .iter()
            .map(|&s| {
                let so = ms.simple(s);
                let pre = sk.whisker(&c.concat(&so), &coev, &Obj::empty(1));
                let sad = so.concat(&ad);
                let eps = sk.tensor(&self.counit_at(&src, &sad), &sk.identity(a));
                let post = sk.whisker(&so, &ev, &b.concat(a));
                pre.then(&eps).then(&post)
            })
            .collect();
        let eta = self.eta_l_at(&c)?;
        let fc = self.f_obj(&c)?;
        let tr = self.carrier_map(&fc.0, &tgt.fs, |x, i, k| vec![(i, fc.0.element(x, i, k).then(&comps[i]))]);
        Ok(src.idem.then(&eta).then(&tr).then(&tgt.idem))
    }

    /// `τ_{a++b, c} = τ_{b, c++a} ∘ τ_{a, b++c}`.
    pub fn cocycle_residual(&self, a: &Obj, b: &Obj, c: &Obj) -> Result<f64> {
        let lhs = self.traciator(&a.concat(b), c)?;
        let rhs = self.traciator(a, &b.concat(c))?.then(&self.traciator(b, &c.concat(a))?);
        Ok(lhs.residual(&rhs))
    }

    /// `τ_{∅,w} = id` and `τ_{w,∅} = θ`.
    pub fn twist_compat_residual(&self, w: &Obj) -> Result<f64> {
        let t = self.word_trace(w)?;
        let e = Obj::empty(1);
        let unit = self.traciator(&e, w)?.residual(&t.idem);
        let full = self.traciator(w, &e)?.residual(&self.trace_twist(&t)?);
        Ok(unit.max(full))
    }

    /// Braid compatibility `τ_{b,a} ∘ μ_{a,b} = μ_{b,a} ∘ β_{Tr a, Tr b} ∘ (id ⊗ θ_{Tr b})`,
    /// the moved tube carrying its full twist. Also returns the residuals of
    /// the unframed equation `τ_{b,a} ∘ μ_{a,b} = μ_{b,a} ∘ β` for both
    /// orientations of the braiding.
    pub fn braid_compat_residuals(&self, a: &Obj, b: &Obj) -> Result<BraidResiduals> {
        let sk = &self.ms.sk;
        let ea = Endo::from_right(a.clone());
        let eb = Endo::from_right(b.clone());
        let mode = super::mult::MultMode::Pants;
        let lhs = self.multiply(&ea, &eb, mode)?.then(&self.traciator(b, a)?);
        let ta = self.trace(&ea)?;
        let tb = self.trace(&eb)?;
        let (ca, cb) = (ta.carrier(), tb.carrier());
        let mba = self.multiply(&eb, &ea, mode)?;
        let over = sk.braid_words(ca, cb, false)?.then(&mba);
        let under = sk.braid_words(cb, ca, true)?.then(&mba);
        let framed = sk.tensor(&ta.idem, &self.trace_twist(&tb)?).then(&over);
        Ok(BraidResiduals { framed: lhs.residual(&framed), over: lhs.residual(&over), under: lhs.residual(&under) })
    }

    /// Moving a cup around the tube: `τ_{y*,y} ∘ Tr(c̃oev_y) ∘ η^ℓ = Tr(coev_y) ∘ η^ℓ`
    /// and the mirrored equation.
    pub fn trace_cup_residual(&self, y: &Obj) -> Result<f64> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let yd = sk.dual_word(y)?;
        let eta = self.eta_l()?;
        let tid = self.trace(&Endo::identity())?;
        let cup = |w: &Obj, f: &Morphism| -> Result<Morphism> {
            let t = self.word_trace(w)?;
            Ok(eta.then(&self.trace_map(&tid, &t, |s| sk.whisker(&ms.simple(s), f, &Obj::empty(1)))))
        };
        let front = cup(&y.concat(&yd), &sk.coev_word(y)?)?;
        let back = cup(&yd.concat(y), &sk.coev_right_word(y)?)?;
        let r1 = back.then(&self.traciator(&yd, y)?).residual(&front);
        let r2 = front.then(&self.traciator(y, &yd)?).residual(&back);
        Ok(r1.max(r2))
    }
}

//! Cusp isomorphisms `C_m`, the action of ladder morphisms on a module simple
//! through `G* ⊠ M`, and the checks built from them.

use super::{Trace, Tube};
use crate::error::Result;
use crate::fusion::{Label, Morphism, Obj};
use crate::ladder::{LadderMor, LadderObj};
use crate::linalg::real;
use crate::module::Endo;

/// One summand `[x] ++ T_i` of `ρ_m(⊕ (s_i, T_i))`, indexed by a basis
/// vector `k` of `Hom(x ▷ s_i, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoPart {
    pub summand: usize,
    pub x: Label,
    pub k: usize,
    pub word: Obj,
}

/// A morphism between finite direct sums of module words, as a block matrix.
#[derive(Clone, Debug)]
pub struct SumMor {
    pub src: Vec<Obj>,
    pub tgt: Vec<Obj>,
    /// `blocks[r][c]: src[c] -> tgt[r]`.
    pub blocks: Vec<Vec<Morphism>>,
}

impl SumMor {
    pub fn zero(tube: &Tube, src: &[Obj], tgt: &[Obj]) -> SumMor {
        let sk = tube.sk();
        let blocks = tgt.iter().map(|t| src.iter().map(|s| sk.zero(s, t)).collect()).collect();
        SumMor { src: src.to_vec(), tgt: tgt.to_vec(), blocks }
    }

    pub fn identity(tube: &Tube, obj: &[Obj]) -> SumMor {
        let mut m = SumMor::zero(tube, obj, obj);
        for (i, o) in obj.iter().enumerate() {
            m.blocks[i][i] = tube.sk().identity(o);
        }
        m
    }

    /// `g ∘ self`.
    pub fn then(&self, tube: &Tube, g: &SumMor) -> SumMor {
        let mut out = SumMor::zero(tube, &self.src, &g.tgt);
        for r in 0..g.tgt.len() {
            for c in 0..self.src.len() {
                for mid in 0..self.tgt.len() {
                    let h = self.blocks[mid][c].then(&g.blocks[r][mid]);
                    out.blocks[r][c] = out.blocks[r][c].add(&h);
                }
            }
        }
        out
    }

    pub fn residual(&self, other: &SumMor) -> f64 {
        let mut worst: f64 = 0.0;
        for (ra, rb) in self.blocks.iter().zip(&other.blocks) {
            for (a, b) in ra.iter().zip(rb) {
                worst = worst.max(a.residual(b));
            }
        }
        worst
    }
}

/// Cusp data at every module simple: `C_m^{-1}: m -> ρ_m(S)` and
/// `C_m: ρ_m(S) -> m`.
#[derive(Clone, Debug)]
pub struct CuspData {
    pub m: Label,
    pub inclusion: SumMor,
    pub projection: SumMor,
    /// `|C_m ∘ C_m^{-1} - id_m|`.
    pub residual: f64,
}

impl Tube {
    /// The summands of `ρ_m(X) = (G* ⊠ M)(m ⊠ X)`.
    pub fn rho_parts(&self, m: Label, obj: &LadderObj) -> Vec<RhoPart> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let mut parts = Vec::new();
        for (i, (s, t)) in obj.summands.iter().enumerate() {
            for x in ms.c_labels() {
                let hs = sk.hom_space(&ms.simple(x).concat(&ms.simple(*s)), &ms.simple(m));
                for k in 0..hs.dim() {
                    parts.push(RhoPart { summand: i, x, k, word: ms.simple(x).concat(t) });
                }
            }
        }
        parts
    }

    fn words(parts: &[RhoPart]) -> Vec<Obj> {
        parts.iter().map(|p| p.word.clone()).collect()
    }

    /// `ρ_m(f)`: a copy `(x, g_k)` of the source goes to
    /// `Σ_μ coord_{k'}(g_k ∘ (v_μ ▷ s) ∘ (x' ▷ φ)) · (x' ▷ ψ) ∘ (s_μ ▷ T)` with
    /// `v_μ: x' a -> x` and `s_μ: x -> x' a` dual vertices.
    pub fn rho_mor(&self, m: Label, f: &LadderMor) -> SumMor {
        let ms = &self.ms;
        let sk = &ms.sk;
        let src = self.rho_parts(m, &f.src);
        let tgt = self.rho_parts(m, &f.tgt);
        let mut out = SumMor::zero(self, &Self::words(&src), &Self::words(&tgt));
        let om = ms.simple(m);
        let e1 = Obj::empty(1);
        for (&(i, j, a), coef) in &f.comps {
            let (s, t) = &f.src.summands[i];
            let (u, v) = &f.tgt.summands[j];
            let bs = ms.back_space(*s, *u, a);
            let fsp = ms.front_space(t, v, a);
            for (c, sp) in src.iter().enumerate().filter(|(_, p)| p.summand == i) {
                let g = sk.hom_space(&ms.simple(sp.x).concat(&ms.simple(*s)), &om).basis_element(sp.k);
                for xp in ms.c_labels() {
                    let tgt_space = sk.hom_space(&ms.simple(xp).concat(&ms.simple(*u)), &om);
                    if tgt_space.dim() == 0 {
                        continue;
                    }
                    for mu in 0..sk.n(xp, a, sp.x) as usize {
                        let vtx = sk.whisker(&Obj::empty(0), &sk.vertex(xp, a, sp.x, mu), &ms.simple(*s));
                        let split = sk.whisker(&Obj::empty(0), &sk.splitting(xp, a, sp.x, mu), t);
                        for p in 0..bs.dim() {
                            let back = sk.whisker(&ms.simple(xp), &bs.basis_element(p), &e1).then(&vtx).then(&g);
                            let w = tgt_space.coords(&back);
                            for q in 0..fsp.dim() {
                                let z = coef[(p, q)];
                                if z.norm() == 0.0 {
                                    continue;
                                }
                                let front = split.then(&sk.whisker(&ms.simple(xp), &fsp.basis_element(q), &e1));
                                for (r, tp) in tgt.iter().enumerate() {
                                    if tp.summand != j || tp.x != xp || w[tp.k].norm() == 0.0 {
                                        continue;
                                    }
                                    let add = front.scale(z * w[tp.k]);
                                    out.blocks[r][c] = out.blocks[r][c].add(&add);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `C_m^{-1} = ⊕ g_k^*` into `ρ_m(⊕ (s, s))` and `C_m = Σ w g_k` with
    /// `w = d_x d_s / (D² d_m)`.
    pub fn cusp(&self, m: Label) -> CuspData {
        let ms = &self.ms;
        let sk = &ms.sk;
        let diag = self.diagonal();
        let parts = self.rho_parts(m, &diag);
        let words = Self::words(&parts);
        let om = vec![ms.simple(m)];
        let mut inclusion = SumMor::zero(self, &om, &words);
        let mut projection = SumMor::zero(self, &words, &om);
        for (r, p) in parts.iter().enumerate() {
            let s = diag.summands[p.summand].0;
            let hs = sk.hom_space(&p.word, &om[0]);
            inclusion.blocks[r][0] = hs.dual_element(sk, p.k);
            let w = ms.c_dim(p.x) * ms.m_dim(s) / (ms.global_dim_sq() * ms.m_dim(m));
            projection.blocks[0][r] = hs.basis_element(p.k).scale(real(w));
        }
        let residual = inclusion.then(self, &projection).residual(&SumMor::identity(self, &om));
        CuspData { m, inclusion, projection, residual }
    }

    /// Counit `Φ(Tr W) ⇒ W` at a module simple `m` routed through the cusp:
    /// `C ▷ m -> C ▷ x ▷ s -> x ▷ C ▷ s -> x ▷ W(s) -> W(x ▷ s) -> W(m)`.
    pub fn cusp_counit_at(&self, t: &Trace, m: Label) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let c = t.carrier();
        let cusp = self.cusp(m);
        let diag = self.diagonal();
        let om = ms.simple(m);
        let mut out = sk.zero(&c.concat(&om), &t.endo.on(&om));
        for (r, p) in self.rho_parts(m, &diag).iter().enumerate() {
            let s = ms.simple(diag.summands[p.summand].0);
            let xo = ms.simple(p.x);
            let inc = sk.whisker(c, &cusp.inclusion.blocks[r][0], &Obj::empty(1));
            let br = sk.whisker(&Obj::empty(0), &ms.half_braiding(c, &xo)?, &s);
            let ev = sk.whisker(&xo, &self.counit_at(t, &s), &Obj::empty(1));
            let st = ms.module_structure(&t.endo, &xo, &s)?;
            let pr = ms.apply_endofunctor(&t.endo, &cusp.projection.blocks[0][r]);
            out = out.add(&inc.then(&br).then(&ev).then(&st).then(&pr));
        }
        Ok(out)
    }

    /// The cusps split `ρ_m(e)` and the unit `η^ℓ` followed by the cusp
    /// counit of `Tr(id)` is the identity of `id_M`.
    pub fn etas_c_residual(&self) -> Result<f64> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let tid = self.trace(&Endo::identity())?;
        let eta = self.eta_l()?;
        let mut worst: f64 = 0.0;
        for &m in &ms.m_labels {
            let cusp = self.cusp(m);
            let re = self.rho_mor(m, &self.e);
            worst = worst.max(cusp.residual);
            worst = worst.max(cusp.projection.then(self, &cusp.inclusion).residual(&re));
            worst = worst.max(re.then(self, &re).residual(&re));
            let om = ms.simple(m);
            let lhs = sk.whisker(&Obj::empty(0), &eta, &om).then(&self.cusp_counit_at(&tid, m)?);
            worst = worst.max(lhs.residual(&sk.identity(&om)));
        }
        Ok(worst)
    }

    /// Snake equations of `Φ ⊣ Tr` with unit `η^ℓ` and the evaluation counit,
    /// and agreement of the evaluation counit with the cusp counit.
    pub fn phitr_snake_residuals(&self) -> Result<[f64; 3]> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let mut out = [0.0f64; 3];
        let mut endos = vec![Endo::identity()];
        endos.extend(ms.e_labels.iter().map(|&l| Endo::from_right(ms.simple(l))));
        for y in &endos {
            let t = self.trace(y)?;
            let c = t.carrier().clone();
            // Tr(ε_y) ∘ η_{Tr y} = id.
            let fc = self.f_obj(&c)?;
            let comps: Vec<Morphism> = ms.m_labels.iter().map(|&s| self.counit_at(&t, &ms.simple(s))).collect();
            let tr = self.carrier_map(&fc.0, &t.fs, |x, i, k| vec![(i, fc.0.element(x, i, k).then(&comps[i]))]);
            let lhs = t.idem.then(&self.eta_l_at(&c)?).then(&tr).then(&t.idem);
            out[0] = out[0].max(lhs.residual(&t.idem));
            for &m in &ms.m_labels {
                let proj = sk.whisker(&Obj::empty(0), &t.idem, &ms.simple(m));
                let direct = proj.then(&self.counit_at(&t, &ms.simple(m)));
                let routed = proj.then(&self.cusp_counit_at(&t, m)?);
                out[2] = out[2].max(direct.residual(&routed));
            }
        }
        // ε_{Φ z} ∘ Φ(η_z) = id.
        for z in ms.c_labels() {
            let zo = ms.simple(z);
            let t = self.trace(&Endo::from_left(zo.clone()))?;
            let eta = self.eta_l_at(&zo)?;
            for &s in &ms.m_labels {
                let so = ms.simple(s);
                let lhs = sk.whisker(&Obj::empty(0), &eta, &so).then(&self.counit_at(&t, &so));
                out[1] = out[1].max(lhs.residual(&sk.identity(&zo.concat(&so))));
            }
        }
        Ok(out)
    }
}

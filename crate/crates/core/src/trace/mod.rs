//! The internal-hom functor on ladder objects, the categorified trace and its
//! structure maps.
//!
//! `F*(⊕ (s_i, T_i))` is a single base slot carrying one copy of `x` for every
//! basis vector of `Hom(x ▷ s_i, T_i)`. Base morphisms between such carriers
//! therefore act on families of module morphisms, and `Tr(W)` is the image of
//! `F*` applied to `(M^op ⊠ W)(e)`.

pub mod coherence;
pub mod cusp;
pub mod mult;
pub mod traciator;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fusion::{HomSpace, Label, Morphism, Obj, Slot};
use crate::ladder::{LadderMor, LadderObj};
use crate::linalg::{rank, real, ONE};
use crate::module::{Endo, ModuleSystem};

/// `F*` of a ladder object: the carrier slot and its copy bookkeeping.
#[derive(Clone, Debug)]
pub struct Fstar {
    /// The ladder object, empty when built from word pairs.
    pub obj: LadderObj,
    /// Back legs, one per summand.
    pub backs: Vec<Obj>,
    pub carrier: Obj,
    /// `spaces[x][i] = Hom([x] ++ S_i, T_i)`.
    pub spaces: Vec<Vec<HomSpace>>,
    /// Copy index of the first basis vector of `spaces[x][i]`.
    pub offsets: Vec<Vec<usize>>,
    pub mult: Vec<u32>,
}

impl Fstar {
    pub fn copy(&self, x: Label, i: usize, k: usize) -> usize {
        self.offsets[x][i] + k
    }

    /// Inverse of `copy`: the summand and basis index of copy `cp` of `x`.
    pub fn locate(&self, x: Label, cp: usize) -> (usize, usize) {
        let i = (0..self.spaces[x].len())
            .find(|&i| cp >= self.offsets[x][i] && cp < self.offsets[x][i] + self.spaces[x][i].dim())
            .expect("copy index in range");
        (i, cp - self.offsets[x][i])
    }

    pub fn element(&self, x: Label, i: usize, k: usize) -> Morphism {
        self.spaces[x][i].basis_element(k)
    }
}

/// A trace object `Tr(W)`: carrier `F*(W(⊕ (s, s)))` with idempotent `E_W`.
#[derive(Clone, Debug)]
pub struct Trace {
    pub endo: Endo,
    pub fs: Fstar,
    pub idem: Morphism,
    /// Multiplicities of the image of `idem`.
    pub mult: Vec<u32>,
}

impl Trace {
    pub fn carrier(&self) -> &Obj {
        &self.fs.carrier
    }
}

/// The tube calculus of one module system.
#[derive(Debug)]
pub struct Tube {
    pub ms: ModuleSystem,
    pub e: LadderMor,
    pub e_residual: f64,
    traces: Mutex<HashMap<Endo, Arc<Trace>>>,
    fstars: Mutex<HashMap<Obj, Arc<(Fstar, Morphism)>>>,
}

impl Tube {
    pub fn new(ms: ModuleSystem) -> Result<Tube> {
        let (e, e_residual) = ms.build_idempotent()?;
        Ok(Tube { ms, e, e_residual, traces: Mutex::new(HashMap::new()), fstars: Mutex::new(HashMap::new()) })
    }

    pub fn tol(&self) -> f64 {
        self.ms.tol
    }

    pub fn sk(&self) -> &crate::fusion::Skeleton {
        &self.ms.sk
    }

    pub fn diagonal(&self) -> LadderObj {
        LadderObj::diagonal(&self.ms)
    }

    pub fn fstar(&self, obj: &LadderObj) -> Result<Fstar> {
        let pairs: Vec<(Obj, Obj)> = obj.summands.iter().map(|(s, t)| (self.ms.simple(*s), t.clone())).collect();
        let mut fs = self.fstar_pairs(&pairs)?;
        fs.obj = obj.clone();
        Ok(fs)
    }

    /// `⊕_i [S_i, T_i]` for module words `S_i, T_i`.
    pub fn fstar_pairs(&self, pairs: &[(Obj, Obj)]) -> Result<Fstar> {
        let ms = &self.ms;
        let nc = ms.nc();
        let mut spaces = Vec::with_capacity(nc);
        let mut offsets = Vec::with_capacity(nc);
        let mut mult = vec![0u32; ms.sk.len()];
        for x in 0..nc {
            let mut sp = Vec::new();
            let mut off = Vec::new();
            let mut n = 0;
            for (s, t) in pairs {
                let h = ms.sk.hom_space(&ms.simple(x).concat(s), t);
                off.push(n);
                n += h.dim();
                sp.push(h);
            }
            mult[x] = n as u32;
            spaces.push(sp);
            offsets.push(off);
        }
        if mult.iter().all(|&m| m == 0) {
            return Err(Error::ZeroSpace("internal hom of a ladder object".into()));
        }
        let carrier = Obj::from_slots(&ms.sk, vec![Slot::from_mult(mult.clone())]);
        let backs = pairs.iter().map(|p| p.0.clone()).collect();
        Ok(Fstar { obj: LadderObj { summands: vec![] }, backs, carrier, spaces, offsets, mult })
    }

    /// Builds a carrier morphism from the image of every source copy, given
    /// as a list of `(target summand, element of Hom([x, u_j], V_j))`.
    pub fn carrier_map(
        &self,
        src: &Fstar,
        tgt: &Fstar,
        mut image: impl FnMut(Label, usize, usize) -> Vec<(usize, Morphism)>,
    ) -> Morphism {
        let sk = &self.ms.sk;
        let mut m = sk.zero(&src.carrier, &tgt.carrier);
        for x in 0..self.ms.nc() {
            if src.mult[x] == 0 {
                continue;
            }
            for i in 0..src.backs.len() {
                for k in 0..src.spaces[x][i].dim() {
                    let col = src.copy(x, i, k);
                    for (j, h) in image(x, i, k) {
                        let v = tgt.spaces[x][j].coords(&h);
                        let blk = m.blocks.get_mut(&x).unwrap();
                        for (r, z) in v.iter().enumerate() {
                            blk[(tgt.copy(x, j, r), col)] += *z;
                        }
                    }
                }
            }
        }
        m
    }

    /// `F*` on ladder morphisms: `g ↦ ψ ∘ (a ▷ g) ∘ (β_{x,a} ▷ s) ∘ (x ▷ φ)`.
    pub fn fstar_mor(&self, src: &Fstar, tgt: &Fstar, f: &LadderMor) -> Result<Morphism> {
        if src.obj != f.src || tgt.obj != f.tgt {
            return Err(Error::Mismatch("ladder morphism does not match the internal homs".into()));
        }
        let ms = &self.ms;
        let sk = &ms.sk;
        let mut m = sk.zero(&src.carrier, &tgt.carrier);
        for (&(i, j, a), coef) in &f.comps {
            let (s, t) = &f.src.summands[i];
            let (u, v) = &f.tgt.summands[j];
            let bs = ms.back_space(*s, *u, a);
            let fsp = ms.front_space(t, v, a);
            let oa = ms.simple(a);
            for p in 0..bs.dim() {
                let mut psi: Option<Morphism> = None;
                for q in 0..fsp.dim() {
                    let z = coef[(p, q)];
                    if z.norm() == 0.0 {
                        continue;
                    }
                    let term = fsp.basis_element(q).scale(z);
                    psi = Some(match psi {
                        None => term,
                        Some(acc) => acc.add(&term),
                    });
                }
                let Some(psi) = psi else { continue };
                let phi = bs.basis_element(p);
                for x in 0..ms.nc() {
                    if src.spaces[x][i].dim() == 0 || tgt.spaces[x][j].dim() == 0 {
                        continue;
                    }
                    let ox = ms.simple(x);
                    let braid = sk.whisker(&Obj::empty(0), &ms.half_braiding(&ms.simple(x), &oa)?, &ms.simple(*s));
                    let pre = sk.whisker(&ox, &phi, &Obj::empty(1)).then(&braid);
                    let blk = m.blocks.get_mut(&x).unwrap();
                    for k in 0..src.spaces[x][i].dim() {
                        let g = sk.whisker(&oa, &src.element(x, i, k), &Obj::empty(1));
                        let h = pre.then(&g).then(&psi);
                        let vv = tgt.spaces[x][j].coords(&h);
                        let col = src.copy(x, i, k);
                        for (r, zz) in vv.iter().enumerate() {
                            blk[(tgt.copy(x, j, r), col)] += *zz;
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// `F(z) = z ▷ S` as a ladder object with its idempotent `z ▷ e`, and
    /// `F*` of that object.
    pub fn f_obj(&self, z: &Obj) -> Result<Arc<(Fstar, Morphism)>> {
        if let Some(v) = self.fstars.lock().unwrap().get(z) {
            return Ok(v.clone());
        }
        let w = Endo::from_left(z.clone());
        let obj = self.diagonal().apply(&w);
        let fs = self.fstar(&obj)?;
        let idem_l = self.ms.ladder_apply(&w, &self.e)?;
        let idem = self.fstar_mor(&fs, &fs, &idem_l)?;
        let v = Arc::new((fs, idem));
        self.fstars.lock().unwrap().insert(z.clone(), v.clone());
        Ok(v)
    }

    pub fn f_idem(&self, z: &Obj) -> Result<LadderMor> {
        self.ms.ladder_apply(&Endo::from_left(z.clone()), &self.e)
    }

    /// `Tr(W)` with its idempotent and image multiplicities.
    pub fn trace(&self, w: &Endo) -> Result<Arc<Trace>> {
        if let Some(t) = self.traces.lock().unwrap().get(w) {
            return Ok(t.clone());
        }
        let obj = self.diagonal().apply(w);
        let fs = self.fstar(&obj)?;
        let el = self.ms.ladder_apply(w, &self.e)?;
        let idem = self.fstar_mor(&fs, &fs, &el)?;
        let mut mult = vec![0u32; self.ms.sk.len()];
        for (c, b) in &idem.blocks {
            mult[*c] = rank(b, 1e-8) as u32;
        }
        let t = Arc::new(Trace { endo: w.clone(), fs, idem, mult });
        self.traces.lock().unwrap().insert(w.clone(), t.clone());
        Ok(t)
    }

    pub fn trace_word(&self, labels: &[Label]) -> Result<Arc<Trace>> {
        self.trace(&self.ms.endo_word(labels))
    }

    /// Residual of `E_W² = E_W`.
    pub fn idempotency_residual(&self, t: &Trace) -> f64 {
        t.idem.then(&t.idem).residual(&t.idem)
    }

    /// Multiplicities of the unprojected carrier of `Tr(W)`.
    pub fn carrier_mult(&self, w: &Endo) -> Result<Vec<u32>> {
        Ok(self.trace(w)?.fs.mult[..self.ms.nc()].to_vec())
    }

    /// Projection of a slot onto one copy of a simple.
    pub fn copy_projection(&self, slot: &Obj, x: Label, cp: usize) -> Morphism {
        let sk = &self.ms.sk;
        let mut m = sk.zero(slot, &self.ms.simple(x));
        m.blocks.get_mut(&x).unwrap()[(0, cp)] = ONE;
        m
    }

    pub fn copy_inclusion(&self, slot: &Obj, x: Label, cp: usize) -> Morphism {
        let sk = &self.ms.sk;
        let mut m = sk.zero(&self.ms.simple(x), slot);
        m.blocks.get_mut(&x).unwrap()[(cp, 0)] = ONE;
        m
    }

    fn unit_insert(&self, s: Label) -> Morphism {
        self.ms.sk.invert(&self.ms.sk.unit_absorb_left(&self.ms.simple(s))).expect("unit absorption is invertible")
    }

    fn diag_index(&self, s: Label) -> usize {
        self.ms.m_index(s)
    }

    /// `F` on base morphisms `f: z -> z'`, before the idempotent of `F(z')`.
    pub fn f_mor_raw(&self, f: &Morphism) -> LadderMor {
        let ms = &self.ms;
        let sk = &ms.sk;
        let src = self.diagonal().apply(&Endo::from_left(f.src.clone()));
        let tgt = self.diagonal().apply(&Endo::from_left(f.tgt.clone()));
        let mut out = ms.ladder_zero(&src, &tgt);
        for (i, &s) in ms.m_labels.iter().enumerate() {
            let os = ms.simple(s);
            let psi = sk.unit_absorb_left(&f.src.concat(&os)).then(&sk.tensor(f, &sk.identity(&os)));
            ms.ladder_add_term(&mut out, (i, i, sk.unit(0)), ONE, &self.unit_insert(s), &psi);
        }
        out
    }

    /// `F(f)` followed by the idempotent of its target.
    pub fn f_mor(&self, f: &Morphism) -> Result<LadderMor> {
        let raw = self.f_mor_raw(f);
        self.ms.ladder_compose(&raw, &self.f_idem(&f.tgt)?)
    }

    /// `η^ℓ_1: 1 -> Tr(id)`.
    pub fn eta_l(&self) -> Result<Morphism> {
        let t = self.trace(&Endo::identity())?;
        let one = self.ms.sk.unit(0);
        let mut m = self.ms.sk.zero(&Obj::empty(0), t.carrier());
        for i in 0..self.ms.m_labels.len() {
            m.blocks.get_mut(&one).unwrap()[(t.fs.copy(one, i, 0), 0)] = ONE;
        }
        Ok(m.then(&t.idem))
    }

    /// `η^ℓ_z: z -> F*(F(z))` for a base word `z`.
    pub fn eta_l_at(&self, z: &Obj) -> Result<Morphism> {
        if z.is_empty() {
            return self.eta_l();
        }
        let ms = &self.ms;
        let sk = &ms.sk;
        let fz = self.f_obj(z)?;
        let (fs, idem) = (&fz.0, &fz.1);
        let bz = sk.basis(z);
        let mut m = sk.zero(z, &fs.carrier);
        for y in bz.charges().collect::<Vec<_>>() {
            let oy = ms.simple(y);
            let split = sk.hom_space(&oy, z);
            for (col, _) in bz.trees(y).iter().enumerate() {
                let tau = split.basis_element(split.index.iter().position(|&(c, r, _)| c == y && r == col).unwrap());
                for (i, &s) in ms.m_labels.iter().enumerate() {
                    let h = sk.tensor(&tau, &sk.identity(&ms.simple(s)));
                    let v = fs.spaces[y][i].coords(&h);
                    let blk = m.blocks.get_mut(&y).unwrap();
                    for (r, zz) in v.iter().enumerate() {
                        blk[(fs.copy(y, i, r), col)] += *zz;
                    }
                }
            }
        }
        Ok(m.then(idem))
    }

    /// `ε^ℓ_L: F(F*(L)) -> L` (unprojected).
    pub fn eps_l(&self, l: &Fstar) -> LadderMor {
        let ms = &self.ms;
        let sk = &ms.sk;
        let c = &l.carrier;
        let src = self.diagonal().apply(&Endo::from_left(c.clone()));
        let mut out = ms.ladder_zero(&src, &l.obj);
        for (j, (u, v)) in l.obj.summands.iter().enumerate() {
            let ou = ms.simple(*u);
            let cu = c.concat(&ou);
            let mut psi = sk.zero(&cu, v);
            for x in 0..ms.nc() {
                for k in 0..l.spaces[x][j].dim() {
                    let pr = sk.tensor(&self.copy_projection(c, x, l.copy(x, j, k)), &sk.identity(&ou));
                    psi = psi.add(&pr.then(&l.element(x, j, k)));
                }
            }
            let psi = sk.unit_absorb_left(&cu).then(&psi);
            ms.ladder_add_term(&mut out, (self.diag_index(*u), j, sk.unit(0)), ONE, &self.unit_insert(*u), &psi);
        }
        out
    }

    /// `η^r_L: L -> F(F*(L))` with weight `ν_x` on the copies of `x`.
    pub fn eta_r_with(&self, l: &Fstar, nu: impl Fn(Label, Label, Label) -> f64) -> Result<LadderMor> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let c = &l.carrier;
        let tgt = self.diagonal().apply(&Endo::from_left(c.clone()));
        let mut out = ms.ladder_zero(&l.obj, &tgt);
        for (j, (u, v)) in l.obj.summands.iter().enumerate() {
            let ou = ms.simple(*u);
            let mut psi = sk.zero(v, &c.concat(&ou));
            for x in 0..ms.nc() {
                for k in 0..l.spaces[x][j].dim() {
                    let inc = sk.tensor(&self.copy_inclusion(c, x, l.copy(x, j, k)), &sk.identity(&ou));
                    let dual = l.spaces[x][j].dual_element(sk, k);
                    let charge = l.spaces[x][j].index[k].0;
                    psi = psi.add(&dual.then(&inc).scale(real(nu(x, *u, charge))));
                }
            }
            let psi = sk.unit_absorb_left(v).then(&psi);
            ms.ladder_add_term(&mut out, (j, self.diag_index(*u), sk.unit(0)), ONE, &self.unit_insert(*u), &psi);
        }
        ms.ladder_compose(&out, &self.f_idem(c)?)
    }

    pub fn eta_r(&self, l: &Fstar) -> Result<LadderMor> {
        self.eta_r_with(l, |x, t, c| self.eta_r_weight(x, t, c))
    }

    /// Weight of the copy of `x` at `(t, c)` in `η^r`: the trace-dual basis
    /// rescaled by `d_x / d_t`.
    pub fn eta_r_weight(&self, x: Label, t: Label, c: Label) -> f64 {
        let ms = &self.ms;
        ms.c_dim(x) / (ms.m_dim(t) * ms.m_dim(c))
    }

    /// `ε^r_1: Tr(id) -> 1`, summing the unit-charge identity copies.
    pub fn eps_r(&self) -> Result<Morphism> {
        let t = self.trace(&Endo::identity())?;
        let one = self.ms.sk.unit(0);
        let mut m = self.ms.sk.zero(t.carrier(), &Obj::empty(0));
        for (i, &s) in self.ms.m_labels.iter().enumerate() {
            let d = self.ms.m_dim(s);
            m.blocks.get_mut(&one).unwrap()[(0, t.fs.copy(one, i, 0))] = real(d * d);
        }
        Ok(t.idem.then(&m))
    }

    /// The structure isomorphism `z ⊗ F*(S) -> F*(z ▷ S)` on carriers.
    pub fn action_iso(&self, z: &Obj) -> Result<Morphism> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let tid = self.trace(&Endo::identity())?;
        let fz = self.f_obj(z)?;
        let fs = &fz.0;
        let src = z.concat(tid.carrier());
        let bsrc = sk.basis(&src);
        let mut m = sk.zero(&src, &fs.carrier);
        for y in bsrc.charges().collect::<Vec<_>>() {
            for (col, tree) in bsrc.trees(y).iter().enumerate() {
                let n = tree.leaves.len();
                let (xp, cp) = tree.leaves[n - 1];
                let y1 = if n >= 2 { tree.charges[n - 2] } else { sk.unit(0) };
                let nu = tree.vtx[n - 1] as usize;
                let (i, k) = tid.fs.locate(xp, cp as usize);
                let s = ms.m_labels[i];
                let os = ms.simple(s);
                // Splitting of the prefix tree: [y1] -> z.
                let prefix = tree.prefix(n - 1, sk.unit(0));
                let zsp = sk.hom_space(&ms.simple(y1), z);
                let bz = sk.basis(z);
                let pidx = bz.index(&prefix).expect("prefix tree of z");
                let tau = zsp.basis_element(zsp.index.iter().position(|&(c, r, _)| c == y1 && r == pidx).unwrap());
                let split = sk.whisker(&Obj::empty(0), &sk.splitting(y1, xp, y, nu), &os);
                let g = sk.whisker(&ms.simple(y1), &tid.fs.element(xp, i, k), &Obj::empty(1));
                let h = split.then(&g).then(&sk.tensor(&tau, &sk.identity(&os)));
                let v = fs.spaces[y][i].coords(&h);
                let blk = m.blocks.get_mut(&y).unwrap();
                for (r, zz) in v.iter().enumerate() {
                    blk[(fs.copy(y, i, r), col)] += *zz;
                }
            }
        }
        Ok(m)
    }

    /// `ε^r_z: F*(F(z)) -> z`.
    pub fn eps_r_at(&self, z: &Obj) -> Result<Morphism> {
        if z.is_empty() {
            return self.eps_r();
        }
        let sk = &self.ms.sk;
        let iso = self.action_iso(z)?;
        let inv = sk.invert(&iso)?;
        let fz = self.f_obj(z)?;
        let zeps = sk.tensor(&sk.identity(z), &self.eps_r()?);
        Ok(fz.1.then(&inv).then(&zeps))
    }

    /// The four zigzag residuals `(F ⊣ F* twice, F* ⊣ F twice)`, checked at
    /// the unit and at every simple pair.
    pub fn zigzag_residuals(&self) -> Result<[f64; 4]> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let e = &self.e;
        let tid = self.trace(&Endo::identity())?;
        let mut out = [0.0f64; 4];

        // ε^ℓ_S ∘ F(η^ℓ) = id_S.
        let f_eta = self.f_mor(&self.eta_l()?)?;
        let z1 = ms.ladder_compose(&ms.ladder_compose(&ms.ladder_compose(e, &f_eta)?, &self.eps_l(&tid.fs))?, e)?;
        out[0] = ms.ladder_residual(&z1, e);

        // F(ε^r) ∘ η^r_S = id_S.
        let f_eps = self.f_mor(&self.eps_r()?)?;
        let z3 = ms.ladder_compose(&ms.ladder_compose(&ms.ladder_compose(e, &self.eta_r(&tid.fs)?)?, &f_eps)?, e)?;
        out[2] = ms.ladder_residual(&z3, e);

        for &s in &ms.m_labels {
            for &t in &ms.m_labels {
                let l = self.fstar(&LadderObj::pair(ms, s, t))?;
                let id = sk.identity(&l.carrier);
                let z = l.carrier.clone();
                let fz = self.f_obj(&z)?;
                // F*(ε^ℓ_L) ∘ η^ℓ_{F*L} = id.
                let fe = self.fstar_mor(&fz.0, &l, &self.eps_l(&l))?;
                out[1] = out[1].max(self.eta_l_at(&z)?.then(&fe).residual(&id));
                // ε^r_{F*L} ∘ F*(η^r_L) = id.
                let fr = self.fstar_mor(&l, &fz.0, &self.eta_r(&l)?)?;
                out[3] = out[3].max(fr.then(&self.eps_r_at(&z)?).residual(&id));
            }
        }
        Ok(out)
    }
}

//! Module categories over a braided fusion category, together with their
//! category of module endofunctors.
//!
//! A module system lives in one colored skeleton: base labels have color
//! `(0,0)`, module labels `(0,1)` and endofunctor labels `(1,1)`. The base acts
//! on module words from the left and endofunctors act from the right, so the
//! mixed F-symbols carry both the module associator and the coherence data of
//! every endofunctor.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{
    label_index, parse_f, symbol_value, FEntry, FusionCategoryData, Label, Morphism, Obj, RawSymbol,
    Residual, Skeleton, SkeletonSpec, ValidationReport,
};
use crate::linalg::C64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawEndofunctor {
    pub name: String,
    /// `object_map[s][t]` = multiplicity of `t` in `y(s)`.
    pub object_map: BTreeMap<String, BTreeMap<String, u32>>,
    /// F-symbol entries `F^{a s y}_t` relating `(a▷s)◁y` and `a▷(s◁y)`.
    #[serde(default)]
    pub coherence: Vec<RawSymbol>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawModule {
    #[serde(default)]
    pub name: Option<String>,
    pub module_labels: Vec<String>,
    pub action: Vec<(String, String, String, u32)>,
    pub module_associator: Vec<RawSymbol>,
    pub endofunctors: Vec<RawEndofunctor>,
    pub endofunctor_unit: String,
    pub endofunctor_fusion: Vec<(String, String, String, u32)>,
    pub endofunctor_dual: BTreeMap<String, String>,
    pub endofunctor_pivotal: BTreeMap<String, [f64; 2]>,
    /// F-symbols for `(s◁y)◁z` and for composites of three endofunctors.
    pub endofunctor_associator: Vec<RawSymbol>,
}

/// A module category with its endofunctor category, all validated.
#[derive(Clone, Debug)]
pub struct ModuleSystem {
    pub name: String,
    pub base: FusionCategoryData,
    pub sk: Arc<Skeleton>,
    pub m_labels: Vec<Label>,
    pub e_labels: Vec<Label>,
    pub regular: bool,
    /// Module dimensions, indexed like `m_labels`.
    pub dims: Vec<f64>,
    pub report: ValidationReport,
    pub dim_residual: f64,
    pub tol: f64,
}

/// An endofunctor `s ↦ z ▷ s ◁ y` for a base word `z` and endofunctor word `y`.
/// The base part carries the module structure coming from the braiding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endo {
    pub left: Obj,
    pub right: Obj,
}

impl Endo {
    pub fn identity() -> Endo {
        Endo { left: Obj::empty(0), right: Obj::empty(1) }
    }

    pub fn from_right(right: Obj) -> Endo {
        Endo { left: Obj::empty(0), right }
    }

    pub fn from_left(left: Obj) -> Endo {
        Endo { left, right: Obj::empty(1) }
    }

    /// The module word `z ▷ w ◁ y`.
    pub fn on(&self, w: &Obj) -> Obj {
        self.left.concat(w).concat(&self.right)
    }

    /// `x ∘ y`: apply `y` first, then `x`.
    pub fn after(&self, y: &Endo) -> Endo {
        Endo { left: self.left.concat(&y.left), right: y.right.concat(&self.right) }
    }

    pub fn is_identity(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }
}

fn names_of(names: &[String], prefix: &str) -> Vec<String> {
    names.iter().map(|n| format!("{prefix}{n}")).collect()
}

impl ModuleSystem {
    /// The regular module: the base acting on itself, with endofunctors given
    /// by right multiplication.
    pub fn regular(base: &FusionCategoryData) -> Result<ModuleSystem> {
        let bsk = &base.sk;
        let nc = bsk.len();
        let m = |l: Label| nc + l;
        let e = |l: Label| 2 * nc + l;
        let mut names = bsk.names().to_vec();
        names.extend(names_of(bsk.names(), "M:"));
        names.extend(names_of(bsk.names(), "E:"));
        let mut colors = vec![(0, 0); nc];
        colors.extend(vec![(0, 1); nc]);
        colors.extend(vec![(1, 1); nc]);
        let mut dual: Vec<Option<Label>> = (0..nc).map(|l| bsk.dual(l)).collect();
        dual.extend(vec![None; nc]);
        dual.extend((0..nc).map(|l| bsk.dual(l).map(e)));
        let mut pivotal: Vec<C64> = (0..nc).map(|l| bsk.pivotal(l)).collect();
        pivotal.extend(vec![C64::new(1.0, 0.0); nc]);
        pivotal.extend((0..nc).map(|l| bsk.pivotal(l)));
        let mut fusion = Vec::new();
        for a in 0..nc {
            for b in 0..nc {
                for c in 0..nc {
                    let n = bsk.n(a, b, c);
                    if n > 0 {
                        fusion.push((a, b, c, n));
                        fusion.push((a, m(b), m(c), n));
                        fusion.push((m(a), e(b), m(c), n));
                        fusion.push((e(a), e(b), e(c), n));
                    }
                }
            }
        }
        let spec = base.raw.to_spec()?;
        let mut f = Vec::new();
        // (a, b, c, d, e, f) colorings: CCC, CCM, CME, MEE, EEE.
        let patterns: [[u8; 6]; 5] =
            [[0, 0, 0, 0, 0, 0], [0, 0, 1, 1, 0, 1], [0, 1, 2, 1, 1, 1], [1, 2, 2, 1, 1, 2], [2, 2, 2, 2, 2, 2]];
        for ent in &spec.f {
            for p in &patterns {
                let mut labels = ent.labels;
                for (k, l) in labels.iter_mut().enumerate() {
                    *l += p[k] as usize * nc;
                }
                f.push(FEntry { labels, idx: ent.idx, value: ent.value });
            }
        }
        let sspec = SkeletonSpec { names, colors, dual, fusion, f, r: spec.r.clone(), pivotal };
        let m_labels = (0..nc).map(m).collect();
        let e_labels = (0..nc).map(e).collect();
        ModuleSystem::finish(format!("{}-regular", base.name), base.clone(), sspec, m_labels, e_labels, true)
    }

    /// Loads a module file over `base`; `tol` overrides the base tolerance.
    pub fn load(text: &str, base: &FusionCategoryData) -> Result<ModuleSystem> {
        let raw: RawModule = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        ModuleSystem::from_raw(&raw, base)
    }

    pub fn from_raw(raw: &RawModule, base: &FusionCategoryData) -> Result<ModuleSystem> {
        let spec = base.raw.to_spec()?;
        let nc = spec.names.len();
        let mut names = spec.names.clone();
        names.extend(raw.module_labels.iter().cloned());
        names.extend(raw.endofunctors.iter().map(|y| y.name.clone()));
        let nm = raw.module_labels.len();
        let ne = raw.endofunctors.len();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::Schema(format!("label {n:?} is used twice")));
            }
        }
        let mut colors = vec![(0, 0); nc];
        colors.extend(vec![(0, 1); nm]);
        colors.extend(vec![(1, 1); ne]);
        let idx = |l: &str| label_index(&names, l);
        let check_color = |l: Label, c: (u8, u8), what: &str| -> Result<Label> {
            if colors[l] != c {
                return Err(Error::Schema(format!("{:?} is not a {what} label", names[l])));
            }
            Ok(l)
        };
        let e_unit = check_color(idx(&raw.endofunctor_unit)?, (1, 1), "endofunctor")?;
        if e_unit != nc + nm {
            return Err(Error::Schema("the endofunctor unit must be listed first".into()));
        }
        let mut dual = spec.dual.clone();
        dual.extend(vec![None; nm + ne]);
        for (a, b) in &raw.endofunctor_dual {
            let a = check_color(idx(a)?, (1, 1), "endofunctor")?;
            dual[a] = Some(check_color(idx(b)?, (1, 1), "endofunctor")?);
        }
        let mut pivotal = spec.pivotal.clone();
        pivotal.extend(vec![C64::new(1.0, 0.0); nm + ne]);
        for (a, v) in &raw.endofunctor_pivotal {
            pivotal[check_color(idx(a)?, (1, 1), "endofunctor")?] = symbol_value(*v);
        }
        for l in nc + nm..nc + nm + ne {
            if dual[l].is_none() || !raw.endofunctor_pivotal.contains_key(&names[l]) {
                return Err(Error::Schema(format!("endofunctor {:?} lacks dual or pivotal data", names[l])));
            }
        }
        let mut fusion = spec.fusion.clone();
        for (a, s, t, n) in &raw.action {
            fusion.push((check_color(idx(a)?, (0, 0), "base")?, check_color(idx(s)?, (0, 1), "module")?, idx(t)?, *n));
        }
        for y in &raw.endofunctors {
            let yl = idx(&y.name)?;
            for (s, row) in &y.object_map {
                let s = check_color(idx(s)?, (0, 1), "module")?;
                for (t, n) in row {
                    fusion.push((s, yl, check_color(idx(t)?, (0, 1), "module")?, *n));
                }
            }
        }
        for (a, b, c, n) in &raw.endofunctor_fusion {
            fusion.push((idx(a)?, idx(b)?, idx(c)?, *n));
        }
        let mut f = spec.f.clone();
        f.extend(parse_f(&names, &raw.module_associator)?);
        for y in &raw.endofunctors {
            f.extend(parse_f(&names, &y.coherence)?);
        }
        f.extend(parse_f(&names, &raw.endofunctor_associator)?);
        let sspec = SkeletonSpec { names, colors, dual, fusion, f, r: spec.r.clone(), pivotal };
        let name = raw.name.clone().unwrap_or_else(|| "module".into());
        ModuleSystem::finish(name, base.clone(), sspec, (nc..nc + nm).collect(), (nc + nm..nc + nm + ne).collect(), false)
    }

    fn finish(
        name: String,
        base: FusionCategoryData,
        spec: SkeletonSpec,
        m_labels: Vec<Label>,
        e_labels: Vec<Label>,
        regular: bool,
    ) -> Result<ModuleSystem> {
        let tol = base.tol;
        let sk = Skeleton::new(spec)?;
        let report = sk.validation_report()?;
        for (eq, r) in report.entries() {
            if r.value > tol {
                return Err(Error::Residual { equation: format!("module {eq}"), residual: r.value, tol, instance: r.worst.clone() });
            }
        }
        let (dims, dim_residual) = module_dims(&sk, &base, &m_labels, &e_labels)?;
        if dim_residual > tol {
            return Err(Error::Residual {
                equation: "module dimensions".into(),
                residual: dim_residual,
                tol,
                instance: name.clone(),
            });
        }
        Ok(ModuleSystem { name, base, sk: Arc::new(sk), m_labels, e_labels, regular, dims, report, dim_residual, tol })
    }

    pub fn nc(&self) -> usize {
        self.base.sk.len()
    }

    pub fn c_labels(&self) -> std::ops::Range<Label> {
        0..self.nc()
    }

    pub fn m_index(&self, s: Label) -> usize {
        self.m_labels.iter().position(|&m| m == s).expect("module label")
    }

    pub fn m_dim(&self, s: Label) -> f64 {
        self.dims[self.m_index(s)]
    }

    pub fn c_dim(&self, a: Label) -> f64 {
        self.base.qdim(a)
    }

    /// `D² = Σ_a d_a²` over the base.
    pub fn global_dim_sq(&self) -> f64 {
        self.base.global_dim_sq()
    }

    pub fn label(&self, name: &str) -> Result<Label> {
        self.sk.label(name).ok_or_else(|| Error::Invalid(format!("unknown label {name:?}")))
    }

    /// Looks up an endofunctor label; on the regular module a base label name
    /// refers to right multiplication by that label.
    pub fn endofunctor_label(&self, name: &str) -> Result<Label> {
        if let Some(l) = self.sk.label(name) {
            if self.e_labels.contains(&l) {
                return Ok(l);
            }
            if self.regular && l < self.nc() {
                return Ok(self.e_labels[l]);
            }
        }
        Err(Error::Invalid(format!("{name:?} is not an endofunctor of {}", self.name)))
    }

    pub fn simple(&self, l: Label) -> Obj {
        Obj::simple(&self.sk, l)
    }

    /// `dim Hom(x ▷ m, n)` for every base simple `x`.
    pub fn internal_hom(&self, m: Label, n: Label) -> Vec<u32> {
        self.c_labels().map(|x| self.sk.n(x, m, n)).collect()
    }

    /// Right multiplication by a base object given as a multiplicity vector.
    pub fn endofunctor_from_object(&self, y: &[u32]) -> Result<Endo> {
        if !self.regular {
            return Err(Error::Invalid("endofunctor_from_object needs the regular module".into()));
        }
        if y.len() != self.nc() {
            return Err(Error::Mismatch("multiplicity vector has the wrong length".into()));
        }
        if y.iter().all(|&n| n == 0) {
            return Err(Error::Invalid("zero object".into()));
        }
        let mut mult = vec![0; self.sk.len()];
        for (l, &n) in y.iter().enumerate() {
            mult[self.e_labels[l]] = n;
        }
        let slot = crate::fusion::Slot::from_mult(mult);
        Ok(Endo::from_right(Obj::from_slots(&self.sk, vec![slot])))
    }

    pub fn endo_word(&self, labels: &[Label]) -> Endo {
        if labels.is_empty() {
            Endo::identity()
        } else {
            Endo::from_right(Obj::word(&self.sk, labels))
        }
    }

    /// Multiplicity vector (over module labels) of `y(s)`.
    pub fn object_map(&self, y: &Endo, s: Label) -> Vec<u32> {
        let b = self.sk.basis(&y.on(&self.simple(s)));
        self.m_labels.iter().map(|&t| b.dim(t) as u32).collect()
    }

    /// `y(f)` for a morphism between module words.
    pub fn apply_endofunctor(&self, y: &Endo, f: &Morphism) -> Morphism {
        self.sk.whisker(&y.left, f, &y.right)
    }

    pub fn compose_endofunctors(&self, x: &Endo, y: &Endo) -> Endo {
        x.after(y)
    }

    pub fn endofunctor_dual(&self, y: &Endo) -> Result<Endo> {
        Ok(Endo { left: self.sk.dual_word(&y.left)?, right: self.sk.dual_word(&y.right)? })
    }

    /// Module structure `a ▷ y(w) -> y(a ▷ w)` of an endofunctor, i.e. the
    /// braiding of `a` past the base part of `y`.
    pub fn module_structure(&self, y: &Endo, a: &Obj, w: &Obj) -> Result<Morphism> {
        let b = self.sk.braid_words(a, &y.left, false)?;
        Ok(self.sk.whisker(&Obj::empty(0), &b, &w.concat(&y.right)))
    }

    /// `p q -> q p` as `β^{-1}_{q,p}`, the half-braiding of base objects inside `Φ`.
    pub fn half_braiding(&self, p: &Obj, q: &Obj) -> Result<Morphism> {
        self.sk.braid_words(q, p, true)
    }

    /// Snake residual of the right-dual pair `(y, y*)` on every module simple.
    pub fn endofunctor_snake_residual(&self, y: &Endo) -> Result<f64> {
        let w = &y.right;
        let wd = self.sk.dual_word(w)?;
        let mut worst: f64 = 0.0;
        for &s in &self.m_labels {
            let os = self.simple(s);
            let sw = os.concat(w);
            let left = self.sk.whisker(&os, &self.sk.coev_word(w)?, w).then(&self.sk.whisker(&sw, &self.sk.ev_word(w)?, &Obj::empty(1)));
            worst = worst.max(left.residual(&self.sk.identity(&sw)));
            let swd = os.concat(&wd);
            let right = self
                .sk
                .whisker(&swd, &self.sk.coev_word(w)?, &Obj::empty(1))
                .then(&self.sk.whisker(&os, &self.sk.ev_word(w)?, &wd));
            worst = worst.max(right.residual(&self.sk.identity(&swd)));
        }
        Ok(worst)
    }
}

/// Perron–Frobenius dimensions of the module simples, normalized so that
/// `Σ_s d_s² = Σ_a d_a²`, together with the worst consistency residual of
/// `d_a d_s = Σ_t n_{as}^t d_t` and `d_s d_y = Σ_t n_{sy}^t d_t`.
fn module_dims(sk: &Skeleton, base: &FusionCategoryData, ms: &[Label], es: &[Label]) -> Result<(Vec<f64>, f64)> {
    let nm = ms.len();
    let nc = base.sk.len();
    let mut total = nalgebra::DMatrix::<f64>::zeros(nm, nm);
    for a in 0..nc {
        for (i, &s) in ms.iter().enumerate() {
            for (j, &t) in ms.iter().enumerate() {
                total[(j, i)] += sk.n(a, s, t) as f64;
            }
        }
    }
    let mut v = nalgebra::DVector::<f64>::from_element(nm, 1.0);
    for _ in 0..2000 {
        let w = &total * &v + &v;
        let w = w.normalize();
        if (&w - &v).norm() < 1e-15 {
            v = w;
            break;
        }
        v = w;
    }
    let d2 = base.global_dim_sq();
    let scale = (d2 / v.norm_squared()).sqrt();
    let dims: Vec<f64> = v.iter().map(|x| x * scale).collect();
    let mut res = Residual::zero();
    for a in 0..nc {
        let da = base.qdim(a);
        for (i, &s) in ms.iter().enumerate() {
            let rhs: f64 = ms.iter().enumerate().map(|(j, &t)| sk.n(a, s, t) as f64 * dims[j]).sum();
            res.record((da * dims[i] - rhs).abs(), || format!("{} acting on {}", sk.name(a), sk.name(s)));
        }
    }
    for &y in es {
        let dy = sk.qdim(y)?.re;
        for (i, &s) in ms.iter().enumerate() {
            let rhs: f64 = ms.iter().enumerate().map(|(j, &t)| sk.n(s, y, t) as f64 * dims[j]).sum();
            res.record((dy * dims[i] - rhs).abs(), || format!("{} acting on {}", sk.name(y), sk.name(s)));
        }
    }
    Ok((dims, res.value))
}

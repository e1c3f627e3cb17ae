//! Skeletal data for a (colored) multifusion system: simples, fusion
//! multiplicities, F- and R-blocks, duals and pivotal coefficients.
//!
//! Every simple carries a pair of colors `(left, right)`. A plain fusion
//! category uses a single color `(0, 0)`; module systems add a module color
//! `(0, 1)` and an endofunctor color `(1, 1)`. Two simples can be tensored when
//! the right color of the first equals the left color of the second.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::linalg::{inverse, CMat, C64, ZERO};

use super::basis::{Basis, Obj};
use super::tensor::PairChange;

pub type Label = usize;
pub type Color = (u8, u8);

/// One vertex-multiplicity-resolved F-symbol entry
/// `F^{abc}_d[(e, alpha, beta), (f, mu, nu)]`.
#[derive(Clone, Debug)]
pub struct FEntry {
    pub labels: [Label; 6],
    pub idx: [usize; 4],
    pub value: C64,
}

/// `R^{ab}_c[mu, nu]`.
#[derive(Clone, Debug)]
pub struct REntry {
    pub labels: [Label; 3],
    pub idx: [usize; 2],
    pub value: C64,
}

#[derive(Clone, Debug, Default)]
pub struct SkeletonSpec {
    pub names: Vec<String>,
    pub colors: Vec<Color>,
    pub dual: Vec<Option<Label>>,
    pub fusion: Vec<(Label, Label, Label, u32)>,
    pub f: Vec<FEntry>,
    pub r: Option<Vec<REntry>>,
    pub pivotal: Vec<C64>,
}

/// The square F-block for a fixed `(a, b, c, d)`; rows are left-associated
/// channels `(e, alpha, beta)`, columns right-associated channels `(f, mu, nu)`.
#[derive(Clone, Debug)]
pub struct FBlock {
    pub rows: Vec<(Label, usize, usize)>,
    pub cols: Vec<(Label, usize, usize)>,
    pub mat: CMat,
    pub inv: CMat,
    row_index: HashMap<(Label, usize, usize), usize>,
    col_index: HashMap<(Label, usize, usize), usize>,
}

impl FBlock {
    pub fn row(&self, key: (Label, usize, usize)) -> Option<usize> {
        self.row_index.get(&key).copied()
    }
    pub fn col(&self, key: (Label, usize, usize)) -> Option<usize> {
        self.col_index.get(&key).copied()
    }
}

#[derive(Default)]
pub(crate) struct Caches {
    pub basis: Mutex<HashMap<Obj, std::sync::Arc<Basis>>>,
    pub pairs: Mutex<HashMap<(Obj, Obj), std::sync::Arc<PairChange>>>,
}

pub struct Skeleton {
    names: Vec<String>,
    colors: Vec<Color>,
    units: BTreeMap<u8, Label>,
    dual: Vec<Option<Label>>,
    nmult: Vec<u32>,
    fblocks: BTreeMap<(Label, Label, Label, Label), FBlock>,
    rblocks: Option<BTreeMap<(Label, Label, Label), CMat>>,
    pivotal: Vec<C64>,
    pub(crate) cache: Caches,
}

impl Clone for Skeleton {
    fn clone(&self) -> Self {
        Skeleton {
            names: self.names.clone(),
            colors: self.colors.clone(),
            units: self.units.clone(),
            dual: self.dual.clone(),
            nmult: self.nmult.clone(),
            fblocks: self.fblocks.clone(),
            rblocks: self.rblocks.clone(),
            pivotal: self.pivotal.clone(),
            cache: Caches::default(),
        }
    }
}

impl std::fmt::Debug for Skeleton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Skeleton").field("labels", &self.names).finish()
    }
}

impl Skeleton {
    /// Builds blocks from raw entries and checks the combinatorial axioms
    /// (composability, associativity of N, unit and duality rules).
    pub fn new(spec: SkeletonSpec) -> Result<Skeleton> {
        let nl = spec.names.len();
        if spec.colors.len() != nl || spec.dual.len() != nl || spec.pivotal.len() != nl {
            return Err(Error::Schema("per-label tables have inconsistent lengths".into()));
        }
        let mut nmult = vec![0u32; nl * nl * nl];
        for &(a, b, c, n) in &spec.fusion {
            if a >= nl || b >= nl || c >= nl {
                return Err(Error::Schema("fusion entry references unknown label".into()));
            }
            let (ca, cb, cc) = (spec.colors[a], spec.colors[b], spec.colors[c]);
            if n > 0 && (ca.1 != cb.0 || cc != (ca.0, cb.1)) {
                return Err(Error::Schema(format!(
                    "fusion {} x {} -> {} is not color-composable",
                    spec.names[a], spec.names[b], spec.names[c]
                )));
            }
            nmult[(a * nl + b) * nl + c] = n;
        }
        let mut units = BTreeMap::new();
        for (l, col) in spec.colors.iter().enumerate() {
            if col.0 == col.1 && !units.contains_key(&col.0) {
                // The unit of a color is its first simple that fuses trivially.
                let is_unit = (0..nl).all(|b| {
                    let cb = spec.colors[b];
                    if cb.0 != col.1 {
                        return true;
                    }
                    (0..nl).all(|t| nmult[(l * nl + b) * nl + t] == u32::from(t == b))
                });
                if is_unit {
                    units.insert(col.0, l);
                }
            }
        }
        let mut sk = Skeleton {
            names: spec.names,
            colors: spec.colors,
            units,
            dual: spec.dual,
            nmult,
            fblocks: BTreeMap::new(),
            rblocks: None,
            pivotal: spec.pivotal,
            cache: Caches::default(),
        };
        sk.check_combinatorics()?;
        sk.build_fblocks(&spec.f)?;
        if let Some(r) = &spec.r {
            sk.build_rblocks(r)?;
        }
        Ok(sk)
    }

    fn check_combinatorics(&self) -> Result<()> {
        let nl = self.len();
        for col in self.colors.iter() {
            if col.0 == col.1 && !self.units.contains_key(&col.0) {
                return Err(Error::UnitDual(format!("no unit object for color {}", col.0)));
            }
        }
        for a in 0..nl {
            let ca = self.colors[a];
            let ul = self.units.get(&ca.0).copied();
            let ur = self.units.get(&ca.1).copied();
            for b in 0..nl {
                let want = u32::from(a == b);
                if let Some(u) = ul {
                    if self.colors[b] == ca && (self.n(u, a, b) != want) {
                        return Err(Error::UnitDual(format!("N_{{1,{}}}^{} != delta", self.names[a], self.names[b])));
                    }
                }
                if let Some(u) = ur {
                    if self.colors[b] == ca && self.n(a, u, b) != want {
                        return Err(Error::UnitDual(format!("N_{{{},1}}^{} != delta", self.names[a], self.names[b])));
                    }
                }
            }
            if let Some(ad) = self.dual[a] {
                if ad >= nl || self.dual[ad] != Some(a) {
                    return Err(Error::UnitDual(format!("dual of {} is not an involution", self.names[a])));
                }
                let cd = self.colors[ad];
                if cd != (ca.1, ca.0) {
                    return Err(Error::UnitDual(format!("dual of {} has wrong color", self.names[a])));
                }
                let u = ul.ok_or_else(|| Error::UnitDual("dual needs a unit".into()))?;
                for b in 0..nl {
                    if self.colors[b].0 != ca.1 || self.colors[b].1 != ca.0 {
                        continue;
                    }
                    let want = u32::from(b == ad);
                    if self.n(a, b, u) != want {
                        return Err(Error::UnitDual(format!(
                            "N_{{{},{}}}^1 = {} but expected {}",
                            self.names[a], self.names[b], self.n(a, b, u), want
                        )));
                    }
                }
            }
        }
        for a in 0..nl {
            for b in 0..nl {
                for c in 0..nl {
                    for d in 0..nl {
                        let lhs: u32 = (0..nl).map(|e| self.n(a, b, e) * self.n(e, c, d)).sum();
                        let rhs: u32 = (0..nl).map(|f| self.n(b, c, f) * self.n(a, f, d)).sum();
                        if lhs != rhs {
                            return Err(Error::Associativity(
                                self.names[a].clone(),
                                self.names[b].clone(),
                                self.names[c].clone(),
                                self.names[d].clone(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn build_fblocks(&mut self, entries: &[FEntry]) -> Result<()> {
        let nl = self.len();
        let mut values: HashMap<([Label; 6], [usize; 4]), C64> = HashMap::new();
        for en in entries {
            let [a, b, c, d, e, f] = en.labels;
            if en.labels.iter().any(|&l| l >= nl) {
                return Err(Error::Schema("F entry references unknown label".into()));
            }
            let [al, be, mu, nu] = en.idx;
            let ok = (al as u32) < self.n(a, b, e)
                && (be as u32) < self.n(e, c, d)
                && (mu as u32) < self.n(b, c, f)
                && (nu as u32) < self.n(a, f, d);
            if !ok {
                return Err(Error::Schema(format!(
                    "F entry {:?} {:?} is not admissible",
                    en.labels.map(|l| self.names[l].clone()),
                    en.idx
                )));
            }
            values.insert((en.labels, en.idx), en.value);
        }
        for a in 0..nl {
            for b in 0..nl {
                for c in 0..nl {
                    for d in 0..nl {
                        let mut rows = Vec::new();
                        for e in 0..nl {
                            for al in 0..self.n(a, b, e) as usize {
                                for be in 0..self.n(e, c, d) as usize {
                                    rows.push((e, al, be));
                                }
                            }
                        }
                        if rows.is_empty() {
                            continue;
                        }
                        let mut cols = Vec::new();
                        for f in 0..nl {
                            for mu in 0..self.n(b, c, f) as usize {
                                for nu in 0..self.n(a, f, d) as usize {
                                    cols.push((f, mu, nu));
                                }
                            }
                        }
                        let mut mat = CMat::zeros(rows.len(), cols.len());
                        for (i, &(e, al, be)) in rows.iter().enumerate() {
                            for (j, &(f, mu, nu)) in cols.iter().enumerate() {
                                if let Some(v) = values.get(&([a, b, c, d, e, f], [al, be, mu, nu])) {
                                    mat[(i, j)] = *v;
                                }
                            }
                        }
                        let at = format!("F^{{{},{},{}}}_{}", self.names[a], self.names[b], self.names[c], self.names[d]);
                        let inv = inverse(&mat).ok_or(Error::Singular { kind: "F", at })?;
                        let row_index = rows.iter().enumerate().map(|(i, k)| (*k, i)).collect();
                        let col_index = cols.iter().enumerate().map(|(i, k)| (*k, i)).collect();
                        self.fblocks.insert((a, b, c, d), FBlock { rows, cols, mat, inv, row_index, col_index });
                    }
                }
            }
        }
        Ok(())
    }

    fn build_rblocks(&mut self, entries: &[REntry]) -> Result<()> {
        let nl = self.len();
        let mut blocks: BTreeMap<(Label, Label, Label), CMat> = BTreeMap::new();
        for a in 0..nl {
            for b in 0..nl {
                for c in 0..nl {
                    let n = self.n(a, b, c) as usize;
                    let braided = self.colors[a] == (0, 0) && self.colors[b] == (0, 0);
                    if braided && n > 0 && self.n(b, a, c) as usize == n {
                        blocks.insert((a, b, c), CMat::zeros(n, n));
                    }
                }
            }
        }
        for en in entries {
            let [a, b, c] = en.labels;
            if en.labels.iter().any(|&l| l >= nl) {
                return Err(Error::Schema("R entry references unknown label".into()));
            }
            let Some(m) = blocks.get_mut(&(a, b, c)) else {
                return Err(Error::Schema(format!(
                    "R entry for non-admissible channel ({}, {}; {})",
                    self.names[a], self.names[b], self.names[c]
                )));
            };
            let [mu, nu] = en.idx;
            if mu >= m.nrows() || nu >= m.ncols() {
                return Err(Error::Schema("R entry index out of range".into()));
            }
            m[(mu, nu)] = en.value;
        }
        for ((a, b, c), m) in blocks.iter() {
            if inverse(m).is_none() {
                return Err(Error::Singular {
                    kind: "R",
                    at: format!("R^{{{},{}}}_{}", self.names[*a], self.names[*b], self.names[*c]),
                });
            }
        }
        self.rblocks = Some(blocks);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, l: Label) -> &str {
        &self.names[l]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.names.iter().position(|n| n == name)
    }

    pub fn color(&self, l: Label) -> Color {
        self.colors[l]
    }

    pub fn unit(&self, color: u8) -> Label {
        self.units[&color]
    }

    pub fn is_unit(&self, l: Label) -> bool {
        let c = self.colors[l];
        c.0 == c.1 && self.units.get(&c.0) == Some(&l)
    }

    pub fn dual(&self, l: Label) -> Option<Label> {
        self.dual[l]
    }

    pub fn pivotal(&self, l: Label) -> C64 {
        self.pivotal[l]
    }

    #[inline]
    pub fn n(&self, a: Label, b: Label, c: Label) -> u32 {
        let nl = self.names.len();
        self.nmult[(a * nl + b) * nl + c]
    }

    pub fn labels_of_color(&self, col: Color) -> Vec<Label> {
        (0..self.len()).filter(|&l| self.colors[l] == col).collect()
    }

    pub fn fblock(&self, a: Label, b: Label, c: Label, d: Label) -> Option<&FBlock> {
        self.fblocks.get(&(a, b, c, d))
    }

    pub fn fblocks(&self) -> impl Iterator<Item = (&(Label, Label, Label, Label), &FBlock)> {
        self.fblocks.iter()
    }

    /// Single entry of F, zero when not admissible.
    pub fn f(&self, abcd: (Label, Label, Label, Label), row: (Label, usize, usize), col: (Label, usize, usize)) -> C64 {
        let Some(bl) = self.fblocks.get(&abcd) else { return ZERO };
        match (bl.row(row), bl.col(col)) {
            (Some(i), Some(j)) => bl.mat[(i, j)],
            _ => ZERO,
        }
    }

    /// Entry of the inverse block, indexed `[(f, mu, nu), (e, alpha, beta)]`.
    pub fn finv(&self, abcd: (Label, Label, Label, Label), col: (Label, usize, usize), row: (Label, usize, usize)) -> C64 {
        let Some(bl) = self.fblocks.get(&abcd) else { return ZERO };
        match (bl.col(col), bl.row(row)) {
            (Some(j), Some(i)) => bl.inv[(j, i)],
            _ => ZERO,
        }
    }

    pub fn has_braiding(&self) -> bool {
        self.rblocks.is_some()
    }

    pub fn rblock(&self, a: Label, b: Label, c: Label) -> Option<&CMat> {
        self.rblocks.as_ref()?.get(&(a, b, c))
    }

    /// Replaces one R-entry without revalidating; used for fault injection.
    pub fn with_r_entry(&self, a: Label, b: Label, c: Label, mu: usize, nu: usize, value: C64) -> Skeleton {
        let mut sk = self.clone();
        if let Some(m) = sk.rblocks.as_mut().and_then(|r| r.get_mut(&(a, b, c))) {
            m[(mu, nu)] = value;
        }
        sk
    }
}

//! Morphisms between words as per-charge block matrices in the left-nested
//! tree bases, and coordinate systems on hom spaces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, CMat, CVec, C64, ZERO};

use super::basis::Obj;
use super::skeleton::{Label, Skeleton};

/// A morphism `src -> tgt`. The block at charge `c` has shape
/// `dim_c(tgt) x dim_c(src)`; entry `(i, j)` is the coefficient of
/// `fusion_i(tgt) ∘ f ∘ splitting_j(src)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub src: Obj,
    pub tgt: Obj,
    pub blocks: BTreeMap<Label, CMat>,
}

impl Morphism {
    pub fn block(&self, c: Label) -> Option<&CMat> {
        self.blocks.get(&c)
    }

    pub fn scale(&self, z: C64) -> Morphism {
        let mut m = self.clone();
        for b in m.blocks.values_mut() {
            *b *= z;
        }
        m
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        self.assert_parallel(other);
        let mut m = self.clone();
        for (c, b) in m.blocks.iter_mut() {
            *b += &other.blocks[c];
        }
        m
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    fn assert_parallel(&self, other: &Morphism) {
        assert!(self.src == other.src && self.tgt == other.tgt, "morphisms are not parallel");
    }

    /// Max-abs entrywise difference; panics when not parallel.
    pub fn residual(&self, other: &Morphism) -> f64 {
        self.assert_parallel(other);
        self.blocks.iter().fold(0.0, |acc, (c, b)| acc.max(max_abs_diff(b, &other.blocks[c])))
    }

    pub fn norm_max(&self) -> f64 {
        self.blocks.values().fold(0.0, |acc, b| acc.max(crate::linalg::max_abs(b)))
    }

    /// `self` followed by `g`, i.e. `g ∘ self`.
    pub fn then(&self, g: &Morphism) -> Morphism {
        compose(self, g).expect("composable morphisms")
    }
}

/// `compose(f, g) = g ∘ f`; requires `tgt(f) = src(g)`.
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if f.tgt != g.src {
        return Err(Error::Mismatch("target of first morphism differs from source of second".into()));
    }
    let mut keys: Vec<Label> = f.blocks.keys().chain(g.blocks.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mut blocks = BTreeMap::new();
    for c in keys {
        let b = match (f.blocks.get(&c), g.blocks.get(&c)) {
            (Some(fb), Some(gb)) => gb * fb,
            (Some(fb), None) => CMat::zeros(0, fb.ncols()),
            (None, Some(gb)) => CMat::zeros(gb.nrows(), 0),
            (None, None) => unreachable!(),
        };
        if b.nrows() > 0 || b.ncols() > 0 {
            blocks.insert(c, b);
        }
    }
    let out = Morphism { src: f.src.clone(), tgt: g.tgt.clone(), blocks };
    Ok(out)
}

impl Skeleton {
    pub fn zero(&self, src: &Obj, tgt: &Obj) -> Morphism {
        let bs = self.basis(src);
        let bt = self.basis(tgt);
        let blocks = bs
            .charges()
            .chain(bt.charges())
            .map(|c| (c, CMat::zeros(bt.dim(c), bs.dim(c))))
            .collect();
        Morphism { src: src.clone(), tgt: tgt.clone(), blocks }
    }

    pub fn identity(&self, obj: &Obj) -> Morphism {
        let b = self.basis(obj);
        let blocks = b.charges().map(|c| (c, CMat::identity(b.dim(c), b.dim(c)))).collect();
        Morphism { src: obj.clone(), tgt: obj.clone(), blocks }
    }

    /// Fills a morphism from a function of `(charge, row tree index, col tree index)`.
    pub fn morphism_from_fn(&self, src: &Obj, tgt: &Obj, mut f: impl FnMut(Label, usize, usize) -> C64) -> Morphism {
        let mut m = self.zero(src, tgt);
        for (c, b) in m.blocks.iter_mut() {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    b[(i, j)] = f(*c, i, j);
                }
            }
        }
        m
    }

    pub fn hom_space(&self, src: &Obj, tgt: &Obj) -> HomSpace {
        let bs = self.basis(src);
        let bt = self.basis(tgt);
        let mut index = Vec::new();
        for c in bs.charges() {
            for r in 0..bt.dim(c) {
                for k in 0..bs.dim(c) {
                    index.push((c, r, k));
                }
            }
        }
        HomSpace { src: src.clone(), tgt: tgt.clone(), index, template: self.zero(src, tgt) }
    }
}

/// Coordinates on `Hom(src, tgt)` given by matrix units of the tree bases.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub src: Obj,
    pub tgt: Obj,
    pub index: Vec<(Label, usize, usize)>,
    template: Morphism,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn basis_element(&self, i: usize) -> Morphism {
        let mut m = self.template.clone();
        let (c, r, k) = self.index[i];
        m.blocks.get_mut(&c).unwrap()[(r, k)] = C64::new(1.0, 0.0);
        m
    }

    /// The element dual to `basis_element(i)` under the composition pairing
    /// (lives in the reversed space).
    pub fn dual_element(&self, sk: &Skeleton, i: usize) -> Morphism {
        let (c, r, k) = self.index[i];
        let mut m = sk.zero(&self.tgt, &self.src);
        m.blocks.get_mut(&c).unwrap()[(k, r)] = C64::new(1.0, 0.0);
        m
    }

    pub fn coords(&self, m: &Morphism) -> CVec {
        assert!(m.src == self.src && m.tgt == self.tgt, "morphism not in this hom space");
        CVec::from_iterator(self.index.len(), self.index.iter().map(|&(c, r, k)| m.blocks[&c][(r, k)]))
    }

    pub fn from_coords(&self, v: &[C64]) -> Morphism {
        let mut m = self.template.clone();
        for (x, &(c, r, k)) in v.iter().zip(self.index.iter()) {
            m.blocks.get_mut(&c).unwrap()[(r, k)] = *x;
        }
        m
    }

    pub fn zero(&self) -> Morphism {
        self.template.clone()
    }

    pub fn from_vec(&self, v: &CVec) -> Morphism {
        let xs: Vec<C64> = v.iter().copied().collect();
        self.from_coords(&xs)
    }

    pub fn zero_coords(&self) -> CVec {
        CVec::from_element(self.index.len(), ZERO)
    }
}

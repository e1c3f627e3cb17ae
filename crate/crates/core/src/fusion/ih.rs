//! Change of basis between the two channel decompositions of `Hom(a⊗b, c⊗d)`.
//!
//! The vertical ("I") family fuses `a⊗b` into an intermediate `e` and splits
//! it into `c⊗d`; the horizontal ("H") family splits `a` into `c⊗f` and fuses
//! `f⊗b` into `d`.

use crate::error::{Error, Result};
use crate::linalg::{inverse, CMat, CVec};

use super::basis::Obj;
use super::morphism::{HomSpace, Morphism};
use super::skeleton::{Label, Skeleton};

#[derive(Clone, Debug)]
pub struct IhFrame {
    pub labels: [Label; 4],
    pub space: HomSpace,
    /// `(e, μ, ν)` for `vertex(a,b→e;μ)` then `splitting(e→c,d;ν)`.
    pub i_keys: Vec<(Label, usize, usize)>,
    /// `(f, μ, ν)` for `splitting(a→c,f;μ)⊗b` then `c⊗vertex(f,b→d;ν)`.
    pub h_keys: Vec<(Label, usize, usize)>,
    /// Columns are I-basis morphisms in Hom-space coordinates.
    pub i_cols: CMat,
    pub h_cols: CMat,
    i_to_h: CMat,
    h_to_i: CMat,
}

impl Skeleton {
    pub fn i_morphism(&self, a: Label, b: Label, c: Label, d: Label, key: (Label, usize, usize)) -> Morphism {
        let (e, mu, nu) = key;
        self.vertex(a, b, e, mu).then(&self.splitting(c, d, e, nu))
    }

    pub fn h_morphism(&self, a: Label, b: Label, c: Label, d: Label, key: (Label, usize, usize)) -> Morphism {
        let (f, mu, nu) = key;
        let ib = self.identity(&Obj::simple(self, b));
        let ic = self.identity(&Obj::simple(self, c));
        self.tensor(&self.splitting(c, f, a, mu), &ib).then(&self.tensor(&ic, &self.vertex(f, b, d, nu)))
    }

    pub fn ih_frame(&self, a: Label, b: Label, c: Label, d: Label) -> Result<IhFrame> {
        let src = Obj::word(self, &[a, b]);
        let tgt = Obj::word(self, &[c, d]);
        let space = self.hom_space(&src, &tgt);
        let mut i_keys = Vec::new();
        let mut h_keys = Vec::new();
        for x in 0..self.len() {
            for mu in 0..self.n(a, b, x) as usize {
                for nu in 0..self.n(c, d, x) as usize {
                    i_keys.push((x, mu, nu));
                }
            }
            for mu in 0..self.n(c, x, a) as usize {
                for nu in 0..self.n(x, b, d) as usize {
                    h_keys.push((x, mu, nu));
                }
            }
        }
        let n = space.dim();
        if i_keys.len() != n || h_keys.len() != n {
            return Err(Error::Mismatch(format!(
                "channel counts {} and {} differ from dim Hom = {n}",
                i_keys.len(),
                h_keys.len()
            )));
        }
        let cols = |ms: Vec<Morphism>| {
            let mut m = CMat::zeros(n, n);
            for (j, f) in ms.iter().enumerate() {
                m.set_column(j, &space.coords(f));
            }
            m
        };
        let i_cols = cols(i_keys.iter().map(|&k| self.i_morphism(a, b, c, d, k)).collect());
        let h_cols = cols(h_keys.iter().map(|&k| self.h_morphism(a, b, c, d, k)).collect());
        let at = format!("({},{};{},{})", self.name(a), self.name(b), self.name(c), self.name(d));
        let i_inv = inverse(&i_cols).ok_or_else(|| Error::Singular { kind: "vertical channel", at: at.clone() })?;
        let h_inv = inverse(&h_cols).ok_or_else(|| Error::Singular { kind: "horizontal channel", at })?;
        let i_to_h = &h_inv * &i_cols;
        let h_to_i = &i_inv * &h_cols;
        Ok(IhFrame { labels: [a, b, c, d], space, i_keys, h_keys, i_cols, h_cols, i_to_h, h_to_i })
    }
}

impl IhFrame {
    pub fn dim(&self) -> usize {
        self.i_keys.len()
    }

    fn apply(m: &CMat, v: &CVec) -> Result<CVec> {
        if v.len() != m.ncols() {
            return Err(Error::Mismatch(format!("coefficient vector of length {} for a {}-dim space", v.len(), m.ncols())));
        }
        Ok(m * v)
    }

    /// Coefficients over the vertical family to coefficients over the
    /// horizontal one, representing the same morphism.
    pub fn i_h_transform(&self, v: &CVec) -> Result<CVec> {
        Self::apply(&self.i_to_h, v)
    }

    pub fn h_i_transform(&self, v: &CVec) -> Result<CVec> {
        Self::apply(&self.h_to_i, v)
    }

    pub fn i_to_h_matrix(&self) -> &CMat {
        &self.i_to_h
    }

    pub fn morphism_from_i(&self, v: &CVec) -> Morphism {
        self.space.from_vec(&(&self.i_cols * v))
    }

    pub fn morphism_from_h(&self, v: &CVec) -> Morphism {
        self.space.from_vec(&(&self.h_cols * v))
    }
}

//! Duality data for words of simple labels.

use crate::error::{Error, Result};

use super::basis::Obj;
use super::morphism::Morphism;
use super::skeleton::{Label, Skeleton};

impl Skeleton {
    /// The labels of a word whose slots are all simple.
    pub fn word_labels(&self, w: &Obj) -> Result<Vec<Label>> {
        w.slots
            .iter()
            .map(|s| {
                let mut it = s.labels();
                match (it.next(), it.next()) {
                    (Some(l), None) if s.mult(l) == 1 => Ok(l),
                    _ => Err(Error::Invalid("word has a non-simple slot".into())),
                }
            })
            .collect()
    }

    /// `W* = [w_n*, ..., w_1*]`.
    pub fn dual_word(&self, w: &Obj) -> Result<Obj> {
        let ls = self.word_labels(w)?;
        if ls.is_empty() {
            return Ok(Obj::empty(w.color.1));
        }
        let ds: Vec<Label> = ls
            .iter()
            .rev()
            .map(|&l| self.dual(l).ok_or_else(|| Error::Invalid(format!("{} has no dual", self.name(l)))))
            .collect::<Result<_>>()?;
        Ok(Obj::word(self, &ds))
    }

    fn split_first(&self, w: &Obj) -> (Obj, Obj) {
        (w.sub(0, 1, self), w.sub(1, w.len(), self))
    }

    /// `ev_W : W* ⊗ W -> 1`.
    pub fn ev_word(&self, w: &Obj) -> Result<Morphism> {
        if w.is_empty() {
            return Ok(self.identity(w));
        }
        let (h, rest) = self.split_first(w);
        let l = self.word_labels(&h)?[0];
        let rd = self.dual_word(&rest)?;
        let inner = self.whisker(&rd, &self.ev(l)?, &rest);
        Ok(inner.then(&self.ev_word(&rest)?))
    }

    /// `coev_W : 1 -> W ⊗ W*`.
    pub fn coev_word(&self, w: &Obj) -> Result<Morphism> {
        if w.is_empty() {
            return Ok(self.identity(w));
        }
        let (h, rest) = self.split_first(w);
        let l = self.word_labels(&h)?[0];
        let hd = self.dual_word(&h)?;
        let outer = self.coev(l)?;
        let inner = self.whisker(&h, &self.coev_word(&rest)?, &hd);
        Ok(outer.then(&inner))
    }

    /// `ev~_W : W ⊗ W* -> 1`.
    pub fn ev_right_word(&self, w: &Obj) -> Result<Morphism> {
        if w.is_empty() {
            return Ok(self.identity(w));
        }
        let (h, rest) = self.split_first(w);
        let l = self.word_labels(&h)?[0];
        let hd = self.dual_word(&h)?;
        let inner = self.whisker(&h, &self.ev_right_word(&rest)?, &hd);
        Ok(inner.then(&self.ev_right(l)?))
    }

    /// `coev~_W : 1 -> W* ⊗ W`.
    pub fn coev_right_word(&self, w: &Obj) -> Result<Morphism> {
        if w.is_empty() {
            return Ok(self.identity(w));
        }
        let (h, rest) = self.split_first(w);
        let l = self.word_labels(&h)?[0];
        let rd = self.dual_word(&rest)?;
        let first = self.coev_right_word(&rest)?;
        Ok(first.then(&self.whisker(&rd, &self.coev_right(l)?, &rest)))
    }
}

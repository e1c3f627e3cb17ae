//! Words of multiplicity slots and their left-nested fusion-tree bases.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::skeleton::{Color, Label, Skeleton};

/// A direct sum of simples of one color; `mult[l]` copies of label `l`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Slot {
    mult: Vec<u32>,
}

impl Slot {
    pub fn simple(sk: &Skeleton, l: Label) -> Slot {
        let mut mult = vec![0; sk.len()];
        mult[l] = 1;
        Slot { mult }
    }

    pub fn from_mult(mult: Vec<u32>) -> Slot {
        Slot { mult }
    }

    pub fn mult(&self, l: Label) -> u32 {
        self.mult[l]
    }

    pub fn mults(&self) -> &[u32] {
        &self.mult
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(l, _)| l)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn color(&self, sk: &Skeleton) -> Option<Color> {
        self.labels().next().map(|l| sk.color(l))
    }
}

/// A word `x_1 ⊗ ... ⊗ x_n` of slots. The color records the outer colors so
/// that the empty word (the unit of a given color) is unambiguous.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Obj {
    pub slots: Vec<Slot>,
    pub color: Color,
}

impl Obj {
    pub fn empty(color: u8) -> Obj {
        Obj { slots: Vec::new(), color: (color, color) }
    }

    pub fn simple(sk: &Skeleton, l: Label) -> Obj {
        Obj { slots: vec![Slot::simple(sk, l)], color: sk.color(l) }
    }

    pub fn word(sk: &Skeleton, labels: &[Label]) -> Obj {
        assert!(!labels.is_empty(), "use Obj::empty for the unit word");
        let slots: Vec<Slot> = labels.iter().map(|&l| Slot::simple(sk, l)).collect();
        Obj::from_slots(sk, slots)
    }

    pub fn from_slots(sk: &Skeleton, slots: Vec<Slot>) -> Obj {
        assert!(!slots.is_empty(), "use Obj::empty for the unit word");
        let cols: Vec<Color> = slots.iter().map(|s| s.color(sk).expect("zero slot")).collect();
        for w in cols.windows(2) {
            assert_eq!(w[0].1, w[1].0, "slots are not color-composable");
        }
        Obj { color: (cols[0].0, cols[cols.len() - 1].1), slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn concat(&self, other: &Obj) -> Obj {
        assert_eq!(self.color.1, other.color.0, "words are not color-composable");
        let mut slots = self.slots.clone();
        slots.extend(other.slots.iter().cloned());
        Obj { slots, color: (self.color.0, other.color.1) }
    }

    pub fn sub(&self, start: usize, end: usize, sk: &Skeleton) -> Obj {
        if start == end {
            let col = if start < self.slots.len() {
                self.slots[start].color(sk).unwrap().0
            } else {
                self.color.1
            };
            return Obj::empty(col);
        }
        Obj::from_slots(sk, self.slots[start..end].to_vec())
    }
}

/// A left-nested tree `((x_1 x_2 -> c_2) x_3 -> c_3) ...`.
/// `charges[i]` is the charge after fusing leaf `i`, `vtx[i]` the vertex index
/// used at that step (`vtx[0] = 0`).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Tree {
    pub leaves: Vec<(Label, u32)>,
    pub charges: Vec<Label>,
    pub vtx: Vec<u32>,
    pub top: Label,
}

impl Tree {
    pub fn prefix(&self, n: usize, unit: Label) -> Tree {
        Tree {
            leaves: self.leaves[..n].to_vec(),
            charges: self.charges[..n].to_vec(),
            vtx: self.vtx[..n].to_vec(),
            top: if n == 0 { unit } else { self.charges[n - 1] },
        }
    }

    pub fn push(&self, leaf: (Label, u32), charge: Label, vtx: u32) -> Tree {
        let mut t = self.clone();
        t.leaves.push(leaf);
        t.charges.push(charge);
        t.vtx.push(if t.leaves.len() == 1 { 0 } else { vtx });
        t.top = charge;
        t
    }
}

#[derive(Debug)]
pub struct Basis {
    pub per_charge: BTreeMap<Label, Vec<Tree>>,
    index: HashMap<Tree, usize>,
}

impl Basis {
    pub fn trees(&self, c: Label) -> &[Tree] {
        self.per_charge.get(&c).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim(&self, c: Label) -> usize {
        self.trees(c).len()
    }

    pub fn index(&self, t: &Tree) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn charges(&self) -> impl Iterator<Item = Label> + '_ {
        self.per_charge.keys().copied()
    }

    /// Multiplicity vector of the word as a direct sum of simples.
    pub fn mult_vector(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for (c, ts) in &self.per_charge {
            v[*c] = ts.len() as u32;
        }
        v
    }
}

impl Skeleton {
    pub fn basis(&self, obj: &Obj) -> Arc<Basis> {
        if let Some(b) = self.cache.basis.lock().unwrap().get(obj) {
            return b.clone();
        }
        let b = Arc::new(self.enumerate(obj));
        self.cache.basis.lock().unwrap().insert(obj.clone(), b.clone());
        b
    }

    fn enumerate(&self, obj: &Obj) -> Basis {
        let unit = self.unit(obj.color.0);
        let mut layer: Vec<Tree> = vec![Tree { leaves: vec![], charges: vec![], vtx: vec![], top: unit }];
        for (k, slot) in obj.slots.iter().enumerate() {
            let mut next = Vec::new();
            for t in &layer {
                for l in slot.labels() {
                    for cp in 0..slot.mult(l) {
                        if k == 0 {
                            next.push(t.push((l, cp), l, 0));
                            continue;
                        }
                        for c in 0..self.len() {
                            for v in 0..self.n(t.top, l, c) {
                                next.push(t.push((l, cp), c, v));
                            }
                        }
                    }
                }
            }
            layer = next;
        }
        let mut per_charge: BTreeMap<Label, Vec<Tree>> = BTreeMap::new();
        for t in layer {
            per_charge.entry(t.top).or_default().push(t);
        }
        let mut index = HashMap::new();
        for ts in per_charge.values() {
            for (i, t) in ts.iter().enumerate() {
                index.insert(t.clone(), i);
            }
        }
        Basis { per_charge, index }
    }
}

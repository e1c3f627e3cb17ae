//! The named coherence checks and the pairing `Tr(y) ⊗ Tr(y*) -> 1`.

use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::Tube;
use crate::error::{Error, Result};
use crate::fusion::{Label, Obj};
use crate::linalg::{column_space, condition_number, rank, CMat};
use crate::module::Endo;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    EtasC,
    TraceCup,
    BraidCompat,
    TwistCompat,
    PhitrSnakes,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::EtasC, Check::TraceCup, Check::BraidCompat, Check::TwistCompat, Check::PhitrSnakes];

    pub fn name(self) -> &'static str {
        match self {
            Check::EtasC => "etasC",
            Check::TraceCup => "trace_cup",
            Check::BraidCompat => "braid_compat",
            Check::TwistCompat => "twist_compat",
            Check::PhitrSnakes => "phitr_snakes",
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown coherence check '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherenceReport {
    pub check: String,
    pub preset: String,
    pub residual: f64,
    pub pass: bool,
    pub elapsed_ms: u64,
}

/// The pairing of one simple endofunctor word, one block per charge.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub y: Label,
    /// `(c, M_c)` where `M_c[p, q]` pairs the `p`-th image vector of charge
    /// `c` in `Tr(y)` with the `q`-th image vector of charge `c*` in `Tr(y*)`.
    pub blocks: Vec<(Label, CMat)>,
    pub dim: usize,
    pub rank: usize,
    pub condition: f64,
}

impl Pairing {
    pub fn full_rank(&self) -> bool {
        self.rank == self.dim && self.blocks.iter().all(|(_, m)| m.nrows() == m.ncols())
    }
}

impl Tube {
    /// Endofunctor words used as instances: the empty word and each simple.
    pub fn instance_words(&self) -> Vec<Obj> {
        let ms = &self.ms;
        std::iter::once(Obj::empty(1)).chain(ms.e_labels.iter().map(|&l| ms.simple(l))).collect()
    }

    /// Max residual of the named check over all instances.
    pub fn coherence_check(&self, check: Check) -> Result<f64> {
        let words = self.instance_words();
        let mut worst: f64 = 0.0;
        match check {
            Check::EtasC => worst = self.etas_c_residual()?,
            Check::TraceCup => {
                for w in &words {
                    worst = worst.max(self.trace_cup_residual(w)?);
                }
            }
            Check::BraidCompat => {
                for a in &words {
                    for b in &words {
                        worst = worst.max(self.braid_compat_residuals(a, b)?.framed);
                    }
                }
            }
            Check::TwistCompat => {
                for w in &words {
                    worst = worst.max(self.twist_compat_residual(w)?);
                }
            }
            Check::PhitrSnakes => worst = self.phitr_snake_residuals()?.into_iter().fold(0.0, f64::max),
        }
        Ok(worst)
    }

    /// Residuals of the unframed braid equation over all instance pairs,
    /// for the over- and under-crossing.
    pub fn braid_unframed_residuals(&self) -> Result<(f64, f64)> {
        let words = self.instance_words();
        let (mut over, mut under) = (0.0f64, 0.0f64);
        for a in &words {
            for b in &words {
                let r = self.braid_compat_residuals(a, b)?;
                over = over.max(r.over);
                under = under.max(r.under);
            }
        }
        Ok((over, under))
    }

    pub fn coherence_report(&self, check: Check, tol: f64) -> Result<CoherenceReport> {
        let start = Instant::now();
        let residual = self.coherence_check(check)?;
        Ok(CoherenceReport {
            check: check.name().into(),
            preset: self.ms.name.clone(),
            residual,
            pass: residual <= tol,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    /// `ε^r ∘ Tr(ev_y) ∘ μ_{y,y*}` restricted to the images of `E_y ⊗ E_{y*}`,
    /// paired through the splitting `1 -> c ⊗ c*`.
    pub fn pairing(&self, y: Label) -> Result<Pairing> {
        let ms = &self.ms;
        let sk = &ms.sk;
        let yo = ms.simple(y);
        let yd = sk.dual_word(&yo)?;
        let (ey, eyd) = (Endo::from_right(yo.clone()), Endo::from_right(yd.clone()));
        let ty = self.trace(&ey)?;
        let tyd = self.trace(&eyd)?;
        let tid = self.trace(&Endo::identity())?;
        let tw = self.trace(&ey.after(&eyd))?;
        let ev = sk.ev_word(&yo)?;
        let trev = self.trace_map(&tw, &tid, |s| sk.whisker(&ms.simple(s), &ev, &Obj::empty(1)));
        let form = self.multiply(&ey, &eyd, super::mult::MultMode::Pants)?.then(&trev).then(&self.eps_r()?);
        let mut blocks = Vec::new();
        let (mut dim, mut total_rank, mut condition) = (0, 0, 1.0f64);
        for x in ms.c_labels() {
            let Some(xd) = sk.dual(x) else { continue };
            let (Some(ex), Some(exd)) = (ty.idem.blocks.get(&x), tyd.idem.blocks.get(&xd)) else { continue };
            let bx = column_space(ex, 1e-8);
            if bx.ncols() == 0 {
                continue;
            }
            let bxd = column_space(exd, 1e-8);
            let split = sk.splitting(x, xd, sk.unit(0), 0);
            let mut m = CMat::zeros(bx.ncols(), bxd.ncols());
            for p in 0..bx.ncols() {
                for q in 0..bxd.ncols() {
                    let mut u = sk.zero(&ms.simple(x), ty.carrier());
                    u.blocks.get_mut(&x).unwrap().copy_from(&bx.columns(p, 1));
                    let mut v = sk.zero(&ms.simple(xd), tyd.carrier());
                    v.blocks.get_mut(&xd).unwrap().copy_from(&bxd.columns(q, 1));
                    let val = split.then(&sk.tensor(&u, &v)).then(&form);
                    m[(p, q)] = val.blocks[&sk.unit(0)][(0, 0)];
                }
            }
            dim += bx.ncols();
            total_rank += rank(&m, 1e-9);
            condition = condition.max(condition_number(&m));
            blocks.push((x, m));
        }
        Ok(Pairing { y, blocks, dim, rank: total_rank, condition })
    }
}

//! Residual checks for pentagon, unit normalization, hexagons, snakes and
//! dimension consistency.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{C64, ONE, ZERO};

use super::basis::Obj;
use super::morphism::Morphism;
use super::skeleton::{Label, Skeleton};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub worst: String,
    pub instances: usize,
}

impl Residual {
    pub fn zero() -> Residual {
        Residual { value: 0.0, worst: String::from("-"), instances: 0 }
    }

    pub fn record(&mut self, value: f64, instance: impl FnOnce() -> String) {
        self.instances += 1;
        if value > self.value || (self.worst == "-" && value >= self.value) {
            self.value = value;
            self.worst = instance();
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub pentagon: Residual,
    pub unit_normalization: Residual,
    pub hexagon1: Option<Residual>,
    pub hexagon2: Option<Residual>,
    pub snakes: Residual,
    pub dimensions: Residual,
}

impl ValidationReport {
    pub fn entries(&self) -> Vec<(&'static str, &Residual)> {
        let mut v = vec![("pentagon", &self.pentagon), ("unit_normalization", &self.unit_normalization)];
        if let Some(h) = &self.hexagon1 {
            v.push(("hexagon1", h));
        }
        if let Some(h) = &self.hexagon2 {
            v.push(("hexagon2", h));
        }
        v.push(("snakes", &self.snakes));
        v.push(("dimensions", &self.dimensions));
        v
    }
}

impl Skeleton {
    fn names4(&self, ls: &[Label]) -> String {
        ls.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(",")
    }

    pub fn pentagon_residual(&self) -> Result<Residual> {
        let mut res = Residual::zero();
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            for t in self.left_nested_trees(&[a, b, c, d], e) {
                                let r = self.pentagon_paths(&t)?;
                                res.record(r, || format!("({}; {})", self.names4(&[a, b, c, d]), self.name(e)));
                            }
                        }
                    }
                }
            }
        }
        Ok(res)
    }

    /// F-blocks with a unit among `a, b, c` must be identities.
    pub fn unit_normalization_residual(&self) -> Residual {
        let mut res = Residual::zero();
        for (&(a, b, c, d), bl) in self.fblocks() {
            let (ua, ub, uc) = (self.is_unit(a), self.is_unit(b), self.is_unit(c));
            if !(ua || ub || uc) {
                continue;
            }
            let mut worst: f64 = 0.0;
            for (i, &(e, al, be)) in bl.rows.iter().enumerate() {
                for (j, &(f, mu, nu)) in bl.cols.iter().enumerate() {
                    let ident = if ua {
                        f == d && e == b && be == mu
                    } else if ub {
                        e == a && f == c && be == nu
                    } else {
                        e == d && f == b && al == nu
                    };
                    let want = if ident { ONE } else { ZERO };
                    worst = worst.max((bl.mat[(i, j)] - want).norm());
                }
            }
            res.record(worst, || format!("F^{{{}}}_{}", self.names4(&[a, b, c]), self.name(d)));
        }
        res
    }

    fn braided_labels(&self) -> Vec<Label> {
        (0..self.len()).filter(|&l| self.color(l) == (0, 0)).collect()
    }

    pub fn hexagon_residuals(&self) -> Result<(Residual, Residual)> {
        let mut h1 = Residual::zero();
        let mut h2 = Residual::zero();
        let ls = self.braided_labels();
        let id = |l: Label| self.identity(&Obj::simple(self, l));
        for &a in &ls {
            for &b in &ls {
                for &c in &ls {
                    for &g in &ls {
                        for mu in 0..self.n(b, c, g) as usize {
                            let v = self.vertex(b, c, g, mu);
                            let lhs = self
                                .tensor(&self.braiding(a, b)?, &id(c))
                                .then(&self.tensor(&id(b), &self.braiding(a, c)?))
                                .then(&self.tensor(&v, &id(a)));
                            let rhs = self.tensor(&id(a), &v).then(&self.braiding(a, g)?);
                            h1.record(lhs.residual(&rhs), || format!("({}; {})", self.names4(&[a, b, c]), self.name(g)));
                        }
                        for mu in 0..self.n(a, b, g) as usize {
                            let v = self.vertex(a, b, g, mu);
                            let lhs = self
                                .tensor(&id(a), &self.braiding(b, c)?)
                                .then(&self.tensor(&self.braiding(a, c)?, &id(b)))
                                .then(&self.tensor(&id(c), &v));
                            let rhs = self.tensor(&v, &id(c)).then(&self.braiding(g, c)?);
                            h2.record(lhs.residual(&rhs), || format!("({}; {})", self.names4(&[a, b, c]), self.name(g)));
                        }
                    }
                }
            }
        }
        Ok((h1, h2))
    }

    /// All four snake equations for every simple with a dual.
    pub fn snake_residual(&self) -> Result<Residual> {
        let mut res = Residual::zero();
        for a in 0..self.len() {
            let Some(ad) = self.dual(a) else { continue };
            let (ev, coev, evr, coevr) = self.ev_coev(a)?;
            let ia = self.identity(&Obj::simple(self, a));
            let iad = self.identity(&Obj::simple(self, ad));
            let checks: [(Morphism, &Morphism); 4] = [
                (self.tensor(&coev, &ia).then(&self.tensor(&ia, &ev)), &ia),
                (self.tensor(&iad, &coev).then(&self.tensor(&ev, &iad)), &iad),
                (self.tensor(&ia, &coevr).then(&self.tensor(&evr, &ia)), &ia),
                (self.tensor(&coevr, &iad).then(&self.tensor(&iad, &evr)), &iad),
            ];
            for (k, (lhs, rhs)) in checks.iter().enumerate() {
                res.record(lhs.residual(rhs), || format!("{} snake {}", self.name(a), k + 1));
            }
        }
        Ok(res)
    }

    /// `d_a = d_{a*}`, `d_1 = 1` and `Σ_c N_ab^c d_c = d_a d_b`.
    pub fn dimension_residual(&self) -> Result<Residual> {
        let mut res = Residual::zero();
        let ls: Vec<Label> = (0..self.len()).filter(|&l| self.dual(l).is_some()).collect();
        let mut d = vec![ZERO; self.len()];
        for &a in &ls {
            d[a] = self.qdim(a)?;
        }
        for &a in &ls {
            let ad = self.dual(a).unwrap();
            res.record((d[a] - d[ad]).norm(), || format!("d({}) vs d({}*)", self.name(a), self.name(a)));
            if self.is_unit(a) {
                res.record((d[a] - ONE).norm(), || "d(1)".to_string());
            }
            for &b in &ls {
                if self.color(a).1 != self.color(b).0 {
                    continue;
                }
                let lhs: C64 = ls.iter().map(|&c| d[c] * self.n(a, b, c) as f64).sum();
                res.record((lhs - d[a] * d[b]).norm(), || format!("dim character at ({},{})", self.name(a), self.name(b)));
            }
        }
        Ok(res)
    }

    pub fn validation_report(&self) -> Result<ValidationReport> {
        let (h1, h2) = if self.has_braiding() {
            let (a, b) = self.hexagon_residuals()?;
            (Some(a), Some(b))
        } else {
            (None, None)
        };
        Ok(ValidationReport {
            pentagon: self.pentagon_residual()?,
            unit_normalization: self.unit_normalization_residual(),
            hexagon1: h1,
            hexagon2: h2,
            snakes: self.snake_residual()?,
            dimensions: self.dimension_residual()?,
        })
    }
}

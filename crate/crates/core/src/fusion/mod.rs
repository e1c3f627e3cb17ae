//! Skeletal braided pivotal fusion categories.

pub mod basis;
pub mod fmove;
pub mod ih;
pub mod morphism;
pub mod skeleton;
pub mod structure;
pub mod tensor;
pub mod validate;
pub mod words;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, C64};

pub use basis::{Basis, Obj, Slot, Tree};
pub use fmove::{Shape, TreeVec};
pub use morphism::{compose, HomSpace, Morphism};
pub use skeleton::{Color, FEntry, Label, REntry, Skeleton, SkeletonSpec};
pub use structure::DualBasisPair;
pub use validate::{Residual, ValidationReport};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawSymbol {
    pub labels: Vec<String>,
    pub indices: Vec<usize>,
    pub value: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawCategory {
    pub labels: Vec<String>,
    pub unit: String,
    pub dual: BTreeMap<String, String>,
    pub fusion: Vec<(String, String, String, u32)>,
    #[serde(rename = "F")]
    pub f: Vec<RawSymbol>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<RawSymbol>>,
    pub pivotal: BTreeMap<String, [f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
}

/// A validated category together with its residual report.
#[derive(Clone, Debug)]
pub struct FusionCategoryData {
    pub name: String,
    pub sk: Arc<Skeleton>,
    pub tol: f64,
    pub report: ValidationReport,
    pub raw: RawCategory,
}

pub(crate) fn label_index(names: &[String], l: &str) -> Result<Label> {
    names.iter().position(|n| n == l).ok_or_else(|| Error::Schema(format!("unknown label {l:?}")))
}

pub(crate) fn symbol_value(v: [f64; 2]) -> C64 {
    c(v[0], v[1])
}

impl RawCategory {
    pub fn from_json(text: &str) -> Result<RawCategory> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_spec(&self) -> Result<SkeletonSpec> {
        let names = self.labels.clone();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Schema(format!("duplicate label {n:?}")));
            }
        }
        let unit = label_index(&names, &self.unit)?;
        if unit != 0 {
            return Err(Error::Schema("the unit must be listed first".into()));
        }
        let mut dual = vec![None; names.len()];
        for (a, b) in &self.dual {
            dual[label_index(&names, a)?] = Some(label_index(&names, b)?);
        }
        if let Some(missing) = dual.iter().position(|d| d.is_none()) {
            return Err(Error::Schema(format!("no dual given for {:?}", names[missing])));
        }
        let mut fusion = Vec::new();
        for (a, b, cc, n) in &self.fusion {
            fusion.push((label_index(&names, a)?, label_index(&names, b)?, label_index(&names, cc)?, *n));
        }
        let f = parse_f(&names, &self.f)?;
        let r = match &self.r {
            None => None,
            Some(rs) => Some(parse_r(&names, rs)?),
        };
        let mut pivotal = vec![C64::new(1.0, 0.0); names.len()];
        for (i, n) in names.iter().enumerate() {
            let v = self.pivotal.get(n).ok_or_else(|| Error::Schema(format!("no pivotal coefficient for {n:?}")))?;
            pivotal[i] = symbol_value(*v);
            if pivotal[i].norm() == 0.0 {
                return Err(Error::Schema(format!("pivotal coefficient of {n:?} is zero")));
            }
        }
        Ok(SkeletonSpec { colors: vec![(0, 0); names.len()], names, dual, fusion, f, r, pivotal })
    }
}

pub(crate) fn parse_f(names: &[String], raw: &[RawSymbol]) -> Result<Vec<FEntry>> {
    raw.iter()
        .map(|s| {
            if s.labels.len() != 6 || s.indices.len() != 4 {
                return Err(Error::Schema("F entries need 6 labels and 4 indices".into()));
            }
            let mut labels = [0; 6];
            for (k, l) in s.labels.iter().enumerate() {
                labels[k] = label_index(names, l)?;
            }
            Ok(FEntry {
                labels,
                idx: [s.indices[0], s.indices[1], s.indices[2], s.indices[3]],
                value: symbol_value(s.value),
            })
        })
        .collect()
}

pub(crate) fn parse_r(names: &[String], raw: &[RawSymbol]) -> Result<Vec<REntry>> {
    raw.iter()
        .map(|s| {
            if s.labels.len() != 3 || s.indices.len() != 2 {
                return Err(Error::Schema("R entries need 3 labels and 2 indices".into()));
            }
            let mut labels = [0; 3];
            for (k, l) in s.labels.iter().enumerate() {
                labels[k] = label_index(names, l)?;
            }
            Ok(REntry { labels, idx: [s.indices[0], s.indices[1]], value: symbol_value(s.value) })
        })
        .collect()
}

fn check(equation: &str, r: &Residual, tol: f64) -> Result<()> {
    if r.value > tol {
        return Err(Error::Residual { equation: equation.into(), residual: r.value, tol, instance: r.worst.clone() });
    }
    Ok(())
}

/// Parses and validates a category; `tol` overrides the file's tolerance.
pub fn load_and_validate_category(text: &str, tol: Option<f64>) -> Result<FusionCategoryData> {
    let raw = RawCategory::from_json(text)?;
    validate_raw(raw, tol)
}

pub fn validate_raw(raw: RawCategory, tol: Option<f64>) -> Result<FusionCategoryData> {
    let tol = tol.or(raw.tol).unwrap_or(DEFAULT_TOL);
    if !(tol >= 0.0) {
        return Err(Error::Schema("tolerance must be non-negative".into()));
    }
    let sk = Skeleton::new(raw.to_spec()?)?;
    let report = sk.validation_report()?;
    for (name, r) in report.entries() {
        check(name, r, tol)?;
    }
    Ok(FusionCategoryData { name: raw.name.clone().unwrap_or_else(|| "category".into()), sk: Arc::new(sk), tol, report, raw })
}

impl FusionCategoryData {
    pub fn label(&self, name: &str) -> Result<Label> {
        self.sk.label(name).ok_or_else(|| Error::Invalid(format!("unknown label {name:?}")))
    }

    pub fn qdim(&self, a: Label) -> f64 {
        self.sk.qdim(a).expect("validated category has duals").re
    }

    pub fn global_dim_sq(&self) -> f64 {
        (0..self.sk.len()).map(|a| self.qdim(a).powi(2)).sum()
    }
}

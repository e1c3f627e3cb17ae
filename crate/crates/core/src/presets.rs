//! Bundled category and module data.

use crate::error::{Error, Result};
use crate::fusion::{load_and_validate_category, FusionCategoryData};
use crate::module::ModuleSystem;

pub const NAMES: [&str; 5] = ["vec", "vecz2-plus", "vecz2-minus", "fib", "ising"];

pub const MODULE_NAMES: [&str; 1] = ["vecz2-on-vec"];

pub fn category_json(name: &str) -> Option<&'static str> {
    Some(match name {
        "vec" => include_str!("../../../presets/vec.json"),
        "vecz2-plus" => include_str!("../../../presets/vecz2-plus.json"),
        "vecz2-minus" => include_str!("../../../presets/vecz2-minus.json"),
        "fib" => include_str!("../../../presets/fib.json"),
        "ising" => include_str!("../../../presets/ising.json"),
        _ => return None,
    })
}

pub fn category(name: &str) -> Result<FusionCategoryData> {
    let text = category_json(name).ok_or_else(|| Error::Invalid(format!("no preset named {name:?}")))?;
    load_and_validate_category(text, None)
}

pub fn module_json(name: &str) -> Option<&'static str> {
    Some(match name {
        "vecz2-on-vec" => include_str!("../../../presets/vecz2-on-vec.json"),
        _ => return None,
    })
}

/// Loads a bundled module over `base`.
pub fn module(name: &str, base: &FusionCategoryData) -> Result<ModuleSystem> {
    let text = module_json(name).ok_or_else(|| Error::Invalid(format!("no module preset named {name:?}")))?;
    ModuleSystem::load(text, base)
}

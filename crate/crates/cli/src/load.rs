use std::path::Path;

use tubecalc::fusion::{validate_raw, FusionCategoryData, RawCategory};
use tubecalc::module::ModuleSystem;
use tubecalc::presets;

use crate::Failure;

/// Reads a file, or a bundled preset when no such file exists.
fn source(arg: &str, bundled: fn(&str) -> Option<&'static str>) -> Result<(String, String), Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| arg.to_string());
        return Ok((stem, text));
    }
    match bundled(arg) {
        Some(text) => Ok((arg.to_string(), text.to_string())),
        None => Err(Failure::Usage(format!("{arg}: no such file or bundled preset"))),
    }
}

/// Parses a category; with `tol = None` residuals are reported but never rejected.
pub fn category(arg: &str, tol: Option<f64>) -> Result<FusionCategoryData, Failure> {
    let (stem, text) = source(arg, presets::category_json)?;
    let mut raw = RawCategory::from_json(&text).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
    raw.name.get_or_insert(stem);
    Ok(validate_raw(raw, Some(tol.unwrap_or(f64::INFINITY)))?)
}

pub fn module(arg: &str, base: &FusionCategoryData) -> Result<ModuleSystem, Failure> {
    if arg == "regular" {
        return Ok(ModuleSystem::regular(base)?);
    }
    let (_, text) = source(arg, presets::module_json)?;
    Ok(ModuleSystem::load(&text, base)?)
}

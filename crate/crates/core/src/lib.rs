//! Numerical engine for tube categories built from module categories over
//! braided pivotal fusion categories.

pub mod apa;
pub mod error;
pub mod fusion;
pub mod ladder;
pub mod linalg;
pub mod module;
pub mod presets;
pub mod trace;

pub use error::{Error, Result};

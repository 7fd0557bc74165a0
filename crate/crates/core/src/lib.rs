//! Exact-arithmetic engine for Kontsevich graph complexes, their decorated
//! comodules and hairy graph complexes with twisted L∞ structure.

pub mod algebra;
pub mod canon;
pub mod checks;
pub mod error;
pub mod examples;
pub mod format;
pub mod graph;
pub mod hairy;
pub mod kontsevich;
pub mod linalg;
pub mod linf;
pub mod lincombo;
pub(crate) mod work;

/// Exact rational scalars used throughout.
pub type Q = num_rational::BigRational;

pub use error::{Error, Result};
pub use graph::{Graph, Mode, Parity, ValencePolicy};
pub use lincombo::LinCombo;

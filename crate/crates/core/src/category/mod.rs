//! Finite categories, resolutions of their operadic versions, the built-in
//! examples and the bar-cobar resolution.

mod barcobar;
mod builtin;
mod finite;
mod resolution;
mod verify;

pub use barcobar::{bar_cobar, chain_name};
pub use builtin::{builtin_category, builtin_resolution, builtin_resolutions, counterexample_resolution, BUILTIN_CATEGORIES};
pub use finite::{Arrow, FiniteCategory, Morphism};
pub use resolution::CategoryResolution;
pub use verify::{verify_resolution, ResolutionReport, SliceReport};

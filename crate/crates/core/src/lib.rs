//! Coloured Σ-operads over exact rationals: free operads, resolutions of
//! finite categories, χ maps, diagram operads and their resolutions.

pub mod category;
pub mod chi;
pub mod diagram;
pub mod error;
pub mod free;
pub mod linalg;
pub mod perm;
pub mod resolver;
pub mod sigma;

pub use error::{Error, Result};

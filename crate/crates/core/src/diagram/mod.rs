//! Operads of diagrams of algebras over a presented operad.

mod operad;
mod presentation;
mod ptree;

pub use operad::{apply_functor, DiagramElement, DiagramMorphism, DiagramOperad, DiagramTerm, OperadMorphism};
pub use presentation::{OperadPresentation, Planar, Rewrite, BUILTIN_OPERADS};
pub(crate) use presentation::add as add_planar;
pub use ptree::{OpGen, PTree};

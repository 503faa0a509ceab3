//! Free coloured Σ-operads: shuffle-tree bases, compositions with Koszul
//! signs, the Σ-action and derivation differentials.

mod alphabet;
mod derivation;
mod element;
mod enumerate;
mod tree;

pub use alphabet::{Alphabet, GenId, GenInfo};
pub use derivation::Derivation;
pub use element::OperadElement;
pub use enumerate::SliceEnumerator;
pub use tree::{Node, Tree};

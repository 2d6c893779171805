//! Planar trees, the operad `Op` of numbered trees, term algebras over a
//! generating collection, and the composition product of collections.

pub mod circle;
pub mod op;
pub mod planar;
pub mod term;

pub use circle::{circle_product, CircleElem, CircleProduct};
pub use op::{op_compose, op_hom_set, OpOperad, OpOperation, OpTree};
pub use planar::PlanarTree;
pub use term::{free_multicategory, FreeMulticategory, FreeResult, Generators, Term};

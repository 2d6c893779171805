//! Finite colored operads (multicategories) enriched in sets: construction,
//! composition, presentations, tensor products, internal homs, algebras and
//! bimodules, all checked exhaustively at small sizes.

pub mod algebras;
pub mod category;
pub mod error;
pub mod exec;
pub mod functor;
pub mod bimodules;
pub mod homcalc;
pub mod json;
pub mod multicat;
pub mod perm;
pub mod presents;
pub mod search;
pub mod simplicial;
pub mod trees;

pub use error::{Error, Result};
pub use multicat::{ColorId, FiniteCollection, Multicat, Multicategory, MulticategoryBuilder, OpId, Signature};

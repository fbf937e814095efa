//! Milnor symbol words and their evaluation homomorphisms: the tame symbol on
//! discretely valued fields, Kato's residue on the two-dimensional local field,
//! and norms down finite unramified extensions. Words are never put in a K2
//! normal form; equality is only ever decided through these evaluations.

mod kato;
mod norm;
mod relations;
pub(crate) mod sampler;
mod tame;
mod word;

pub use kato::{kato_res, two_dim_normal_form, NormalForm};
pub use norm::norm_k1;
pub use relations::{symbol_relations_check, RelationReport};
pub use sampler::{sample_units, Sampler};
pub use tame::{residue_ring_of, tame_symbol};
pub use word::{BranchField, BranchKind, SymbolWord};

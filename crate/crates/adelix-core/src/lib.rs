//! Exact-arithmetic toolkit for adelic invariants of the projective line over a
//! Dedekind base: truncated p-adic and Laurent-series rings, Milnor symbol
//! evaluation (tame symbol, Kato residue), the determinant-line central
//! extension of loop groups with its boundary map, vector bundles on P¹ given
//! by Horrocks transition data, and the intersection/pushdown pipeline with
//! its reciprocity and Riemann-Roch verifiers.

pub mod error;
pub mod exactrings;
pub mod symbols;
pub mod loopext;
pub mod bundles;
pub mod surface;
pub mod groupalg;

pub use error::{AdelixError, Result};

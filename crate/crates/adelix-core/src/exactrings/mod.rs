//! The exact-arithmetic ring tower: rationals, prime and Galois fields,
//! truncated p-adics and their unramified extensions, polynomials, windowed
//! Laurent series, and the truncated two-dimensional local field Q_p{{t}}.
//!
//! Every value is immutable after construction; precision and truncation data
//! travel with the element so that an operation which would need coefficients
//! outside the stored window fails loudly with `PrecisionExhausted`.

mod descriptor;
mod element;
pub(crate) mod epoly;
mod factor;
mod hensel;
pub(crate) mod linalg;
mod matrix;
pub(crate) mod num;
mod poly;
mod text;

pub use descriptor::{Ring, Window};
pub use element::{ArithOp, Element, LocalElt, Payload, SeriesElt};
pub use factor::{
    factor_fp_poly, factor_gf_poly, factor_primitive_zpoly, is_irreducible_z, trial_factor,
};
pub use hensel::{hensel_factor, newton_root, weierstrass_prepare};
pub use linalg::{
    col_span_echelon, det_field, echelon_frame, frame_det, kernel_basis, smith_normal_form,
    EchelonFrame, Smith,
};
pub use matrix::RingMatrix;
pub use num::{inv_mod, is_prime, pow_mod};
pub use poly::Polynomial;
pub use text::{parse_element, parse_ring, print_element};

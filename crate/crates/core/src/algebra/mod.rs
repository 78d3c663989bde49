//! Exact arithmetic over finite fields, univariate polynomials, and
//! order-2 jets.
//!
//! Field elements are stored as canonical base-`p` codes in a `u64`, so
//! they are `Copy`, hashable, and order-comparable. All operations take
//! the owning [`Field`] explicitly.

mod field;
mod jet;
mod poly;
mod xpoly;

pub use field::{Field, FieldElem};
pub use jet::{jet_det, jet_discriminant, jet_resultant_formal, Jet, JetPoly};
pub use poly::{
    factor, is_semistable_poly, is_square_poly, multiplicity_profile, squarefree_decomposition,
    Poly,
};
pub use xpoly::{poly_det, sylvester_resultant_xt, xpoly_det, XPoly};

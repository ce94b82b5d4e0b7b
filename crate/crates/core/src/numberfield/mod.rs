//! Number fields of degree at most 4: elements over an integral basis, prime
//! splitting and ideals in Hermite normal form.

mod field;
mod ideal;
mod splitting;

pub use field::{render_poly, FieldElement, NumberField};
pub use ideal::{hnf_columns, IdealHNF};
pub use splitting::{
    dedekind_criterion, dedekind_p_maximal, describe_splitting, product_of_factors, split_prime,
    splitting_type, PrimeFactor,
};

use crate::error::Result;
use crate::linalg::RatMatrix;
use crate::ring::IntPoly;

/// Build a field; `basis` defaults to the power basis.
pub fn make_field(f: &IntPoly, basis: Option<&RatMatrix>) -> Result<NumberField> {
    NumberField::new(f, basis)
}

//! Integer, modular and p-adic polynomial arithmetic.

mod modpoly;
mod padic;
mod poly;

pub use modpoly::{factor_mod_p, is_irreducible_mod_p, ModPoly};
pub use padic::{hensel_lift_root, log_series_terms, padic_log, PadicApprox};
pub use poly::IntPoly;

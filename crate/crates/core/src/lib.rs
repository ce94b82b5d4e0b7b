pub mod arith;
pub mod cli;
pub mod error;
pub mod families;
pub mod harness;
pub mod linalg;
pub mod numberfield;
pub mod rationality;
pub mod recurrence;
pub mod ring;
pub mod selftest;
pub mod torsion;

pub use error::{Error, Result};

//! Power sums, Carlitz-tower constants and the identities relating them, over
//! finite fields and `F_q(t)`.

pub mod algebra;
pub mod coeff;
pub mod error;
pub mod field;
pub mod identity;
pub mod linear;
pub mod powersum;
#[cfg(test)]
mod props;
pub mod report;
pub mod suite;
pub mod tower;
pub mod zeta;

pub use coeff::CoeffField;
pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
pub use report::{Status, VerifyReport};

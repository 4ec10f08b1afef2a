//! Exact polynomial, rational-function and Laurent-series arithmetic over `F_q`.

pub mod factor;
pub mod laurent;
pub mod poly;
pub mod ratfunc;

pub use factor::{factor_trial, irreducibles, is_irreducible, FactorMap};
pub use laurent::{expand_poly, laurent_expand, LaurentSeries};
pub use poly::{enumerate_monic, Poly};
pub use ratfunc::{RatField, RatFunc};

//! `F_q`-linear series and the engines for their logarithmic-derivative
//! coefficients.

pub mod roots;
pub mod series;
pub mod tables;

pub use roots::{from_root_space, span, RootSpace};
pub use series::{comp_inverse, compose, ls_eval, LinearSeries, SeriesKind};
pub use tables::{a_table, alpha_table, check_ppower, h_table, max_bound, table, CoeffTable, Family, H_table};

//! q-series toolkit and congruence verification for `pod(n)`, the number of
//! partitions of `n` whose odd parts are distinct.
//!
//! * [`series`]: truncated power series over `Z` or `Z/mZ`, theta functions,
//!   Pochhammer products, dissection.
//! * [`arith`]: divisor sums, Legendre symbols, `t_k(n)` and `r_k(n)` by
//!   enumeration, closed forms and series powers, plus the `r_3`/`r_5`
//!   scaling recursions.
//! * [`pod`]: `pod(n)` tables from the generating function and a partition
//!   enumerator used as ground truth.
//! * [`congruence`]: the congruence catalog, family instantiation, range
//!   verification, identity replay and progression search.

pub mod arith;
pub mod congruence;
pub mod error;
pub mod pod;
pub mod series;

pub use error::{Error, Result};
pub use series::{CoefficientDomain, TruncatedSeries};

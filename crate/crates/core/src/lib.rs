//! Permutation polynomials of the shape `x^r h(x^{(q-1)/d})` over small
//! finite fields.
//!
//! The crate provides table-driven `GF(p^m)` arithmetic ([`gf`]), dense
//! polynomials ([`poly`]), brute-force and subgroup-reduction permutation
//! tests ([`permcheck`]), closed-form criteria for several families
//! ([`criteria`]), the generalized Lucas sequence behind a sufficient
//! criterion for binomials ([`lucas`]), and an exhaustive cross-checking
//! census ([`census`]) driven by the `permpoly` binary ([`cli`]).

pub mod arith;
pub mod census;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod gf;
pub mod lucas;
pub mod permcheck;
pub mod poly;

pub use criteria::{Criterion, CriterionResult, Outcome, Witness};
pub use error::{Error, Result};
pub use gf::{Field, FieldElement, SubfieldHandle};
pub use poly::{IntPoly, Poly};

//! Exact search engine for degree bounds on smooth surfaces in P^4 that are
//! not of general type.
//!
//! The pipeline works on two combinatorial models of a generic hyperplane
//! section curve `C`:
//!
//! * the two-variable staircase `gin(I_Γ)` described by a connected
//!   [`InvariantSequence`] (see [`staircase`]),
//! * a three-variable lift `gin(I_C)`, stored as a [`HeightFunction`] over
//!   staircase columns (see [`lift`]).
//!
//! [`budget`] bounds the number of sporadic zeros, [`inequality`] evaluates
//! the numerical surface inequality and its approximations, [`optimizer`]
//! maximizes the sporadic-zero penalty exactly over admissible lifts, and
//! [`survey`] sweeps degrees and emits certified reports.
//!
//! All arithmetic that decides a verdict is exact: integers for counts and
//! penalties, rationals for the formula-level bounds.

pub mod budget;
pub mod error;
pub mod inequality;
pub mod lift;
pub mod optimizer;
pub mod scalar;
pub mod staircase;
pub mod survey;

pub use error::{Error, Result};
pub use lift::{HeightFunction, Monomial, MonomialIdeal};
pub use scalar::Scalar;
pub use staircase::{Column, InvariantSequence};

/// Exact rational type used for every formula-level bound.
pub type Rational = num_rational::Ratio<i128>;

/// Arbitrary-precision rational, for scans that leave the `i128` range.
pub type BigRational = num_rational::BigRational;

/// Signed integer type for binomial sums, penalties and objectives.
pub type Int = i64;

//! Exact calculus for formal twisted pseudodifferential symbols in one and
//! two variables.
//!
//! The crate provides:
//!
//! * exact scalars: arbitrary-precision rationals, Gaussian rationals, and
//!   cyclotomic field elements ([`scalar`]);
//! * concrete base algebras with automorphisms, twisted derivations and
//!   trace functionals, plus a checker that verifies every declared law
//!   before residues may be computed ([`instances`], [`algebra`]);
//! * the one- and two-variable symbol algebras with certified truncation
//!   floors and their noncommutative residues ([`symbols`]);
//! * the bi-singular operator toolkit: quadrant symbols, principal symbols,
//!   Toeplitz projections, the Hilbert-transform symbol, and exact operator
//!   application on trigonometric polynomials ([`bisingular`]);
//! * a small expression language with context files and a JSON-emitting
//!   command-line front end ([`dsl`], [`json`], the `psicalc` binary).
//!
//! Everything is exact: there is no floating point anywhere, and every
//! identity in the test suite is asserted with zero tolerance.

pub mod algebra;
pub mod bisingular;
pub mod dsl;
pub mod error;
pub mod instances;
pub mod json;
pub mod scalar;
pub mod symbols;

pub use algebra::{check_hypotheses, iterate, Context, HypothesisReport, TraceKind};
pub use error::{ArithmeticError, Error};
pub use instances::Element;
pub use scalar::{binomial, Rational, Scalar};
pub use symbols::{Floor, Symbol1D, Symbol2D};

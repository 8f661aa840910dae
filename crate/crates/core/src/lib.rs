//! qclaw: an exact-arithmetic workbench for quantum cluster algebras.
//!
//! The library builds classical and quantum seeds (including from signed
//! words and Lie-theoretic weight data), mutates them, certifies
//! mutation-equivalence by search, computes standard-monomial and
//! Kazhdan-Lusztig-type triangular bases at desk scale, and implements the
//! membership calculus of the partially compactified upper cluster algebra
//! (vanishing orders, localization intersections, quotient maps).
//!
//! All arithmetic is exact: coefficients are Laurent polynomials in
//! `q^{1/2}` with arbitrary-precision integer coefficients.

pub mod bases;
pub mod bz;
pub mod cartan;
pub mod coeff;
pub mod compact;
pub mod golden;
pub mod linalg;
pub mod seed;
pub mod torus;
pub mod word;

pub use cartan::{CartanData, Weight, WeylWord};
pub use coeff::Coefficient;
pub use seed::{ExchangeMatrix, QuantumSeed};
pub use torus::{IndexSet, LambdaForm, TorusContext, TorusElement};
pub use word::SignedWord;

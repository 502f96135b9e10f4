//! Exact-arithmetic computation of secondary (Massey-type) products in the
//! homology of finite-dimensional differential graded algebras over quadratic
//! operad presentations.
//!
//! Every scalar is an arbitrary-precision rational, so all vanishing tests,
//! coset memberships, and subspace intersections are exact. The crate ships
//! builders for Chevalley-Eilenberg complexes of finite-dimensional Lie
//! algebras, DG-Gerstenhaber algebras of Lie bialgebras, and an arity-3
//! hypercommutative structure obtained from a trivialization operator, plus a
//! JSON document format and CLI for driving computations from files.

pub mod algebra;
pub mod commands;
pub mod construct;
pub mod document;
pub mod error;
pub mod graded;
pub mod linalg;
pub mod massey;
pub mod operad;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use rational::Rat;

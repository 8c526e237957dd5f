//! Exact spectral toolkit for equilateral metric trees.
//!
//! A tree with all edge lengths equal carries a Sturm-Liouville problem whose
//! characteristic function factors as `s(λ,l)^e · P(c(λ,l))`, where `s` and `c`
//! are the sine-like and cosine-like basis solutions on one edge and `P` is an
//! integer polynomial in the variable `z = c(λ,l)`. This crate computes those
//! `(e, P)` pairs exactly, implements the surgery calculus that combines them
//! when trees are glued at a vertex, and runs exhaustive searches for
//! cospectral trees and for vertex pairs that no attachment can distinguish.
//!
//! Modules:
//! - [`trees`] — combinatorial equilateral trees: validation, canonical codes,
//!   enumeration of isomorphism classes, attachment surgery, orbits.
//! - [`poly`] — dense univariate polynomials over arbitrary-precision integers:
//!   ring ops, exact division, fraction-free determinants, Sturm sequences and
//!   real-root isolation.
//! - [`spectral`] — characteristic functions as `(s-exponent, polynomial)`
//!   pairs and the surgery/cospectrality operations on them.
//! - [`numerics`] — the raw vertex-condition linear system at zero potential,
//!   a numerical determinant oracle, and explicit eigenvalue listings.
//! - [`search`] — search pipelines over enumerated trees with reproducible
//!   reports.

pub mod fixtures;
pub mod numerics;
pub mod poly;
pub mod search;
pub mod spectral;
pub mod trees;

pub use poly::IntPoly;
pub use spectral::{CharFn, CharPair, PendantMode, ProblemSpec, RootCondition};
pub use trees::{CanonCode, RootedTree, Tree};

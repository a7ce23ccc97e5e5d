//! Symbolic calculator for equivariant truncating invariants of simple
//! varieties.
//!
//! A variety is described by a [`dsl::ConstructionTree`]: points, disjoint
//! unions, flag bundles, stratified descents and abstract blowup squares.
//! [`engine`] evaluates trees to degree-0 modules over the representation
//! ring and to graded values over a [`coeff::CoefficientTable`], and issues
//! comparison verdicts. [`schubert`] builds trees and rank oracles for finite
//! and affine Schubert varieties.
//!
//! The algebra is generic over [`scalar::Coeff`]; the aliases below fix the
//! arbitrary-precision instantiation used by the evaluator.

pub mod coeff;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod group_rep;
pub mod scalar;
pub mod schubert;

pub use error::{Error, Result};

pub type Int = num_bigint::BigInt;
pub type RepElem = group_rep::RepRingElement<Int>;
pub type IntMatrix = coeff::Matrix<Int>;
pub type Smith = coeff::SmithForm<Int>;

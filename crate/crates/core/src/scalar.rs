//! Exact coefficient types.
//!
//! Every algebraic kernel in this crate (group-algebra arithmetic, Smith
//! normal form, univariate polynomials over the representation ring) is
//! written against [`Coeff`], so it can run over machine integers for speed
//! or over [`num_bigint::BigInt`] when inputs may grow. The crate root fixes
//! `BigInt` as the default through the [`crate::Int`] alias.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

/// An exact, signed Euclidean coefficient ring (a subring of `Z`).
pub trait Coeff:
    Clone + Debug + Display + Ord + Hash + Integer + Signed + FromPrimitive + ToBigInt + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("coefficient type cannot represent i64 value")
    }

    fn to_big(&self) -> BigInt {
        self.to_bigint().expect("integer coefficient converts to BigInt")
    }
}

impl Coeff for i64 {}
impl Coeff for i128 {}
impl Coeff for BigInt {}

//! Ostrowski numeration systems for quadratic irrationals.
//!
//! * [`contfrac`]: continued fractions and their convergent denominators.
//! * [`numeration`]: greedy representations, validity, decoding.
//! * [`adder`]: linear-time addition of representations by three passes.
//! * [`automata`]: finite automata over tuples of digits.
//! * [`recognizers`]: automata for validity, the passes and addition.
//! * [`logic`]: first-order formulas over `(N, +, V_a)` decided by automata.

pub mod adder;
pub mod automata;
pub mod contfrac;
pub mod logic;
pub mod numeration;
pub mod recognizers;

use std::fmt::{Debug, Display};

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, ToPrimitive, Unsigned};

pub use adder::{add, add_words, AdderError};
pub use contfrac::{AutomatonParameters, ContfracError, ContinuedFraction};
pub use numeration::{decode, encode, DigitWord, NumerationError, OstrowskiWord};

/// Unsigned integer types that numbers may be encoded from and decoded to.
pub trait Natural:
    Clone + Ord + Debug + Display + Unsigned + CheckedAdd + CheckedMul + CheckedSub + FromPrimitive + ToPrimitive
{
}

impl<T> Natural for T where
    T: Clone + Ord + Debug + Display + Unsigned + CheckedAdd + CheckedMul + CheckedSub + FromPrimitive + ToPrimitive
{
}

/// Arbitrary-precision naturals.
pub type Nat = num_bigint::BigUint;

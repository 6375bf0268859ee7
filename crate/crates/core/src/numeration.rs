//! Ostrowski representations: greedy encoding, decoding and validity.
//!
//! A word is stored least significant digit first: position `k` (1-based)
//! holds `b_k`, the coefficient of `q_{k-1}`. Text rendering is most
//! significant digit first, space separated, so `10` over the golden ratio
//! prints as `1 0 0 1 0 0`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::contfrac::{ContfracError, ContinuedFraction};
use crate::Natural;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumerationError {
    #[error(transparent)]
    Contfrac(#[from] ContfracError),
    #[error("not an Ostrowski representation: {reason} at position {position}")]
    Invalid { position: usize, reason: &'static str },
    #[error("value does not fit the chosen integer type")]
    Overflow,
    #[error("cannot parse digit word at token `{token}`")]
    Parse { token: String },
}

/// An unvalidated digit string over `{0, ..., m}`; carrier for the
/// intermediate words of the addition passes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitWord {
    digits: Vec<u32>,
}

impl DigitWord {
    pub fn new() -> Self {
        Self::default()
    }

    /// `digits[0]` is position 1.
    pub fn from_lsd(digits: Vec<u32>) -> Self {
        Self { digits }
    }

    /// `digits[0]` is the most significant position.
    pub fn from_msd(digits: &[u32]) -> Self {
        Self { digits: digits.iter().rev().copied().collect() }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at 1-based `position`; zero beyond the end.
    pub fn digit(&self, position: usize) -> u32 {
        debug_assert!(position >= 1);
        self.digits.get(position - 1).copied().unwrap_or(0)
    }

    pub fn lsd(&self) -> &[u32] {
        &self.digits
    }

    pub fn to_msd(&self) -> Vec<u32> {
        self.digits.iter().rev().copied().collect()
    }

    pub fn max_digit(&self) -> u32 {
        self.digits.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Drops leading (most significant) zeros.
    pub fn stripped(&self) -> DigitWord {
        let keep = self.digits.iter().rposition(|&d| d != 0).map_or(0, |p| p + 1);
        Self { digits: self.digits[..keep].to_vec() }
    }

    /// Prepends zeros until the word has `len` digits.
    pub fn padded(&self, len: usize) -> DigitWord {
        let mut digits = self.digits.clone();
        if digits.len() < len {
            digits.resize(len, 0);
        }
        Self { digits }
    }

    pub(crate) fn into_lsd(self) -> Vec<u32> {
        self.digits
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        for (i, d) in self.digits.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for DigitWord {
    type Err = NumerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let msd = s
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| NumerationError::Parse { token: t.to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DigitWord::from_msd(&msd))
    }
}

/// A digit word that satisfies the Ostrowski conditions for `cf`. Leading
/// zeros are allowed; `encode` never produces them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OstrowskiWord {
    digits: DigitWord,
    cf: ContinuedFraction,
}

impl OstrowskiWord {
    pub fn digits(&self) -> &DigitWord {
        &self.digits
    }

    pub fn continued_fraction(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn stripped(&self) -> OstrowskiWord {
        Self { digits: self.digits.stripped(), cf: self.cf.clone() }
    }

    /// True when both words are relative to the same quotients `a1, a2, ...`.
    pub fn same_system(&self, other: &OstrowskiWord) -> bool {
        self.cf == other.cf || self.cf.same_quotients(&other.cf)
    }

    pub fn into_digits(self) -> DigitWord {
        self.digits
    }
}

impl fmt::Display for OstrowskiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.digits.fmt(f)
    }
}

/// Greedy encoding: repeatedly take the largest `q_k` not exceeding the
/// remainder as many times as it fits.
pub fn encode<T: Natural>(cf: &ContinuedFraction, n: &T) -> Result<OstrowskiWord, NumerationError> {
    // q_0..q_K with q_K > n
    let mut q: Vec<T> = vec![T::one()];
    let mut prev = T::zero();
    while q.last().unwrap() <= n {
        let k = q.len();
        let a = T::from_u32(cf.partial_quotient(k)?).ok_or(NumerationError::Overflow)?;
        let cur = q.last().unwrap().clone();
        let next = a.checked_mul(&cur).and_then(|x| x.checked_add(&prev)).ok_or(NumerationError::Overflow)?;
        prev = cur;
        q.push(next);
    }
    // The top denominator exceeds n, so the word has q.len() - 1 positions.
    let len = q.len() - 1;
    let mut digits = vec![0u32; len];
    let mut rem = n.clone();
    for k in (0..len).rev() {
        if rem < q[k] {
            continue;
        }
        let b = rem.clone() / q[k].clone();
        rem = rem - b.clone() * q[k].clone();
        digits[k] = b.to_u32().expect("greedy digit is bounded by a partial quotient");
    }
    debug_assert!(rem.is_zero());
    let word = DigitWord::from_lsd(digits).stripped();
    Ok(OstrowskiWord { digits: word, cf: cf.clone() })
}

/// `sum_k digit_k * q_{k-1}`; defined for any digit string.
pub fn decode<T: Natural>(cf: &ContinuedFraction, w: &DigitWord) -> Result<T, NumerationError> {
    let len = w.stripped().len();
    let mut total = T::zero();
    let mut prev = T::zero();
    let mut cur = T::one();
    for k in 1..=len {
        let d = w.digit(k);
        if d != 0 {
            let term = T::from_u32(d).and_then(|d| d.checked_mul(&cur)).ok_or(NumerationError::Overflow)?;
            total = total.checked_add(&term).ok_or(NumerationError::Overflow)?;
        }
        if k < len {
            let a = T::from_u32(cf.partial_quotient(k)?).ok_or(NumerationError::Overflow)?;
            let next = a.checked_mul(&cur).and_then(|x| x.checked_add(&prev)).ok_or(NumerationError::Overflow)?;
            prev = std::mem::replace(&mut cur, next);
        }
    }
    Ok(total)
}

/// Checks `b_1 < a_1`, `b_k <= a_k`, and `b_k = a_k => b_{k-1} = 0`.
pub fn check_valid(cf: &ContinuedFraction, w: &DigitWord) -> Result<(), NumerationError> {
    let digits = w.lsd();
    for (i, &b) in digits.iter().enumerate() {
        let k = i + 1;
        if b == 0 {
            continue;
        }
        let a = cf.partial_quotient(k)?;
        if k == 1 && b >= a {
            return Err(NumerationError::Invalid { position: 1, reason: "b_1 must be smaller than a_1" });
        }
        if b > a {
            return Err(NumerationError::Invalid { position: k, reason: "digit exceeds the partial quotient" });
        }
        if b == a && k > 1 && digits[i - 1] != 0 {
            return Err(NumerationError::Invalid { position: k, reason: "b_k = a_k must be followed by 0" });
        }
    }
    Ok(())
}

/// Whether `w` is an Ostrowski representation (leading zeros permitted).
/// Words that need quotients past a finite expansion are rejected.
pub fn is_valid(cf: &ContinuedFraction, w: &DigitWord) -> bool {
    check_valid(cf, w).is_ok()
}

pub fn validate(cf: &ContinuedFraction, w: DigitWord) -> Result<OstrowskiWord, NumerationError> {
    check_valid(cf, &w)?;
    Ok(OstrowskiWord { digits: w, cf: cf.clone() })
}

//! Eventually periodic continued fractions `[a0; a1, a2, ...]`.
//!
//! Only the partial quotients `a1, a2, ...` matter for the numeration system;
//! `a0` is carried so that an expansion can be echoed back the way it was
//! given. A fraction with a non-empty period is a quadratic irrational and is
//! the only kind for which automata can be built. A fraction with an empty
//! period is an explicit finite prefix: arithmetic works as long as the needed
//! quotients are listed.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::Natural;

/// Largest admissible `max a_i`: automaton digits are stored in a byte.
pub const MAX_AUTOMATON_QUOTIENT: u32 = 127;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContfracError {
    #[error("partial quotient a_{index} is unknown: only {known} quotients were given")]
    IndexBeyondKnownPrefix { index: usize, known: usize },
    #[error("partial quotients are indexed from 1, got index 0")]
    IndexZero,
    #[error("partial quotient a_{index} must be positive")]
    ZeroQuotient { index: usize },
    #[error("the expansion has no period, so it is not a quadratic irrational")]
    NotQuadratic,
    #[error("partial quotient {value} exceeds the supported maximum {limit} for automata")]
    QuotientTooLarge { value: u32, limit: u32 },
    #[error("convergent denominator q_{index} overflows the chosen integer type")]
    Overflow { index: usize },
    #[error("cannot parse continued fraction at token `{token}`: {reason}")]
    Parse { token: String, reason: &'static str },
}

/// A continued fraction given by a preperiod and an optional period.
/// Cheap to clone; every representation carries one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    a0: i64,
    preperiod: Arc<[u32]>,
    period: Arc<[u32]>,
}

impl ContinuedFraction {
    pub fn new(a0: i64, preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self, ContfracError> {
        if let Some(pos) = preperiod.iter().chain(&period).position(|&a| a == 0) {
            return Err(ContfracError::ZeroQuotient { index: pos + 1 });
        }
        Ok(Self { a0, preperiod: preperiod.into(), period: period.into() })
    }

    /// `[1; 1, 1, ...]`, whose convergent denominators are the Fibonacci numbers.
    pub fn golden_ratio() -> Self {
        Self { a0: 1, preperiod: Arc::new([]), period: Arc::new([1]) }
    }

    pub fn a0(&self) -> i64 {
        self.a0
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn is_quadratic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of known quotients, or `None` when the expansion is periodic.
    pub fn known_len(&self) -> Option<usize> {
        if self.is_quadratic() {
            None
        } else {
            Some(self.preperiod.len())
        }
    }

    /// `a_k` for `k >= 1`, extended periodically past the preperiod.
    pub fn partial_quotient(&self, k: usize) -> Result<u32, ContfracError> {
        if k == 0 {
            return Err(ContfracError::IndexZero);
        }
        let pre = self.preperiod.len();
        if k <= pre {
            return Ok(self.preperiod[k - 1]);
        }
        if self.period.is_empty() {
            return Err(ContfracError::IndexBeyondKnownPrefix { index: k, known: pre });
        }
        Ok(self.period[(k - pre - 1) % self.period.len()])
    }

    /// The largest listed partial quotient (`mu`), or 1 for an empty expansion.
    pub fn max_quotient(&self) -> u32 {
        self.preperiod.iter().chain(self.period.iter()).copied().max().unwrap_or(1)
    }

    /// Largest digit of the working alphabet `{0, ..., 2 mu + 1}`.
    pub fn digit_bound(&self) -> u32 {
        2 * self.max_quotient() + 1
    }

    /// `[q_0, ..., q_n]` with `q_{-1} = 0`, `q_0 = 1` and
    /// `q_{k+1} = a_{k+1} q_k + q_{k-1}`.
    pub fn convergent_denominators<T: Natural>(&self, n: usize) -> Result<Vec<T>, ContfracError> {
        let mut out = Vec::with_capacity(n + 1);
        let mut prev = T::zero();
        let mut cur = T::one();
        out.push(cur.clone());
        for k in 1..=n {
            let a = T::from_u32(self.partial_quotient(k)?).ok_or(ContfracError::Overflow { index: k })?;
            let next = a
                .checked_mul(&cur)
                .and_then(|x| x.checked_add(&prev))
                .ok_or(ContfracError::Overflow { index: k })?;
            prev = std::mem::replace(&mut cur, next);
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// The same sequence `a1, a2, ...` written with the shortest preperiod and
    /// a primitive period. `a0` is kept.
    pub fn canonical(&self) -> Self {
        let mut pre = self.preperiod.to_vec();
        let mut period = self.period.to_vec();
        if !period.is_empty() {
            let p = period.len();
            if let Some(d) = (1..=p).find(|&d| p % d == 0 && (0..p).all(|i| period[i] == period[i % d])) {
                period.truncate(d);
            }
            while let (Some(&last_pre), Some(&last_per)) = (pre.last(), period.last()) {
                if last_pre != last_per {
                    break;
                }
                pre.pop();
                period.rotate_right(1);
            }
        }
        Self { a0: self.a0, preperiod: pre.into(), period: period.into() }
    }

    /// True when both fractions have the same quotients `a1, a2, ...`.
    pub fn same_quotients(&self, other: &Self) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a.preperiod == b.preperiod && a.period == b.period
    }

    pub fn automaton_parameters(&self) -> Result<AutomatonParameters, ContfracError> {
        AutomatonParameters::new(self)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.a0)?;
        let mut first = true;
        for a in self.preperiod.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        if !self.period.is_empty() {
            if !first {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (i, a) in self.period.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn parse_quotient(token: &str) -> Result<u32, ContfracError> {
    let t = token.trim();
    if t.is_empty() {
        return Err(ContfracError::Parse { token: token.to_string(), reason: "empty partial quotient" });
    }
    let value: u32 = t
        .parse()
        .map_err(|_| ContfracError::Parse { token: t.to_string(), reason: "expected a positive integer" })?;
    if value == 0 {
        return Err(ContfracError::Parse { token: t.to_string(), reason: "partial quotients must be positive" });
    }
    Ok(value)
}

fn parse_list(text: &str, allow_trailing_comma: bool) -> Result<Vec<u32>, ContfracError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    let t = if allow_trailing_comma { t.strip_suffix(',').unwrap_or(t) } else { t };
    t.split(',').map(parse_quotient).collect()
}

/// Parses `a0;p1,p2,...,(c1,c2,...)`, e.g. `1;(2)` or `0;1,(1,2)`. Surrounding
/// square brackets are accepted.
impl FromStr for ContinuedFraction {
    type Err = ContfracError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut text = s.trim();
        if let Some(inner) = text.strip_prefix('[') {
            text = inner
                .strip_suffix(']')
                .ok_or(ContfracError::Parse { token: s.trim().to_string(), reason: "unbalanced `[`" })?
                .trim();
        }
        let (head, tail) = text
            .split_once(';')
            .ok_or(ContfracError::Parse { token: text.to_string(), reason: "expected `a0;` before the quotients" })?;
        let head = head.trim();
        let a0: i64 = head
            .parse()
            .map_err(|_| ContfracError::Parse { token: head.to_string(), reason: "expected an integer a0" })?;
        let tail = tail.trim();
        let (preperiod, period) = match tail.find('(') {
            None => {
                if let Some(bad) = tail.find(')') {
                    return Err(ContfracError::Parse { token: tail[bad..].to_string(), reason: "unbalanced `)`" });
                }
                (parse_list(tail, false)?, Vec::new())
            }
            Some(open) => {
                let close = tail
                    .rfind(')')
                    .ok_or(ContfracError::Parse { token: tail[open..].to_string(), reason: "unclosed period" })?;
                if close < open {
                    return Err(ContfracError::Parse { token: tail[close..].to_string(), reason: "unbalanced `)`" });
                }
                let rest = tail[close + 1..].trim();
                if !rest.is_empty() {
                    return Err(ContfracError::Parse { token: rest.to_string(), reason: "unexpected text after the period" });
                }
                let pre_text = tail[..open].trim();
                if !pre_text.is_empty() && !pre_text.ends_with(',') {
                    return Err(ContfracError::Parse { token: pre_text.to_string(), reason: "expected `,` before the period" });
                }
                let period = parse_list(&tail[open + 1..close], false)?;
                if period.is_empty() {
                    return Err(ContfracError::Parse { token: "()".to_string(), reason: "empty period" });
                }
                (parse_list(pre_text, true)?, period)
            }
        };
        ContinuedFraction::new(a0, preperiod, period)
    }
}

/// Quantities fixing the shape of the recognizing automata.
///
/// The sequence is written as `[a0; a1, ..., a_{xi-1}, (a_xi, ..., a_nu)]`
/// with `xi > 4` and `nu - xi >= 3`, so that every window of width four that
/// reaches back from the periodic block stays inside one repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonParameters {
    pub mu: u32,
    pub m: u32,
    pub xi: usize,
    pub nu: usize,
    /// `a_1, ..., a_nu` (index 0 holds `a_1`).
    pub unrolled: Vec<u32>,
}

impl AutomatonParameters {
    /// Minimal choice: `xi` is the first admissible start of the repeating
    /// block, and the block is the fewest whole copies of the primitive period
    /// with length at least four.
    pub fn new(cf: &ContinuedFraction) -> Result<Self, ContfracError> {
        if !cf.is_quadratic() {
            return Err(ContfracError::NotQuadratic);
        }
        let canon = cf.canonical();
        let mu = canon.max_quotient();
        if mu > MAX_AUTOMATON_QUOTIENT {
            return Err(ContfracError::QuotientTooLarge { value: mu, limit: MAX_AUTOMATON_QUOTIENT });
        }
        let xi = (canon.preperiod.len() + 1).max(5);
        let p0 = canon.period.len();
        let period_len = p0 * 4usize.div_ceil(p0);
        let nu = xi + period_len - 1;
        let unrolled = (1..=nu).map(|k| canon.partial_quotient(k)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { mu, m: 2 * mu + 1, xi, nu, unrolled })
    }

    /// Length of the repeating block `a_xi, ..., a_nu`.
    pub fn period_len(&self) -> usize {
        self.nu - self.xi + 1
    }

    /// `a_k` for any `k >= 1`.
    pub fn a(&self, k: usize) -> u32 {
        debug_assert!(k >= 1);
        if k <= self.nu {
            self.unrolled[k - 1]
        } else {
            let p = self.period_len();
            self.unrolled[self.xi + (k - self.xi) % p - 1]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn cf(s: &str) -> ContinuedFraction {
        s.parse().unwrap()
    }

    #[test]
    fn partial_quotients_extend_periodically() {
        assert_eq!(cf("1;(1)").partial_quotient(7), Ok(1));
        assert_eq!(cf("1;(2)").partial_quotient(3), Ok(2));
        assert_eq!(cf("0;1,2,(3,1,4)").partial_quotient(7), Ok(1));
        assert_eq!(cf("0;1,2,(3,1,4)").partial_quotient(3), Ok(3));
        assert_eq!(cf("1;(2)").partial_quotient(0), Err(ContfracError::IndexZero));
    }

    #[test]
    fn finite_prefix_runs_out() {
        let f = cf("0;1,2,3");
        assert!(!f.is_quadratic());
        assert_eq!(f.partial_quotient(3), Ok(3));
        assert_eq!(f.partial_quotient(4), Err(ContfracError::IndexBeyondKnownPrefix { index: 4, known: 3 }));
        assert!(f.convergent_denominators::<u64>(4).is_err());
    }

    #[test]
    fn convergents_of_golden_ratio_are_fibonacci() {
        let q: Vec<u64> = cf("1;(1)").convergent_denominators(6).unwrap();
        assert_eq!(q, vec![1, 1, 2, 3, 5, 8, 13]);
    }

    /// Denominators of the convergents p_k/q_k computed with exact fraction
    /// arithmetic, evaluating each truncated expansion from the bottom up.
    fn denominators_by_fractions(f: &ContinuedFraction, n: usize) -> Vec<BigUint> {
        use num_integer::Integer;
        (0..=n)
            .map(|k| {
                // value of [0; a1, ..., ak] as num/den, reduced
                let (mut num, mut den) = (BigUint::from(0u32), BigUint::from(1u32));
                for i in (1..=k).rev() {
                    let a = BigUint::from(f.partial_quotient(i).unwrap());
                    // 1 / (a + num/den) = den / (a*den + num)
                    let new_den = &a * &den + &num;
                    num = den;
                    den = new_den;
                    let g = num.gcd(&den);
                    num /= &g;
                    den /= &g;
                }
                den
            })
            .collect()
    }

    #[test]
    fn convergents_match_fraction_arithmetic() {
        for s in ["1;(2)", "1;(1)", "0;1,(1,2)", "1;(3,1,2)", "0;1,2,(3,1,4)"] {
            let f = cf(s);
            let q: Vec<BigUint> = f.convergent_denominators(30).unwrap();
            assert_eq!(q, denominators_by_fractions(&f, 30), "{s}");
        }
        let q: Vec<u64> = cf("1;(2)").convergent_denominators(4).unwrap();
        assert_eq!(q, vec![1, 2, 5, 12, 29]);
    }

    #[test]
    fn n_zero_gives_q0() {
        let q: Vec<BigUint> = cf("0;1,(1,2)").convergent_denominators(0).unwrap();
        assert_eq!(q, vec![BigUint::from(1u32)]);
    }

    #[test]
    fn fixed_width_overflow_is_reported() {
        let err = cf("1;(1)").convergent_denominators::<u8>(20).unwrap_err();
        assert_eq!(err, ContfracError::Overflow { index: 13 });
    }

    /// Lexicographically smallest `(xi, nu)` with `xi > 4`, `nu - xi >= 3` and
    /// the sequence periodic from `xi` with block length `nu - xi + 1`.
    fn brute_force_xi_nu(f: &ContinuedFraction) -> (usize, usize) {
        let horizon = 200;
        for xi in 5..60 {
            for nu in xi + 3..xi + 60 {
                let p = nu - xi + 1;
                let periodic = (xi..horizon)
                    .all(|k| f.partial_quotient(k).unwrap() == f.partial_quotient(k + p).unwrap());
                if periodic {
                    return (xi, nu);
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn parameters_are_minimal() {
        let p = cf("1;(1)").automaton_parameters().unwrap();
        assert_eq!((p.mu, p.m, p.xi, p.nu), (1, 3, 5, 8));
        let p = cf("1;(2)").automaton_parameters().unwrap();
        assert_eq!((p.mu, p.m), (2, 5));
        let p = cf("0;1,(1,2)").automaton_parameters().unwrap();
        assert_eq!((p.mu, p.m), (2, 5));
        for s in ["1;(1)", "1;(2)", "0;1,(1,2)", "1;(3,1,2)", "0;1,2,(3,1,4)", "2;1,1,1,1,1,(1)", "0;5,6,7,8,9,10,(2,2)"] {
            let f = cf(s);
            let p = f.automaton_parameters().unwrap();
            assert_eq!((p.xi, p.nu), brute_force_xi_nu(&f), "{s}");
        }
    }

    #[test]
    fn parameters_need_a_period() {
        assert_eq!(cf("0;1,2").automaton_parameters(), Err(ContfracError::NotQuadratic));
        assert!(matches!(
            cf("0;(200)").automaton_parameters(),
            Err(ContfracError::QuotientTooLarge { value: 200, .. })
        ));
    }

    #[test]
    fn parse_and_display() {
        for s in ["1;(2)", "0;1,(1,2)", "1;(3,1,2)", "0;1,2,3", "-2;(1)", "3;"] {
            assert_eq!(cf(s).to_string(), s);
        }
        assert_eq!(cf("[ 1 ; 2 , ( 1 , 2 ) ]").to_string(), "1;2,(1,2)");
        let err = "1;(2,x)".parse::<ContinuedFraction>().unwrap_err();
        assert!(matches!(err, ContfracError::Parse { ref token, .. } if token == "x"), "{err}");
        let err = "1;(0)".parse::<ContinuedFraction>().unwrap_err();
        assert!(matches!(err, ContfracError::Parse { ref token, .. } if token == "0"));
        let err = "1,2".parse::<ContinuedFraction>().unwrap_err();
        assert!(matches!(err, ContfracError::Parse { .. }));
        assert!("1;(2".parse::<ContinuedFraction>().is_err());
        assert!("1;2(3)".parse::<ContinuedFraction>().is_err());
        assert!("1;()".parse::<ContinuedFraction>().is_err());
        assert!("x;(1)".parse::<ContinuedFraction>().is_err());
    }

    #[test]
    fn canonical_form() {
        let c = cf("0;1,2,(1,2,1,2)").canonical();
        assert_eq!((c.preperiod(), c.period()), (&[][..], &[1, 2][..]));
        assert!(cf("0;(1)").same_quotients(&cf("5;1,1,(1,1)")));
        assert!(!cf("0;(1)").same_quotients(&cf("0;(2)")));
    }

    fn arb_quadratic() -> impl Strategy<Value = ContinuedFraction> {
        (
            prop::collection::vec(1u32..5, 0..4),
            prop::collection::vec(1u32..5, 1..4),
        )
            .prop_map(|(pre, per)| ContinuedFraction::new(0, pre, per).unwrap())
    }

    proptest! {
        #[test]
        fn recurrence_holds_exactly(f in arb_quadratic(), k in 1usize..50) {
            let q: Vec<BigUint> = f.convergent_denominators(k + 1).unwrap();
            let a = BigUint::from(f.partial_quotient(k + 1).unwrap());
            prop_assert_eq!(&q[k + 1] - &a * &q[k], q[k - 1].clone());
            prop_assert!(q[k + 1] > q[k]);
        }

        #[test]
        fn periodicity(f in arb_quadratic(), k in 1usize..60) {
            let p = f.period().len();
            if k > f.preperiod().len() {
                prop_assert_eq!(f.partial_quotient(k), f.partial_quotient(k + p));
            }
        }

        #[test]
        fn parameter_invariants(f in arb_quadratic()) {
            let p = f.automaton_parameters().unwrap();
            prop_assert_eq!(p.m, 2 * p.mu + 1);
            prop_assert!(p.xi > 4 && p.nu - p.xi >= 3);
            for i in 1..=p.nu {
                prop_assert_eq!(p.unrolled[i - 1], f.partial_quotient(i).unwrap());
            }
            for k in 1..100 {
                prop_assert_eq!(p.a(k), f.partial_quotient(k).unwrap());
            }
        }

        #[test]
        fn canonical_form_keeps_the_sequence(f in arb_quadratic()) {
            let c = f.canonical();
            for k in 1..40 {
                prop_assert_eq!(c.partial_quotient(k), f.partial_quotient(k));
            }
            prop_assert!(c.preperiod().len() <= f.preperiod().len());
        }

        #[test]
        fn display_round_trips(f in arb_quadratic()) {
            prop_assert_eq!(f.to_string().parse::<ContinuedFraction>().unwrap(), f);
        }
    }
}

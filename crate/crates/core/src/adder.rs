//! Linear-time addition of Ostrowski representations.
//!
//! The digitwise sum `s` of two representations is turned into the
//! representation of the sum by three passes over a window:
//!
//! 1. left to right with a window of width four (rules A1-A3), finishing
//!    with a width-three step on the last three digits (rules B1-B5);
//! 2. right to left with a window of width three (rule C);
//! 3. left to right with the same width-three rule.
//!
//! Each pass leaves the represented value unchanged. Positions are 1-based
//! from the least significant end and step `k` of a pass acts on the window
//! whose leftmost position is `k`.

use std::fmt;

use thiserror::Error;

use crate::contfrac::{ContfracError, ContinuedFraction};
use crate::numeration::{self, DigitWord, NumerationError, OstrowskiWord};
use crate::Natural;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdderError {
    #[error("summands are relative to different continued fractions")]
    CfMismatch,
    #[error("digit {value} at position {position} exceeds the alphabet bound {bound}")]
    DigitOutOfRange { position: usize, value: u32, bound: u32 },
    #[error("internal invariant violated ({check}) at step {step}: {detail}")]
    InvariantViolation { check: &'static str, step: usize, detail: String },
    #[error(transparent)]
    Contfrac(#[from] ContfracError),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
}

/// The rule applied at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    B4,
    B5,
    /// The width-three rule of passes 2 and 3 fired.
    C,
    /// The width-three rule did not apply.
    Skip,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::A1 => "A1",
            Rule::A2 => "A2",
            Rule::A3 => "A3",
            Rule::B1 => "B1",
            Rule::B2 => "B2",
            Rule::B3 => "B3",
            Rule::B4 => "B4",
            Rule::B5 => "B5",
            Rule::C => "C",
            Rule::Skip => "skip",
        };
        f.write_str(s)
    }
}

/// One step of a pass. Windows list positions `k, k-1, ...` (most
/// significant first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub pass: u8,
    pub k: usize,
    pub before: Vec<u32>,
    pub after: Vec<u32>,
    pub rule: Rule,
}

fn join_digits(f: &mut fmt::Formatter<'_>, digits: &[u32]) -> fmt::Result {
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pass={} k={} window_before=", self.pass, self.k)?;
        join_digits(f, &self.before)?;
        f.write_str(" window_after=")?;
        join_digits(f, &self.after)?;
        write!(f, " rule={}", self.rule)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PassOptions {
    /// Record every step.
    pub trace: bool,
    /// Assert the window lemmas while running. Only meaningful when the
    /// input of pass 1 is a digitwise sum of two representations.
    pub check_invariants: bool,
}

impl PassOptions {
    pub fn checked() -> Self {
        Self { trace: false, check_invariants: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassOutcome {
    pub output: DigitWord,
    pub trace: Vec<TraceRecord>,
    /// Digit reads performed by the pass itself.
    pub reads: usize,
}

/// Working word with 1-based positions and a read counter.
struct Tape<'a> {
    digits: Vec<u32>,
    bound: u32,
    reads: usize,
    cf: &'a ContinuedFraction,
    /// `a_1, a_2, ...`, at least as long as the word when the expansion allows.
    quotients: &'a [u32],
}

impl<'a> Tape<'a> {
    fn new(cf: &'a ContinuedFraction, quotients: &'a [u32], digits: Vec<u32>) -> Result<Self, AdderError> {
        let bound = cf.digit_bound();
        if let Some((i, &value)) = digits.iter().enumerate().find(|(_, &d)| d > bound) {
            return Err(AdderError::DigitOutOfRange { position: i + 1, value, bound });
        }
        Ok(Self { digits, bound, reads: 0, cf, quotients })
    }

    fn len(&self) -> usize {
        self.digits.len()
    }

    fn read(&mut self, pos: usize) -> u32 {
        self.reads += 1;
        self.digits[pos - 1]
    }

    /// Uncounted access for invariant checks.
    fn peek(&self, pos: usize) -> u32 {
        self.digits[pos - 1]
    }

    fn write(&mut self, pos: usize, value: u32) -> Result<(), AdderError> {
        if value > self.bound {
            return Err(AdderError::DigitOutOfRange { position: pos, value, bound: self.bound });
        }
        self.digits[pos - 1] = value;
        Ok(())
    }

    fn a(&self, k: usize) -> Result<u32, AdderError> {
        match self.quotients.get(k.wrapping_sub(1)) {
            Some(&a) => Ok(a),
            None => Ok(self.cf.partial_quotient(k)?),
        }
    }

    fn into_word(self) -> DigitWord {
        DigitWord::from_lsd(self.digits)
    }
}

/// `a_1, ..., a_n`, or the known prefix of a finite expansion.
fn quotient_table(cf: &ContinuedFraction, n: usize) -> Vec<u32> {
    let (pre, period) = (cf.preperiod(), cf.period());
    let mut table = Vec::with_capacity(n);
    table.extend_from_slice(&pre[..pre.len().min(n)]);
    while table.len() < n && !period.is_empty() {
        let take = (n - table.len()).min(period.len());
        table.extend_from_slice(&period[..take]);
    }
    table
}

fn violation(check: &'static str, step: usize, detail: String) -> AdderError {
    AdderError::InvariantViolation { check, step, detail }
}

/// Window lemmas on the word before step `k` of pass 1.
fn check_pass1_lemmas(tape: &Tape<'_>, k: usize) -> Result<(), AdderError> {
    let m = tape.len();
    let (a_k, a_k1, a_k2) = (tape.a(k)?, tape.a(k - 1)?, tape.a(k - 2)?);
    let z_k = if k <= m { tape.peek(k) } else { 0 };
    let (z_k1, z_k2) = (tape.peek(k - 1), tape.peek(k - 2));
    if z_k1 == 2 * a_k1 + 1 && z_k2 != 0 {
        return Err(violation("z[k-1] = 2a+1 forces z[k-2] = 0", k, format!("z[k-2] = {z_k2}")));
    }
    if z_k1 == 2 * a_k1 && z_k2 > a_k2 {
        return Err(violation("z[k-1] = 2a forces z[k-2] <= a[k-2]", k, format!("z[k-2] = {z_k2} > {a_k2}")));
    }
    if z_k1 > a_k1 && z_k >= a_k {
        return Err(violation("z[k-1] > a[k-1] forces z[k] < a[k]", k, format!("z[k] = {z_k}")));
    }
    if z_k1 == a_k1 && z_k2 > 0 && z_k >= a_k {
        return Err(violation("z[k-1] = a[k-1], z[k-2] > 0 forces z[k] < a[k]", k, format!("z[k] = {z_k}")));
    }
    Ok(())
}

/// Pass 1. Inputs shorter than four digits are padded with leading zeros.
pub fn pass1(cf: &ContinuedFraction, s: &DigitWord) -> Result<DigitWord, AdderError> {
    Ok(run_pass1(cf, s, PassOptions::default())?.output)
}

pub fn run_pass1(cf: &ContinuedFraction, s: &DigitWord, opts: PassOptions) -> Result<PassOutcome, AdderError> {
    pass1_with(cf, &quotient_table(cf, s.len().max(4)), s, opts)
}

fn pass1_with(cf: &ContinuedFraction, quotients: &[u32], s: &DigitWord, opts: PassOptions) -> Result<PassOutcome, AdderError> {
    let mut tape = Tape::new(cf, quotients, s.padded(4).into_lsd())?;
    let m = tape.len();
    let mut trace = Vec::new();
    for k in (4..=m).rev() {
        if opts.check_invariants {
            check_pass1_lemmas(&tape, k)?;
        }
        let (a_k, a_k1, a_k2) = (tape.a(k)?, tape.a(k - 1)?, tape.a(k - 2)?);
        let before = [tape.read(k), tape.read(k - 1), tape.read(k - 2), tape.read(k - 3)];
        let [z_k, z_k1, z_k2, z_k3] = before;
        let (after, rule) = if z_k < a_k && z_k1 > a_k1 && z_k2 == 0 {
            ([z_k + 1, z_k1 - (a_k1 + 1), a_k2 - 1, z_k3 + 1], Rule::A1)
        } else if z_k < a_k && a_k1 <= z_k1 && z_k1 <= 2 * a_k1 && z_k2 > 0 {
            ([z_k + 1, z_k1 - a_k1, z_k2 - 1, z_k3], Rule::A2)
        } else {
            (before, Rule::A3)
        };
        if rule != Rule::A3 {
            for (offset, &d) in after.iter().enumerate() {
                tape.write(k - offset, d)?;
            }
        }
        if opts.trace {
            trace.push(TraceRecord { pass: 1, k, before: before.to_vec(), after: after.to_vec(), rule });
        }
    }

    if opts.check_invariants {
        check_pass1_lemmas(&tape, 3)?;
    }
    let (a1, a2, a3) = (tape.a(1)?, tape.a(2)?, tape.a(3)?);
    let before = [tape.read(3), tape.read(2), tape.read(1)];
    let [z3, z2, z1] = before;
    let (after, rule) = if z3 < a3 && z2 > a2 && z1 == 0 {
        ([z3 + 1, z2 - (a2 + 1), a1 - 1], Rule::B1)
    } else if z3 < a3 && z2 >= a2 && a1 >= z1 && z1 > 0 {
        ([z3 + 1, z2 - a2, z1 - 1], Rule::B2)
    } else if z3 < a3 && z2 >= a2 && z1 > a1 {
        ([z3 + 1, z2 - a2 + 1, z1 - a1 - 1], Rule::B3)
    } else if z2 < a2 && z1 >= a1 {
        ([z3, z2 + 1, z1 - a1], Rule::B4)
    } else {
        (before, Rule::B5)
    };
    if rule != Rule::B5 {
        for (offset, &d) in after.iter().enumerate() {
            tape.write(3 - offset, d)?;
        }
    }
    if opts.trace {
        trace.push(TraceRecord { pass: 1, k: 3, before: before.to_vec(), after: after.to_vec(), rule });
    }

    if opts.check_invariants {
        for k in 1..=m {
            let (z, a) = (tape.peek(k), tape.a(k)?);
            if (k == 1 && z >= a) || z > a {
                return Err(violation("pass-1 output digit bound", k, format!("digit {z} against a = {a}")));
            }
        }
    }
    let reads = tape.reads;
    Ok(PassOutcome { output: tape.into_word(), trace, reads })
}

/// The width-three rule shared by passes 2 and 3; returns whether it fired.
fn window_rule(tape: &mut Tape<'_>, k: usize, pass: u8, trace: Option<&mut Vec<TraceRecord>>) -> Result<bool, AdderError> {
    let (a_k, a_k1) = (tape.a(k)?, tape.a(k - 1)?);
    let before = [tape.read(k), tape.read(k - 1), tape.read(k - 2)];
    let [w_k, w_k1, w_k2] = before;
    let fire = w_k < a_k && w_k1 == a_k1 && w_k2 > 0;
    let after = if fire { [w_k + 1, 0, w_k2 - 1] } else { before };
    if fire {
        tape.write(k, after[0])?;
        tape.write(k - 1, after[1])?;
        tape.write(k - 2, after[2])?;
    }
    if let Some(trace) = trace {
        let rule = if fire { Rule::C } else { Rule::Skip };
        trace.push(TraceRecord { pass, k, before: before.to_vec(), after: after.to_vec(), rule });
    }
    Ok(fire)
}

/// No `k` with `w_k = a_k, w_{k-1} < a_{k-1}, w_{k-2} = a_{k-2}, w_{k-3} > 0`.
fn check_no_gap_pattern(tape: &Tape<'_>, step: usize, check: &'static str) -> Result<(), AdderError> {
    check_no_gap_pattern_in(tape, 4..=tape.len(), step, check)
}

fn check_no_gap_pattern_in(
    tape: &Tape<'_>,
    ends: std::ops::RangeInclusive<usize>,
    step: usize,
    check: &'static str,
) -> Result<(), AdderError> {
    for k in ends {
        if tape.peek(k) == tape.a(k)?
            && tape.peek(k - 1) < tape.a(k - 1)?
            && tape.peek(k - 2) == tape.a(k - 2)?
            && tape.peek(k - 3) > 0
        {
            return Err(violation(check, step, format!("pattern at position {k}")));
        }
    }
    Ok(())
}

fn check_bounded_by_quotients(tape: &Tape<'_>, step: usize, check: &'static str) -> Result<(), AdderError> {
    for k in 1..=tape.len() {
        if tape.peek(k) > tape.a(k)? {
            return Err(violation(check, step, format!("digit {} at position {k}", tape.peek(k))));
        }
    }
    Ok(())
}

fn with_leading_zero(w: &DigitWord) -> Vec<u32> {
    let mut digits = Vec::with_capacity(w.len() + 1);
    digits.extend_from_slice(w.lsd());
    digits.push(0);
    digits
}

/// Pass 2: prepend a zero, then apply the width-three rule for
/// `k = 3, 4, ..., len + 1` (right to left).
pub fn pass2(cf: &ContinuedFraction, z: &DigitWord) -> Result<DigitWord, AdderError> {
    Ok(run_pass2(cf, z, PassOptions::default())?.output)
}

pub fn run_pass2(cf: &ContinuedFraction, z: &DigitWord, opts: PassOptions) -> Result<PassOutcome, AdderError> {
    pass2_with(cf, &quotient_table(cf, z.len() + 1), z, opts)
}

fn pass2_with(cf: &ContinuedFraction, quotients: &[u32], z: &DigitWord, opts: PassOptions) -> Result<PassOutcome, AdderError> {
    let mut tape = Tape::new(cf, quotients, with_leading_zero(z))?;
    let n = tape.len();
    let mut trace = Vec::new();
    for k in 3..=n {
        window_rule(&mut tape, k, 2, opts.trace.then_some(&mut trace))?;
    }
    if opts.check_invariants {
        check_bounded_by_quotients(&tape, n, "pass-2 digits bounded by quotients")?;
        check_no_gap_pattern(&tape, n, "pass-2 output free of the a, <a, a, >0 pattern")?;
    }
    let reads = tape.reads;
    Ok(PassOutcome { output: tape.into_word(), trace, reads })
}

/// Pass 3: prepend a zero, then apply the width-three rule for
/// `k = len + 1, len, ..., 3` (left to right).
pub fn pass3(cf: &ContinuedFraction, w: &DigitWord) -> Result<DigitWord, AdderError> {
    Ok(run_pass3(cf, w, PassOptions::default())?.output)
}

pub fn run_pass3(cf: &ContinuedFraction, w: &DigitWord, opts: PassOptions) -> Result<PassOutcome, AdderError> {
    pass3_with(cf, &quotient_table(cf, w.len() + 1), w, opts)
}

fn pass3_with(cf: &ContinuedFraction, quotients: &[u32], w: &DigitWord, opts: PassOptions) -> Result<PassOutcome, AdderError> {
    let mut tape = Tape::new(cf, quotients, with_leading_zero(w))?;
    let n = tape.len();
    let mut trace = Vec::new();
    for l in (3..=n).rev() {
        window_rule(&mut tape, l, 3, opts.trace.then_some(&mut trace))?;
        if opts.check_invariants {
            // only windows over positions l-2..=l changed since the last step
            const GAP: &str = "pass-3 words free of the a, <a, a, >0 pattern";
            let ends = if l == n { 4..=n } else { (l - 2).max(4)..=(l + 3).min(n) };
            check_no_gap_pattern_in(&tape, ends, l, GAP)?;
            for k in (l - 1).max(2)..=(l + 1).min(n) {
                if tape.peek(k) == tape.a(k)? && tape.peek(k - 1) > 0 {
                    return Err(violation("pass-3 prefix is a valid representation", l, format!("position {k}")));
                }
            }
        }
    }
    let reads = tape.reads;
    Ok(PassOutcome { output: tape.into_word(), trace, reads })
}

/// `s_i = x_i + y_i` with one extra leading zero.
pub fn digitwise_sum(x: &OstrowskiWord, y: &OstrowskiWord) -> Result<DigitWord, AdderError> {
    if !x.same_system(y) {
        return Err(AdderError::CfMismatch);
    }
    let n = x.len().max(y.len());
    let digits = (1..=n + 1)
        .map(|i| if i <= n { x.digits().digit(i) + y.digits().digit(i) } else { 0 })
        .collect();
    Ok(DigitWord::from_lsd(digits))
}

/// Every intermediate word of one addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Addition {
    pub sum: DigitWord,
    pub pass1: PassOutcome,
    pub pass2: PassOutcome,
    pub pass3: PassOutcome,
    /// The representation of the sum, without leading zeros.
    pub result: OstrowskiWord,
}

impl Addition {
    pub fn trace(&self) -> impl Iterator<Item = &TraceRecord> {
        self.pass1.trace.iter().chain(&self.pass2.trace).chain(&self.pass3.trace)
    }
}

/// Adds two representations, asserting the window lemmas on the way.
pub fn add_words(x: &OstrowskiWord, y: &OstrowskiWord, trace: bool) -> Result<Addition, AdderError> {
    let cf = x.continued_fraction();
    let opts = PassOptions { trace, check_invariants: true };
    let sum = digitwise_sum(x, y)?;
    let quotients = quotient_table(cf, sum.len().max(4) + 2);
    let pass1 = pass1_with(cf, &quotients, &sum, opts)?;
    let pass2 = pass2_with(cf, &quotients, &pass1.output, opts)?;
    let pass3 = pass3_with(cf, &quotients, &pass2.output, opts)?;
    let result = numeration::validate(cf, pass3.output.stripped())
        .map_err(|e| violation("result is a valid representation", 3, e.to_string()))?;
    Ok(Addition { sum, pass1, pass2, pass3, result })
}

/// `rho(M + N)` computed from `rho(M)` and `rho(N)` by the three passes.
pub fn add<T: Natural>(cf: &ContinuedFraction, m: &T, n: &T) -> Result<OstrowskiWord, AdderError> {
    let x = numeration::encode(cf, m)?;
    let y = numeration::encode(cf, n)?;
    Ok(add_words(&x, &y, false)?.result)
}

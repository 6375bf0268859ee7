//! First-order formulas over `(N, +, V)` decided by automata.
//!
//! Variables range over the naturals, `+` is addition and `V(x) = y` holds
//! when `y` is the least convergent denominator `q_k` with a nonzero digit in
//! the representation of `x` (and `V(0) = 1`). A numeral such as `2` denotes
//! the number two, whatever its digit string in the chosen numeration; it
//! is compiled from that number's representation.
//!
//! ```
//! use ostrowski::logic::decide;
//! use ostrowski::ContinuedFraction;
//!
//! let golden = ContinuedFraction::golden_ratio();
//! let even_or_odd = "A x. E y. (x = y + y) | (x = y + y + 1)".parse().unwrap();
//! assert!(decide(&golden, &even_or_odd).unwrap());
//! ```

mod compile;
mod syntax;

use thiserror::Error;

use crate::automata::{AutomataError, StateId};
use crate::contfrac::{ContfracError, ContinuedFraction};
use crate::numeration::{self, DigitWord, NumerationError};
use crate::recognizers::RecognizerError;
use crate::Nat;

pub use compile::{Compiled, Compiler};
pub use syntax::{parse, parse_term, Formula, SyntaxError, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("the continued fraction is not eventually periodic, so no automata exist for it")]
    NotQuadratic,
    #[error(transparent)]
    Contfrac(ContfracError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
    #[error("variable `{0}` is free but missing from the variable order")]
    UnboundVariable(String),
    #[error("variable `{0}` is listed twice")]
    DuplicateVariable(String),
    #[error("expected a sentence, but {} free", describe_free(.0))]
    FreeVariablePresent(Vec<String>),
    #[error("the formula has no free variables to enumerate")]
    NoFreeVariables,
}

fn describe_free(vars: &[String]) -> String {
    let list = vars.iter().map(|v| format!("`{v}`")).collect::<Vec<_>>().join(", ");
    if vars.len() == 1 {
        format!("{list} is")
    } else {
        format!("{list} are")
    }
}

impl From<ContfracError> for LogicError {
    fn from(e: ContfracError) -> Self {
        match e {
            ContfracError::NotQuadratic => LogicError::NotQuadratic,
            other => LogicError::Contfrac(other),
        }
    }
}

impl From<RecognizerError> for LogicError {
    fn from(e: RecognizerError) -> Self {
        match e {
            RecognizerError::Contfrac(e) => e.into(),
            RecognizerError::Automata(e) => e.into(),
            RecognizerError::Numeration(e) => e.into(),
            RecognizerError::NoSuchPass(_) => unreachable!("the compiler builds no pass automata"),
        }
    }
}

/// The automaton of `formula` with one track per entry of `order`.
pub fn compile(cf: &ContinuedFraction, formula: &Formula, order: &[String]) -> Result<Compiled, LogicError> {
    Compiler::new(cf)?.compile_ordered(formula, order)
}

/// Whether a sentence holds.
pub fn decide(cf: &ContinuedFraction, sentence: &Formula) -> Result<bool, LogicError> {
    Compiler::new(cf)?.decide(sentence)
}

/// Every satisfying tuple with all entries at most `bound`, in the order of
/// [`Formula::free_vars`], sorted.
pub fn enumerate(cf: &ContinuedFraction, formula: &Formula, bound: &Nat) -> Result<Vec<Vec<Nat>>, LogicError> {
    Compiler::new(cf)?.enumerate(formula, bound)
}

/// A satisfying assignment of the free variables followed by the leading
/// existentially quantified ones, shortest representations first.
pub fn witness(cf: &ContinuedFraction, formula: &Formula) -> Result<Option<Vec<(String, Nat)>>, LogicError> {
    Compiler::new(cf)?.witness(formula)
}

impl Compiler {
    pub fn decide(&mut self, sentence: &Formula) -> Result<bool, LogicError> {
        let free = sentence.free_vars();
        if !free.is_empty() {
            return Err(LogicError::FreeVariablePresent(free));
        }
        match self.compile(sentence)? {
            Compiled::Const(b) => Ok(b),
            Compiled::Auto { .. } => unreachable!("sentences compile to constants"),
        }
    }

    pub fn enumerate(&mut self, formula: &Formula, bound: &Nat) -> Result<Vec<Vec<Nat>>, LogicError> {
        let vars = formula.free_vars();
        if vars.is_empty() {
            return Err(LogicError::NoFreeVariables);
        }
        let Compiled::Auto { automaton, .. } = self.compile_ordered(formula, &vars)? else {
            unreachable!("formulas with free variables compile to automata");
        };
        let cf = self.continued_fraction().clone();
        let len = numeration::encode(&cf, bound)?.len();
        let automaton = automaton.trim();
        let alphabet = automaton.alphabet();

        let mut out = Vec::new();
        let mut path: Vec<Vec<u32>> = Vec::new();
        let mut stack: Vec<(usize, StateId, Vec<u32>)> = automaton.initial().iter().map(|&s| (0, s, Vec::new())).collect();
        while let Some((depth, state, letter)) = stack.pop() {
            path.truncate(depth.saturating_sub(1));
            if depth > 0 {
                path.push(letter);
            }
            if depth == len {
                if automaton.is_final(state) {
                    let tuple = (0..vars.len())
                        .map(|t| {
                            let digits: Vec<u32> = path.iter().map(|l| l[t]).collect();
                            numeration::decode::<Nat>(&cf, &DigitWord::from_msd(&digits))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if tuple.iter().all(|n| n <= bound) {
                        out.push(tuple);
                    }
                }
                continue;
            }
            for &(l, next) in automaton.transitions(state) {
                stack.push((depth + 1, next, alphabet.digits(l)));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn witness(&mut self, formula: &Formula) -> Result<Option<Vec<(String, Nat)>>, LogicError> {
        let mut vars = formula.free_vars();
        let mut body = formula;
        while let Formula::Exists(v, inner) = body {
            if vars.contains(v) {
                break;
            }
            vars.push(v.clone());
            body = inner;
        }
        let compiled = self.compile_ordered(body, &vars)?;
        let automaton = match compiled {
            Compiled::Const(true) => return Ok(Some(Vec::new())),
            Compiled::Const(false) => return Ok(None),
            Compiled::Auto { automaton, .. } => automaton,
        };
        let Some(word) = automaton.shortest_witness() else {
            return Ok(None);
        };
        let cf = self.continued_fraction().clone();
        let values = word
            .tracks()
            .iter()
            .map(|digits| numeration::decode::<Nat>(&cf, digits))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(vars.into_iter().zip(values).collect()))
    }
}

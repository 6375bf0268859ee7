//! Automata for the basic relations of a quadratic Ostrowski numeration.
//!
//! Every builder works over the digit alphabet `{0, ..., 2 mu + 1}` and
//! accepts convolutions of words padded with any number of leading zeros.
//! A machine cannot see positions, so each run starts by guessing the phase
//! of the most significant position (see [`phase`]) and accepts only if the
//! guess runs out exactly at the last letter.
//!
//! The pass automata relate `z` to the output of the corresponding pass run
//! on `0z`; on words of equal length the output fits whenever the input has
//! enough leading zeros.

mod machines;
pub mod phase;
mod product;
pub mod window;

use thiserror::Error;

use crate::automata::{AutomataError, Automaton};
use crate::contfrac::{ContfracError, ContinuedFraction};
use crate::numeration;

use machines::{DigitSum, Equal, FirstPass, LeastTerm, Less, QuotientBound, SecondPass, ThirdPass, ValidRep};
use phase::PhaseSpace;
use product::{AutomatonMachine, Synchronized};

pub use window::WindowRelation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognizerError {
    #[error(transparent)]
    Contfrac(#[from] ContfracError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Numeration(#[from] numeration::NumerationError),
    #[error("there is no pass {0}; passes are numbered 1 to 3")]
    NoSuchPass(u8),
}

/// The relations the command line can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Valid,
    Sum,
    Pass1,
    Pass2,
    Pass3,
    Adder,
    Equal,
    Less,
    LeastTerm,
}

impl Relation {
    pub const ALL: [Relation; 9] = [
        Relation::Valid,
        Relation::Sum,
        Relation::Pass1,
        Relation::Pass2,
        Relation::Pass3,
        Relation::Adder,
        Relation::Equal,
        Relation::Less,
        Relation::LeastTerm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Valid => "valid",
            Relation::Sum => "sum",
            Relation::Pass1 => "pass1",
            Relation::Pass2 => "pass2",
            Relation::Pass3 => "pass3",
            Relation::Adder => "adder",
            Relation::Equal => "eq",
            Relation::Less => "lt",
            Relation::LeastTerm => "va",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn build(self, cf: &ContinuedFraction) -> Result<Automaton, RecognizerError> {
        match self {
            Relation::Valid => build_valid_rep(cf),
            Relation::Sum => build_digit_sum(cf),
            Relation::Pass1 => build_pass_automaton(cf, 1),
            Relation::Pass2 => build_pass_automaton(cf, 2),
            Relation::Pass3 => build_pass_automaton(cf, 3),
            Relation::Adder => build_adder(cf),
            Relation::Equal => build_equality(cf),
            Relation::Less => build_less_than(cf),
            Relation::LeastTerm => build_va_graph(cf),
        }
    }
}

fn setup(cf: &ContinuedFraction) -> Result<(PhaseSpace, u32), RecognizerError> {
    let params = cf.automaton_parameters()?;
    let bound = params.m;
    Ok((PhaseSpace::new(params), bound))
}

/// `0* rho(N)`, minimal.
pub fn build_valid_rep(cf: &ContinuedFraction) -> Result<Automaton, RecognizerError> {
    let (space, bound) = setup(cf)?;
    let valid = ValidRep { space: &space };
    Ok(Synchronized::new(&space, bound, 1).with(&valid, &[0]).build(&[0], false)?.minimize())
}

/// `(x, y, x + y)` with the sum taken digit by digit, minimal.
pub fn build_digit_sum(cf: &ContinuedFraction) -> Result<Automaton, RecognizerError> {
    let (space, bound) = setup(cf)?;
    let sum = DigitSum { space: &space };
    Ok(Synchronized::new(&space, bound, 3).with(&sum, &[0, 1, 2]).build(&[0, 1, 2], false)?.minimize())
}

/// Input and output of pass `pass` as a trimmed nondeterministic automaton
/// whose states are labelled with their phase, window and buffer.
pub fn build_pass_automaton(cf: &ContinuedFraction, pass: u8) -> Result<Automaton, RecognizerError> {
    let (space, bound) = setup(cf)?;
    let first = FirstPass { space: &space, bound };
    let second = SecondPass { space: &space, bound };
    let third = ThirdPass { space: &space };
    let machine: &dyn product::TrackMachine = match pass {
        1 => &first,
        2 => &second,
        3 => &third,
        other => return Err(RecognizerError::NoSuchPass(other)),
    };
    Ok(Synchronized::new(&space, bound, 2).with(machine, &[0, 1]).build(&[0, 1], true)?)
}

/// `(rho(M), rho(N), rho(M + N))` padded, deterministic and minimal.
///
/// Built in stages: the digitwise sum and the first pass, then the second
/// pass, then the third pass with the validity of the result, projecting
/// away the intermediate word and minimizing after each stage. Intermediate
/// words are constrained by the digit bounds every genuine run satisfies,
/// which keeps the stages small without changing the final relation.
pub fn build_adder(cf: &ContinuedFraction) -> Result<Automaton, RecognizerError> {
    let (space, bound) = setup(cf)?;
    let sum = DigitSum { space: &space };
    let first = FirstPass { space: &space, bound };
    let second = SecondPass { space: &space, bound };
    let third = ThirdPass { space: &space };
    let below_strict = QuotientBound { space: &space, strict_first: true };
    let below = QuotientBound { space: &space, strict_first: false };
    let valid = ValidRep { space: &space };

    // tracks: x, y, u0 = x + y, u1
    let stage1 = Synchronized::new(&space, bound, 4)
        .with(&sum, &[0, 1, 2])
        .with(&first, &[2, 3])
        .with(&below_strict, &[3])
        .build(&[0, 1, 3], false)?
        .minimize();
    let carried = AutomatonMachine(&stage1);
    // tracks: x, y, u1, u2
    let stage2 = Synchronized::new(&space, bound, 4)
        .with(&carried, &[0, 1, 2])
        .with(&second, &[2, 3])
        .with(&below, &[3])
        .build(&[0, 1, 3], false)?
        .minimize();
    let carried = AutomatonMachine(&stage2);
    // tracks: x, y, u2, z
    let adder = Synchronized::new(&space, bound, 4)
        .with(&carried, &[0, 1, 2])
        .with(&third, &[2, 3])
        .with(&valid, &[3])
        .build(&[0, 1, 3], false)?
        .minimize();
    Ok(adder)
}

/// The diagonal on representations, minimal.
pub fn build_equality(cf: &ContinuedFraction) -> Result<Automaton, RecognizerError> {
    let (space, bound) = setup(cf)?;
    let eq = Equal { space: &space };
    Ok(Synchronized::new(&space, bound, 2).with(&eq, &[0, 1]).build(&[0, 1], false)?.minimize())
}

/// `(x, y)` with `x < y`, minimal.
pub fn build_less_than(cf: &ContinuedFraction) -> Result<Automaton, RecognizerError> {
    let (space, bound) = setup(cf)?;
    let lt = Less { space: &space };
    Ok(Synchronized::new(&space, bound, 2).with(&lt, &[0, 1]).build(&[0, 1], false)?.minimize())
}

/// The graph of `V`, minimal.
pub fn build_va_graph(cf: &ContinuedFraction) -> Result<Automaton, RecognizerError> {
    let (space, bound) = setup(cf)?;
    let va = LeastTerm { space: &space };
    Ok(Synchronized::new(&space, bound, 2).with(&va, &[0, 1]).build(&[0, 1], false)?.minimize())
}

/// `0* rho(c)` for a single number, minimal.
pub fn build_numeral<T: crate::Natural>(cf: &ContinuedFraction, c: &T) -> Result<Automaton, RecognizerError> {
    let params = cf.automaton_parameters()?;
    let word = numeration::encode(cf, c)?;
    let alphabet = crate::automata::Alphabet::new(1, params.m)?;
    let tuple = crate::automata::convolve(&[word.into_digits()], params.m)?;
    Ok(Automaton::padded_word(alphabet, &tuple)?.minimize())
}

//! Finite automata over tuples of digits.
//!
//! An automaton of arity `r` and digit bound `m` reads words whose letters are
//! `r`-tuples over `{0, ..., m}`, most significant position first. Letters are
//! packed into a single [`Letter`] in mixed radix `m + 1` with track 0 as the
//! most significant component, so sorting letters sorts tuples
//! lexicographically.

mod minimize;
mod ops;
mod text;

use std::collections::VecDeque;

use thiserror::Error;

use crate::numeration::DigitWord;

pub type StateId = u32;
pub type Letter = u32;

/// Upper bound on `(m + 1)^r`.
pub const MAX_ALPHABET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("digit bound mismatch: {left} vs {right}")]
    DigitBoundMismatch { left: u32, right: u32 },
    #[error("digit {value} exceeds the digit bound {bound}")]
    DigitOutOfRange { value: u32, bound: u32 },
    #[error("alphabet of {size} letters is too large")]
    AlphabetTooLarge { size: u64 },
    #[error("arity must be positive")]
    ZeroArity,
    #[error("operation requires a deterministic total automaton")]
    NotDeterministic,
    #[error("cannot project away the only track")]
    ProjectSingleTrack,
    #[error("track {track} out of range for arity {arity}")]
    TrackOutOfRange { track: usize, arity: usize },
    #[error("state {state} out of range ({num_states} states)")]
    StateOutOfRange { state: StateId, num_states: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Tuples of a fixed arity over `{0, ..., digit_bound}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    arity: usize,
    digit_bound: u32,
    size: u32,
}

impl Alphabet {
    pub fn new(arity: usize, digit_bound: u32) -> Result<Self, AutomataError> {
        if arity == 0 {
            return Err(AutomataError::ZeroArity);
        }
        let radix = u64::from(digit_bound) + 1;
        let mut size: u64 = 1;
        for _ in 0..arity {
            size = size.saturating_mul(radix);
            if size > MAX_ALPHABET {
                return Err(AutomataError::AlphabetTooLarge { size });
            }
        }
        Ok(Self { arity, digit_bound, size: size as u32 })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn digit_bound(&self) -> u32 {
        self.digit_bound
    }

    pub fn radix(&self) -> u32 {
        self.digit_bound + 1
    }

    /// Number of letters.
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn letter(&self, digits: &[u32]) -> Result<Letter, AutomataError> {
        if digits.len() != self.arity {
            return Err(AutomataError::ArityMismatch { expected: self.arity, found: digits.len() });
        }
        let mut letter = 0;
        for &d in digits {
            if d > self.digit_bound {
                return Err(AutomataError::DigitOutOfRange { value: d, bound: self.digit_bound });
            }
            letter = letter * self.radix() + d;
        }
        Ok(letter)
    }

    /// Packs digits already known to be in range.
    pub(crate) fn pack(&self, digits: impl IntoIterator<Item = u32>) -> Letter {
        digits.into_iter().fold(0, |acc, d| acc * self.radix() + d)
    }

    pub fn digits(&self, letter: Letter) -> Vec<u32> {
        let mut out = vec![0; self.arity];
        self.unpack_into(letter, &mut out);
        out
    }

    pub(crate) fn unpack_into(&self, mut letter: Letter, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = letter % self.radix();
            letter /= self.radix();
        }
    }

    pub fn digit(&self, letter: Letter, track: usize) -> u32 {
        let shift = self.radix().pow((self.arity - 1 - track) as u32);
        (letter / shift) % self.radix()
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.size
    }
}

/// A word over tuples, most significant letter first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleWord {
    arity: usize,
    letters: Vec<Vec<u32>>,
}

impl TupleWord {
    pub fn new(arity: usize) -> Self {
        Self { arity, letters: Vec::new() }
    }

    pub fn from_letters(arity: usize, letters: Vec<Vec<u32>>) -> Result<Self, AutomataError> {
        if let Some(bad) = letters.iter().find(|l| l.len() != arity) {
            return Err(AutomataError::ArityMismatch { expected: arity, found: bad.len() });
        }
        Ok(Self { arity, letters })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> &[u32] {
        &self.letters[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.letters.iter().map(Vec::as_slice)
    }

    /// The word on one track, leading zeros kept.
    pub fn track(&self, t: usize) -> DigitWord {
        let msd: Vec<u32> = self.letters.iter().map(|l| l[t]).collect();
        DigitWord::from_msd(&msd)
    }

    pub fn tracks(&self) -> Vec<DigitWord> {
        (0..self.arity).map(|t| self.track(t)).collect()
    }
}

/// Aligns the words by padding the shorter ones with leading zeros.
pub fn convolve(words: &[DigitWord], digit_bound: u32) -> Result<TupleWord, AutomataError> {
    if words.is_empty() {
        return Err(AutomataError::ZeroArity);
    }
    let len = words.iter().map(DigitWord::len).max().unwrap_or(0);
    let mut letters = Vec::with_capacity(len);
    for pos in (1..=len).rev() {
        let letter: Vec<u32> = words.iter().map(|w| w.digit(pos)).collect();
        if let Some(&value) = letter.iter().find(|&&d| d > digit_bound) {
            return Err(AutomataError::DigitOutOfRange { value, bound: digit_bound });
        }
        letters.push(letter);
    }
    Ok(TupleWord { arity: words.len(), letters })
}

/// A nondeterministic automaton with dense state ids.
///
/// Transition lists are sorted by `(letter, target)` without duplicates. The
/// automaton is flagged deterministic when it has one initial state and every
/// state has exactly one transition per letter.
#[derive(Debug, Clone)]
pub struct Automaton {
    alphabet: Alphabet,
    initial: Vec<StateId>,
    finals: Vec<bool>,
    transitions: Vec<Vec<(Letter, StateId)>>,
    deterministic: bool,
    labels: Option<Vec<String>>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.initial == other.initial
            && self.finals == other.finals
            && self.transitions == other.transitions
    }
}

impl Eq for Automaton {}

impl Automaton {
    /// Builds an automaton from an edge list, validating every id and digit.
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: Vec<StateId>,
        finals: &[StateId],
        edges: impl IntoIterator<Item = (StateId, Letter, StateId)>,
    ) -> Result<Self, AutomataError> {
        let check = |s: StateId| {
            if (s as usize) < num_states {
                Ok(s)
            } else {
                Err(AutomataError::StateOutOfRange { state: s, num_states })
            }
        };
        let mut is_final = vec![false; num_states];
        for &f in finals {
            is_final[check(f)? as usize] = true;
        }
        for &s in &initial {
            check(s)?;
        }
        let mut transitions = vec![Vec::new(); num_states];
        for (src, letter, dst) in edges {
            check(src)?;
            check(dst)?;
            if letter >= alphabet.size() {
                return Err(AutomataError::DigitOutOfRange { value: letter, bound: alphabet.size() - 1 });
            }
            transitions[src as usize].push((letter, dst));
        }
        Ok(Self::from_parts(alphabet, initial, is_final, transitions))
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        mut initial: Vec<StateId>,
        finals: Vec<bool>,
        mut transitions: Vec<Vec<(Letter, StateId)>>,
    ) -> Self {
        initial.sort_unstable();
        initial.dedup();
        for list in &mut transitions {
            list.sort_unstable();
            list.dedup();
        }
        let size = alphabet.size() as usize;
        let deterministic = initial.len() == 1
            && transitions
                .iter()
                .all(|list| list.len() == size && list.iter().enumerate().all(|(i, &(l, _))| l as usize == i));
        Self { alphabet, initial, finals, transitions, deterministic, labels: None }
    }

    /// Accepts every word, including the empty one.
    pub fn universal(alphabet: Alphabet) -> Self {
        let edges = alphabet.letters().map(|l| (l, 0)).collect();
        Self::from_parts(alphabet, vec![0], vec![true], vec![edges])
    }

    /// Accepts nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        let edges = alphabet.letters().map(|l| (l, 0)).collect();
        Self::from_parts(alphabet, vec![0], vec![false], vec![edges])
    }

    /// Accepts exactly `0* word`.
    pub fn padded_word(alphabet: Alphabet, word: &TupleWord) -> Result<Self, AutomataError> {
        if word.arity() != alphabet.arity() {
            return Err(AutomataError::ArityMismatch { expected: alphabet.arity(), found: word.arity() });
        }
        let n = word.len();
        let mut transitions = vec![vec![(0, 0)]; 1];
        transitions.resize(n + 1, Vec::new());
        for (i, letter) in word.iter().enumerate() {
            transitions[i].push((alphabet.letter(letter)?, (i + 1) as StateId));
        }
        let mut finals = vec![false; n + 1];
        finals[n] = true;
        Ok(Self::from_parts(alphabet, vec![0], finals, transitions))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity()
    }

    pub fn digit_bound(&self) -> u32 {
        self.alphabet.digit_bound()
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(s, _)| s as StateId)
    }

    pub fn transitions(&self, state: StateId) -> &[(Letter, StateId)] {
        &self.transitions[state as usize]
    }

    /// Deterministic and total.
    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.num_states());
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, state: StateId) -> Option<&str> {
        self.labels.as_ref().map(|l| l[state as usize].as_str())
    }

    /// Successors of `state` on `letter`.
    pub fn successors(&self, state: StateId, letter: Letter) -> impl Iterator<Item = StateId> + '_ {
        let list = &self.transitions[state as usize];
        let start = list.partition_point(|&(l, _)| l < letter);
        list[start..].iter().take_while(move |&&(l, _)| l == letter).map(|&(_, d)| d)
    }

    pub fn accepts(&self, word: &TupleWord) -> Result<bool, AutomataError> {
        if word.arity() != self.arity() {
            return Err(AutomataError::ArityMismatch { expected: self.arity(), found: word.arity() });
        }
        let letters = word.iter().map(|l| self.alphabet.letter(l)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.accepts_letters(&letters))
    }

    pub fn accepts_letters(&self, letters: &[Letter]) -> bool {
        if self.deterministic {
            let mut s = self.initial[0];
            for &l in letters {
                s = self.transitions[s as usize][l as usize].1;
            }
            return self.is_final(s);
        }
        let mut current = vec![false; self.num_states()];
        let mut next = current.clone();
        let mut frontier: Vec<StateId> = self.initial.clone();
        for &s in &frontier {
            current[s as usize] = true;
        }
        for &l in letters {
            let mut successors = Vec::new();
            for &s in &frontier {
                for d in self.successors(s, l) {
                    if !next[d as usize] {
                        next[d as usize] = true;
                        successors.push(d);
                    }
                }
            }
            for &s in &frontier {
                current[s as usize] = false;
            }
            std::mem::swap(&mut current, &mut next);
            frontier = successors;
            if frontier.is_empty() {
                return false;
            }
        }
        frontier.iter().any(|&s| self.is_final(s))
    }

    /// A shortest accepted word, if any.
    pub fn shortest_witness(&self) -> Option<TupleWord> {
        let n = self.num_states();
        let mut parent: Vec<Option<(StateId, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &s in &self.initial {
            seen[s as usize] = true;
            queue.push_back(s);
        }
        while let Some(s) = queue.pop_front() {
            if self.is_final(s) {
                let mut letters = Vec::new();
                let mut cur = s;
                while let Some((p, l)) = parent[cur as usize] {
                    letters.push(self.alphabet.digits(l));
                    cur = p;
                }
                letters.reverse();
                return Some(TupleWord { arity: self.arity(), letters });
            }
            for &(l, d) in self.transitions(s) {
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    parent[d as usize] = Some((s, l));
                    queue.push_back(d);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_witness().is_none()
    }
}

#[cfg(test)]
mod tests;

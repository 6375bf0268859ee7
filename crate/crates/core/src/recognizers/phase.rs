//! Positions modulo the periodic tail of the continued fraction.
//!
//! An automaton reading a word most significant digit first does not know
//! the position of the current letter, only what it has guessed about it.
//! Position `k <= nu` is tracked exactly; a position past `nu` is tracked by
//! the index `i` in `xi..=nu` with `i = k (mod p)`, which is enough to recover
//! every partial quotient near `k`.

use crate::contfrac::AutomatonParameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// The position of the next letter; `periodic` marks positions past `nu`.
    At { index: usize, periodic: bool },
    /// The whole word has been read.
    End,
}

#[derive(Debug, Clone)]
pub struct PhaseSpace {
    params: AutomatonParameters,
}

impl PhaseSpace {
    pub fn new(params: AutomatonParameters) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &AutomatonParameters {
        &self.params
    }

    pub fn all(&self) -> Vec<Phase> {
        let (xi, nu) = (self.params.xi, self.params.nu);
        let mut out = vec![Phase::End];
        out.extend((1..=nu).map(|index| Phase::At { index, periodic: false }));
        out.extend((xi..=nu).map(|index| Phase::At { index, periodic: true }));
        out
    }

    /// Phase of position `k`, with `k = 0` meaning the end of the word.
    pub fn of_position(&self, k: usize) -> Phase {
        let (xi, nu) = (self.params.xi, self.params.nu);
        if k == 0 {
            Phase::End
        } else if k <= nu {
            Phase::At { index: k, periodic: false }
        } else {
            Phase::At { index: xi + (k - xi) % self.params.period_len(), periodic: true }
        }
    }

    /// Phases the next (less significant) position can have.
    pub fn successors(&self, phase: Phase) -> impl Iterator<Item = Phase> {
        let (xi, nu) = (self.params.xi, self.params.nu);
        let (first, second) = match phase {
            Phase::End => (None, None),
            Phase::At { index: 1, periodic: false } => (Some(Phase::End), None),
            Phase::At { index, periodic: true } if index == xi => (
                Some(Phase::At { index: nu, periodic: true }),
                Some(Phase::At { index: nu, periodic: false }),
            ),
            Phase::At { index, periodic } => (Some(Phase::At { index: index - 1, periodic }), None),
        };
        first.into_iter().chain(second)
    }

    /// A position with this phase, congruent to every other one modulo the
    /// period as far as the partial quotients are concerned. Zero for `End`.
    pub fn representative(&self, phase: Phase) -> usize {
        match phase {
            Phase::End => 0,
            Phase::At { index, periodic: false } => index,
            Phase::At { index, periodic: true } => index + self.params.period_len(),
        }
    }

    /// `a_{k + offset}` where `k` is any position with this phase.
    pub fn quotient(&self, phase: Phase, offset: isize) -> u32 {
        let k = self.representative(phase) as isize + offset;
        debug_assert!(k >= 1, "no partial quotient at index {k}");
        self.params.a(k as usize)
    }

    /// `(a_k, a_{k-1}, a_{k-2}, a_{k-3})` for the step of the width-four pass
    /// at a position of phase `(i, l)`, written out case by case.
    pub fn window_quotients4(&self, index: usize, periodic: bool) -> [u32; 4] {
        let (xi, nu) = (self.params.xi, self.params.nu);
        let a = |k: usize| self.params.a(k);
        match (periodic, index) {
            (true, i) if i == xi + 2 => [a(i), a(i - 1), a(i - 2), a(nu)],
            (true, i) if i == xi + 1 => [a(i), a(i - 1), a(nu), a(nu - 1)],
            (true, i) if i == xi => [a(i), a(nu), a(nu - 1), a(nu - 2)],
            (_, i) => [a(i), a(i - 1), a(i - 2), a(i - 3)],
        }
    }

    /// `(a_k, a_{k-1}, a_{k-2})` for the width-three passes.
    pub fn window_quotients3(&self, index: usize, periodic: bool) -> [u32; 3] {
        let (xi, nu) = (self.params.xi, self.params.nu);
        let a = |k: usize| self.params.a(k);
        match (periodic, index) {
            (true, i) if i == xi + 1 => [a(i), a(i - 1), a(nu)],
            (true, i) if i == xi => [a(i), a(nu), a(nu - 1)],
            (_, i) => [a(i), a(i - 1), a(i - 2)],
        }
    }
}

//! Synchronized products of track machines.
//!
//! A [`TrackMachine`] is a small automaton over a few tracks whose moves may
//! depend on the phase of the position being read. Several machines placed
//! on tracks of a wider word run in lockstep under one shared phase guess;
//! the product is then projected onto the tracks that are kept.

use std::collections::{HashMap, VecDeque};

use crate::automata::{Alphabet, AutomataError, Automaton, StateId};

use super::phase::{Phase, PhaseSpace};

/// Machine state packed into a word, one byte per stored digit.
pub type Core = u64;

pub fn pack(digits: &[u32]) -> Core {
    digits.iter().fold(0, |acc, &d| (acc << 8) | Core::from(d))
}

pub fn unpack<const N: usize>(core: Core) -> [u32; N] {
    let mut out = [0; N];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = ((core >> (8 * (N - 1 - i))) & 0xff) as u32;
    }
    out
}

pub trait TrackMachine {
    fn arity(&self) -> usize;
    /// Start cores for a word whose most significant position has phase `top`.
    fn initial(&self, top: Phase) -> Vec<Core>;
    /// Cores after reading `letter` at a position of phase `at`.
    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>);
    /// Acceptance once the whole word has been read.
    fn accepting(&self, core: Core) -> bool;
    fn describe(&self, core: Core) -> String;
}

/// A plain automaton as a phase-blind machine.
pub struct AutomatonMachine<'a>(pub &'a Automaton);

impl TrackMachine for AutomatonMachine<'_> {
    fn arity(&self) -> usize {
        self.0.arity()
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        self.0.initial().iter().map(|&s| Core::from(s)).collect()
    }

    fn step(&self, _at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let letter = self.0.alphabet().letter(letter).expect("letter within the digit bound");
        out.extend(self.0.successors(core as StateId, letter).map(Core::from));
    }

    fn accepting(&self, core: Core) -> bool {
        self.0.is_final(core as StateId)
    }

    fn describe(&self, core: Core) -> String {
        format!("q{core}")
    }
}

type Moves = Vec<(Vec<u32>, Core)>;

/// Machines placed on tracks of a common word.
pub struct Synchronized<'a> {
    space: &'a PhaseSpace,
    digit_bound: u32,
    arity: usize,
    parts: Vec<(&'a dyn TrackMachine, Vec<usize>)>,
}

impl<'a> Synchronized<'a> {
    pub fn new(space: &'a PhaseSpace, digit_bound: u32, arity: usize) -> Self {
        Self { space, digit_bound, arity, parts: Vec::new() }
    }

    /// Runs `machine` on the listed tracks, in order.
    pub fn with(mut self, machine: &'a dyn TrackMachine, tracks: &[usize]) -> Self {
        assert_eq!(machine.arity(), tracks.len());
        assert!(tracks.iter().all(|&t| t < self.arity));
        self.parts.push((machine, tracks.to_vec()));
        self
    }

    /// The product restricted to reachable states, over the `keep` tracks.
    /// When tracks are dropped the result is closed under leading zeros.
    pub fn build(&self, keep: &[usize], labelled: bool) -> Result<Automaton, AutomataError> {
        let mut covered = vec![false; self.arity];
        for (_, tracks) in &self.parts {
            for &t in tracks {
                covered[t] = true;
            }
        }
        assert!(covered.iter().all(|&c| c), "every track needs a machine");
        let alphabet = Alphabet::new(keep.len(), self.digit_bound)?;

        let mut memo: Vec<HashMap<(Phase, Core), Moves>> = vec![HashMap::new(); self.parts.len()];
        let mut index: HashMap<(Phase, Vec<Core>), StateId> = HashMap::new();
        let mut keys: Vec<(Phase, Vec<Core>)> = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |key: (Phase, Vec<Core>), keys: &mut Vec<_>, queue: &mut VecDeque<StateId>| {
            *index.entry(key.clone()).or_insert_with(|| {
                keys.push(key);
                queue.push_back((keys.len() - 1) as StateId);
                (keys.len() - 1) as StateId
            })
        };

        let mut initial = Vec::new();
        for top in self.space.all() {
            let starts: Vec<Vec<Core>> = self.parts.iter().map(|(m, _)| m.initial(top)).collect();
            for cores in cartesian(&starts) {
                initial.push(intern((top, cores), &mut keys, &mut queue));
            }
        }

        let mut finals = Vec::new();
        let mut transitions: Vec<Vec<(u32, StateId)>> = Vec::new();
        let mut assignment = vec![None; self.arity];
        while let Some(id) = queue.pop_front() {
            let (phase, cores) = keys[id as usize].clone();
            debug_assert_eq!(id as usize, finals.len());
            if phase == Phase::End {
                finals.push(self.parts.iter().zip(&cores).all(|((m, _), &c)| m.accepting(c)));
                transitions.push(Vec::new());
                continue;
            }
            finals.push(false);
            for (part, &core) in cores.iter().enumerate() {
                memo[part].entry((phase, core)).or_insert_with(|| self.moves(part, phase, core));
            }
            let lists: Vec<&Moves> = cores.iter().enumerate().map(|(part, &core)| &memo[part][&(phase, core)]).collect();
            let mut found = Vec::new();
            let mut next = Vec::with_capacity(cores.len());
            self.join(&lists, 0, &mut assignment, &mut next, &mut |assignment, next| {
                let letter = alphabet.pack(keep.iter().map(|&t| assignment[t].expect("covered track")));
                found.push((letter, next.to_vec()));
            });
            let mut edges = Vec::new();
            for (letter, next) in found {
                for after in self.space.successors(phase) {
                    edges.push((letter, intern((after, next.clone()), &mut keys, &mut queue)));
                }
            }
            transitions.push(edges);
        }

        let mut out = Automaton::from_parts(alphabet, initial, finals, transitions);
        if labelled {
            let labels = keys.iter().map(|(phase, cores)| self.describe(*phase, cores)).collect();
            out = out.with_labels(labels);
        }
        let out = if keep.len() < self.arity { out.zero_closure() } else { out.trim() };
        Ok(out)
    }

    fn moves(&self, part: usize, phase: Phase, core: Core) -> Moves {
        let (machine, tracks) = &self.parts[part];
        let mut moves = Vec::new();
        let mut letter = vec![0; tracks.len()];
        let mut out = Vec::new();
        loop {
            out.clear();
            machine.step(phase, core, &letter, &mut out);
            out.sort_unstable();
            out.dedup();
            moves.extend(out.iter().map(|&c| (letter.clone(), c)));
            // next letter in lexicographic order
            let mut i = letter.len();
            loop {
                if i == 0 {
                    return moves;
                }
                i -= 1;
                if letter[i] < self.digit_bound {
                    letter[i] += 1;
                    letter[i + 1..].iter_mut().for_each(|d| *d = 0);
                    break;
                }
            }
        }
    }

    fn join(
        &self,
        lists: &[&Moves],
        part: usize,
        assignment: &mut Vec<Option<u32>>,
        next: &mut Vec<Core>,
        emit: &mut dyn FnMut(&[Option<u32>], &[Core]),
    ) {
        if part == lists.len() {
            emit(assignment, next);
            return;
        }
        let tracks = &self.parts[part].1;
        let mut fresh = Vec::with_capacity(tracks.len());
        'moves: for (letter, core) in lists[part].iter() {
            fresh.clear();
            for (&t, &d) in tracks.iter().zip(letter) {
                match assignment[t] {
                    Some(x) if x != d => {
                        for &f in &fresh {
                            assignment[f] = None;
                        }
                        continue 'moves;
                    }
                    Some(_) => {}
                    None => {
                        assignment[t] = Some(d);
                        fresh.push(t);
                    }
                }
            }
            next.push(*core);
            self.join(lists, part + 1, assignment, next, emit);
            next.pop();
            for &f in &fresh {
                assignment[f] = None;
            }
        }
    }

    fn describe(&self, phase: Phase, cores: &[Core]) -> String {
        let phase = match phase {
            Phase::End => "end".to_owned(),
            Phase::At { index, periodic } => format!("i={index} l={}", u8::from(periodic)),
        };
        let cores: Vec<String> = self.parts.iter().zip(cores).map(|((m, _), &c)| m.describe(c)).collect();
        format!("{phase} {}", cores.join(" "))
    }
}

fn cartesian(sets: &[Vec<Core>]) -> Vec<Vec<Core>> {
    sets.iter().fold(vec![Vec::new()], |acc, set| {
        acc.iter().flat_map(|prefix| set.iter().map(move |&c| [prefix.as_slice(), &[c]].concat())).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_round_trips() {
        assert_eq!(unpack::<3>(pack(&[7, 0, 255])), [7, 0, 255]);
        assert_eq!(pack(&[1, 2]), 0x0102);
    }
}

use std::collections::{HashMap, VecDeque};

use super::{Alphabet, AutomataError, Automaton, Letter, StateId};

/// Interns state tuples discovered by a breadth-first product search.
struct Discovery<K> {
    index: HashMap<K, StateId>,
    keys: Vec<K>,
    queue: VecDeque<StateId>,
}

impl<K: Clone + Eq + std::hash::Hash> Discovery<K> {
    fn new() -> Self {
        Self { index: HashMap::new(), keys: Vec::new(), queue: VecDeque::new() }
    }

    fn intern(&mut self, key: K) -> StateId {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.keys.len() as StateId;
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        self.queue.push_back(id);
        id
    }

    fn next(&mut self) -> Option<(StateId, K)> {
        let id = self.queue.pop_front()?;
        Some((id, self.keys[id as usize].clone()))
    }
}

impl Automaton {
    fn same_alphabet(&self, other: &Automaton) -> Result<(), AutomataError> {
        if self.arity() != other.arity() {
            return Err(AutomataError::ArityMismatch { expected: self.arity(), found: other.arity() });
        }
        if self.digit_bound() != other.digit_bound() {
            return Err(AutomataError::DigitBoundMismatch { left: self.digit_bound(), right: other.digit_bound() });
        }
        Ok(())
    }

    /// Total subset construction. Unreachable subsets are never built; the
    /// empty subset serves as the sink.
    pub fn determinize(&self) -> Automaton {
        if self.deterministic {
            return self.clone();
        }
        let size = self.alphabet.size() as usize;
        let mut discovery: Discovery<Vec<StateId>> = Discovery::new();
        discovery.intern(self.initial.clone());
        let mut finals = Vec::new();
        let mut transitions = Vec::new();
        let mut buckets: Vec<Vec<StateId>> = vec![Vec::new(); size];
        let mut touched: Vec<Letter> = Vec::new();
        while let Some((_, subset)) = discovery.next() {
            finals.push(subset.iter().any(|&s| self.is_final(s)));
            for &s in &subset {
                for &(l, d) in self.transitions(s) {
                    let bucket = &mut buckets[l as usize];
                    if bucket.is_empty() {
                        touched.push(l);
                    }
                    bucket.push(d);
                }
            }
            for &l in &touched {
                let bucket = &mut buckets[l as usize];
                bucket.sort_unstable();
                bucket.dedup();
            }
            let mut edges = Vec::with_capacity(size);
            for l in 0..size {
                let target = std::mem::take(&mut buckets[l]);
                edges.push((l as Letter, discovery.intern(target)));
            }
            touched.clear();
            transitions.push(edges);
        }
        Automaton::from_parts(self.alphabet, vec![0], finals, transitions)
    }

    /// Language intersection by the reachable product.
    pub fn intersect(&self, other: &Automaton) -> Result<Automaton, AutomataError> {
        self.same_alphabet(other)?;
        Ok(self.product(other, |a, b| a && b))
    }

    /// Language union. Deterministic inputs give a deterministic product;
    /// otherwise the disjoint union is returned.
    pub fn union(&self, other: &Automaton) -> Result<Automaton, AutomataError> {
        self.same_alphabet(other)?;
        if self.deterministic && other.deterministic {
            return Ok(self.product(other, |a, b| a || b));
        }
        let offset = self.num_states() as StateId;
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|&s| s + offset));
        let mut finals = self.finals.clone();
        finals.extend_from_slice(&other.finals);
        let mut transitions = self.transitions.clone();
        transitions.extend(other.transitions.iter().map(|list| list.iter().map(|&(l, d)| (l, d + offset)).collect()));
        Ok(Automaton::from_parts(self.alphabet, initial, finals, transitions))
    }

    fn product(&self, other: &Automaton, accept: impl Fn(bool, bool) -> bool) -> Automaton {
        let mut discovery: Discovery<(StateId, StateId)> = Discovery::new();
        for &p in &self.initial {
            for &q in &other.initial {
                discovery.intern((p, q));
            }
        }
        let initial: Vec<StateId> = (0..discovery.keys.len() as StateId).collect();
        let mut finals = Vec::new();
        let mut transitions = Vec::new();
        while let Some((_, (p, q))) = discovery.next() {
            finals.push(accept(self.is_final(p), other.is_final(q)));
            let (left, right) = (self.transitions(p), other.transitions(q));
            let mut edges = Vec::new();
            let mut j = 0;
            for (i, &(l, d1)) in left.iter().enumerate() {
                if i > 0 && left[i - 1].0 == l {
                    // rewind to the first right edge with this letter
                    while j > 0 && right[j - 1].0 == l {
                        j -= 1;
                    }
                }
                while j < right.len() && right[j].0 < l {
                    j += 1;
                }
                while j < right.len() && right[j].0 == l {
                    edges.push((l, discovery.intern((d1, right[j].1))));
                    j += 1;
                }
            }
            transitions.push(edges);
        }
        Automaton::from_parts(self.alphabet, initial, finals, transitions)
    }

    /// Complement with respect to all words over the alphabet.
    pub fn complement(&self) -> Result<Automaton, AutomataError> {
        if !self.deterministic {
            return Err(AutomataError::NotDeterministic);
        }
        let mut out = self.clone();
        out.labels = None;
        for f in &mut out.finals {
            *f = !*f;
        }
        Ok(out)
    }

    /// Determinizes when needed, then complements.
    pub fn complement_any(&self) -> Automaton {
        self.determinize().complement().expect("determinized automata are total")
    }

    /// Inserts an unconstrained track at `position`.
    pub fn cylindrify(&self, position: usize) -> Result<Automaton, AutomataError> {
        if position > self.arity() {
            return Err(AutomataError::TrackOutOfRange { track: position, arity: self.arity() + 1 });
        }
        let alphabet = Alphabet::new(self.arity() + 1, self.digit_bound())?;
        let mut digits = vec![0; self.arity()];
        let transitions = self
            .transitions
            .iter()
            .map(|list| {
                let mut edges = Vec::with_capacity(list.len() * alphabet.radix() as usize);
                for &(l, d) in list {
                    self.alphabet.unpack_into(l, &mut digits);
                    for x in 0..alphabet.radix() {
                        let lifted = digits[..position].iter().copied().chain([x]).chain(digits[position..].iter().copied());
                        edges.push((alphabet.pack(lifted), d));
                    }
                }
                edges
            })
            .collect();
        Ok(Automaton::from_parts(alphabet, self.initial.clone(), self.finals.clone(), transitions))
    }

    /// Existential projection of one track followed by zero closure.
    pub fn project(&self, track: usize) -> Result<Automaton, AutomataError> {
        if self.arity() < 2 {
            return Err(AutomataError::ProjectSingleTrack);
        }
        if track >= self.arity() {
            return Err(AutomataError::TrackOutOfRange { track, arity: self.arity() });
        }
        let keep: Vec<usize> = (0..self.arity()).filter(|&t| t != track).collect();
        Ok(self.map_letters(&keep)?.zero_closure())
    }

    /// Keeps only the listed tracks in the given order, dropping letters'
    /// other components without closing under leading zeros.
    pub(crate) fn map_letters(&self, keep: &[usize]) -> Result<Automaton, AutomataError> {
        if let Some(&track) = keep.iter().find(|&&t| t >= self.arity()) {
            return Err(AutomataError::TrackOutOfRange { track, arity: self.arity() });
        }
        let alphabet = Alphabet::new(keep.len(), self.digit_bound())?;
        let mut digits = vec![0; self.arity()];
        let transitions = self
            .transitions
            .iter()
            .map(|list| {
                list.iter()
                    .map(|&(l, d)| {
                        self.alphabet.unpack_into(l, &mut digits);
                        (alphabet.pack(keep.iter().map(|&t| digits[t])), d)
                    })
                    .collect()
            })
            .collect();
        Ok(Automaton::from_parts(alphabet, self.initial.clone(), self.finals.clone(), transitions))
    }

    /// The language `0* { w : 0^j w accepted for some j }`.
    pub fn zero_closure(&self) -> Automaton {
        let n = self.num_states();
        let mut in_closure = vec![false; n];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &s in &stack {
            in_closure[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for d in self.successors(s, 0) {
                if !in_closure[d as usize] {
                    in_closure[d as usize] = true;
                    stack.push(d);
                }
            }
        }
        let start = n as StateId;
        let mut edges = vec![(0, start)];
        let mut accepting = false;
        for s in (0..n).filter(|&s| in_closure[s]) {
            edges.extend_from_slice(&self.transitions[s]);
            accepting |= self.finals[s];
        }
        let mut transitions = self.transitions.clone();
        transitions.push(edges);
        let mut finals = self.finals.clone();
        finals.push(accepting);
        Automaton::from_parts(self.alphabet, vec![start], finals, transitions).trim()
    }

    /// Removes states that are unreachable or cannot reach a final state.
    pub fn trim(&self) -> Automaton {
        let n = self.num_states();
        let mut reachable = vec![false; n];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &s in &stack {
            reachable[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, d) in self.transitions(s) {
                if !reachable[d as usize] {
                    reachable[d as usize] = true;
                    stack.push(d);
                }
            }
        }
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (s, list) in self.transitions.iter().enumerate() {
            for &(_, d) in list {
                reverse[d as usize].push(s as StateId);
            }
        }
        let mut useful = vec![false; n];
        let mut stack: Vec<StateId> = self.finals().collect();
        for &s in &stack {
            useful[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &reverse[s as usize] {
                if !useful[p as usize] {
                    useful[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let mut renumber = vec![None; n];
        let mut count = 0;
        for s in 0..n {
            if reachable[s] && useful[s] {
                renumber[s] = Some(count as StateId);
                count += 1;
            }
        }
        let initial = self.initial.iter().filter_map(|&s| renumber[s as usize]).collect();
        let mut finals = Vec::with_capacity(count);
        let mut transitions = Vec::with_capacity(count);
        let mut labels = self.labels.as_ref().map(|_| Vec::with_capacity(count));
        for s in (0..n).filter(|&s| renumber[s].is_some()) {
            finals.push(self.finals[s]);
            transitions.push(
                self.transitions[s]
                    .iter()
                    .filter_map(|&(l, d)| renumber[d as usize].map(|d| (l, d)))
                    .collect(),
            );
            if let (Some(out), Some(all)) = (labels.as_mut(), self.labels.as_ref()) {
                out.push(all[s].clone());
            }
        }
        let mut out = Automaton::from_parts(self.alphabet, initial, finals, transitions);
        out.labels = labels;
        out
    }

    /// Language equality, after widening both to a common digit bound.
    pub fn equivalent(&self, other: &Automaton) -> Result<bool, AutomataError> {
        if self.arity() != other.arity() {
            return Err(AutomataError::ArityMismatch { expected: self.arity(), found: other.arity() });
        }
        let bound = self.digit_bound().max(other.digit_bound());
        let left = self.with_digit_bound(bound)?.determinize();
        let right = other.with_digit_bound(bound)?.determinize();
        let mut discovery: Discovery<(StateId, StateId)> = Discovery::new();
        discovery.intern((left.initial[0], right.initial[0]));
        while let Some((_, (p, q))) = discovery.next() {
            if left.is_final(p) != right.is_final(q) {
                return Ok(false);
            }
            for l in left.alphabet.letters() {
                let (dp, dq) = (left.transitions[p as usize][l as usize].1, right.transitions[q as usize][l as usize].1);
                discovery.intern((dp, dq));
            }
        }
        Ok(true)
    }

    /// Reinterprets the automaton over `{0, ..., bound}`. Narrowing drops
    /// letters with a larger digit; widening leaves new letters without
    /// transitions.
    pub fn with_digit_bound(&self, bound: u32) -> Result<Automaton, AutomataError> {
        if bound == self.digit_bound() {
            return Ok(self.clone());
        }
        let alphabet = Alphabet::new(self.arity(), bound)?;
        let mut digits = vec![0; self.arity()];
        let transitions = self
            .transitions
            .iter()
            .map(|list| {
                list.iter()
                    .filter_map(|&(l, d)| {
                        self.alphabet.unpack_into(l, &mut digits);
                        digits.iter().all(|&x| x <= bound).then(|| (alphabet.pack(digits.iter().copied()), d))
                    })
                    .collect()
            })
            .collect();
        Ok(Automaton::from_parts(alphabet, self.initial.clone(), self.finals.clone(), transitions))
    }

    /// Keeps letters whose tracks `keep` and `drop` agree and deletes `drop`.
    pub fn identify_tracks(&self, keep: usize, drop: usize) -> Result<Automaton, AutomataError> {
        let arity = self.arity();
        for track in [keep, drop] {
            if track >= arity {
                return Err(AutomataError::TrackOutOfRange { track, arity });
            }
        }
        if keep == drop {
            return Ok(self.clone());
        }
        if arity < 2 {
            return Err(AutomataError::ProjectSingleTrack);
        }
        let alphabet = Alphabet::new(arity - 1, self.digit_bound())?;
        let mut digits = vec![0; arity];
        let transitions = self
            .transitions
            .iter()
            .map(|list| {
                list.iter()
                    .filter_map(|&(l, d)| {
                        self.alphabet.unpack_into(l, &mut digits);
                        (digits[keep] == digits[drop]).then(|| {
                            let kept = digits.iter().enumerate().filter(|&(t, _)| t != drop).map(|(_, &x)| x);
                            (alphabet.pack(kept), d)
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Automaton::from_parts(alphabet, self.initial.clone(), self.finals.clone(), transitions))
    }

    /// Track `t` of the result is track `order[t]` of `self`.
    pub fn permute_tracks(&self, order: &[usize]) -> Result<Automaton, AutomataError> {
        let arity = self.arity();
        if order.len() != arity {
            return Err(AutomataError::ArityMismatch { expected: arity, found: order.len() });
        }
        let mut seen = vec![false; arity];
        for &t in order {
            if t >= arity || std::mem::replace(&mut seen[t], true) {
                return Err(AutomataError::TrackOutOfRange { track: t, arity });
            }
        }
        let mut out = self.map_letters(order)?;
        out.labels = self.labels.clone();
        Ok(out)
    }
}

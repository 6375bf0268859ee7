use std::collections::{HashMap, VecDeque};

use super::{Automaton, StateId};

impl Automaton {
    /// The minimal total DFA, numbered in breadth-first order from the
    /// initial state over ascending letters. Equal languages give equal
    /// automata.
    pub fn minimize(&self) -> Automaton {
        let dfa = self.determinize();
        let n = dfa.num_states();
        let size = dfa.alphabet.size() as usize;
        let delta: Vec<StateId> = dfa.transitions.iter().flat_map(|list| list.iter().map(|&(_, d)| d)).collect();

        // Moore refinement: split blocks by the blocks of their successors.
        let mut block: Vec<u32> = dfa.finals.iter().map(|&f| u32::from(f)).collect();
        let mut blocks = usize::from(dfa.finals.contains(&true)) + usize::from(dfa.finals.contains(&false));
        let mut signature = Vec::with_capacity(size + 1);
        loop {
            let mut index: HashMap<Vec<u32>, u32> = HashMap::with_capacity(blocks * 2);
            let mut next = Vec::with_capacity(n);
            for s in 0..n {
                signature.clear();
                signature.push(block[s]);
                signature.extend(delta[s * size..(s + 1) * size].iter().map(|&d| block[d as usize]));
                let fresh = index.len() as u32;
                next.push(*index.entry(signature.clone()).or_insert(fresh));
            }
            let refined = index.len();
            block = next;
            if refined == blocks {
                break;
            }
            blocks = refined;
        }

        // Canonical numbering of the quotient.
        let mut number: Vec<Option<StateId>> = vec![None; blocks];
        let mut representative = Vec::new();
        let mut queue = VecDeque::new();
        let start = dfa.initial[0];
        number[block[start as usize] as usize] = Some(0);
        representative.push(start);
        queue.push_back(start);
        let mut transitions = Vec::new();
        let mut finals = Vec::new();
        while let Some(s) = queue.pop_front() {
            finals.push(dfa.finals[s as usize]);
            let mut edges = Vec::with_capacity(size);
            for (l, &d) in delta[s as usize * size..(s as usize + 1) * size].iter().enumerate() {
                let b = block[d as usize] as usize;
                let id = *number[b].get_or_insert_with(|| {
                    representative.push(d);
                    queue.push_back(d);
                    (representative.len() - 1) as StateId
                });
                edges.push((l as u32, id));
            }
            transitions.push(edges);
        }
        Automaton::from_parts(dfa.alphabet, vec![0], finals, transitions)
    }

    /// Whether the automaton is deterministic, total, reachable and has no
    /// two equivalent states.
    pub fn is_minimal(&self) -> bool {
        self.is_deterministic() && self.minimize().num_states() == self.num_states()
    }
}

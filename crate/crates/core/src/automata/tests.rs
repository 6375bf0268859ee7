use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;

fn word(s: &str) -> DigitWord {
    s.parse().unwrap()
}

fn random_nfa(rng: &mut StdRng, alphabet: Alphabet) -> Automaton {
    let n = rng.gen_range(1..=5);
    let initial: Vec<StateId> = (0..n).filter(|_| rng.gen_bool(0.3)).chain([0]).collect();
    let finals: Vec<StateId> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    let density = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for s in 0..n {
        for l in alphabet.letters() {
            for d in 0..n {
                if rng.gen_bool(density / n as f64) {
                    edges.push((s, l, d));
                }
            }
        }
    }
    Automaton::new(alphabet, n as usize, initial, &finals, edges).unwrap()
}

/// Depth-first search for an accepting run.
fn naive_accepts(a: &Automaton, word: &[Letter]) -> bool {
    fn run(a: &Automaton, s: StateId, word: &[Letter]) -> bool {
        match word.split_first() {
            None => a.is_final(s),
            Some((&l, rest)) => a.transitions(s).iter().any(|&(x, d)| x == l && run(a, d, rest)),
        }
    }
    a.initial().iter().any(|&s| run(a, s, word))
}

fn all_words(size: u32, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Letter>| (0..size).map(move |l| w.iter().copied().chain([l]).collect()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Membership in the zero-closed projection, by simulating `a` with the
/// erased track chosen freely at every step.
fn projected_accepts(a: &Automaton, track: usize, word: &[Letter], kept: Alphabet) -> bool {
    let full = a.alphabet();
    let step = |set: &BTreeSet<StateId>, l: Letter| -> BTreeSet<StateId> {
        let digits = kept.digits(l);
        let mut out = BTreeSet::new();
        for x in 0..=full.digit_bound() {
            let mut lifted = digits.clone();
            lifted.insert(track, x);
            let letter = full.letter(&lifted).unwrap();
            for &s in set {
                out.extend(a.successors(s, letter));
            }
        }
        out
    };
    let stripped: Vec<Letter> = word.iter().copied().skip_while(|&l| l == 0).collect();
    let mut set: BTreeSet<StateId> = a.initial().iter().copied().collect();
    let mut seen = Vec::new();
    while !seen.contains(&set) {
        let mut s = set.clone();
        for &l in &stripped {
            s = step(&s, l);
        }
        if s.iter().any(|&q| a.is_final(q)) {
            return true;
        }
        seen.push(set.clone());
        set = step(&set, 0);
    }
    false
}

const SMALL: [(usize, u32); 5] = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)];

#[test]
fn alphabet_packs_track_zero_most_significant() {
    let alphabet = Alphabet::new(3, 2).unwrap();
    assert_eq!(alphabet.size(), 27);
    assert_eq!(alphabet.letter(&[1, 0, 2]).unwrap(), 11);
    assert_eq!(alphabet.digits(11), vec![1, 0, 2]);
    assert_eq!(alphabet.digit(11, 0), 1);
    assert_eq!(alphabet.digit(11, 2), 2);
    assert!(alphabet.letter(&[3, 0, 0]).is_err());
    assert_eq!(Alphabet::new(0, 3), Err(AutomataError::ZeroArity));
    assert!(matches!(Alphabet::new(30, 7), Err(AutomataError::AlphabetTooLarge { .. })));
}

#[test]
fn convolve_pads_on_the_left() {
    let t = convolve(&[word("1 0"), word("1")], 1).unwrap();
    assert_eq!(t.iter().collect::<Vec<_>>(), vec![&[1, 0][..], &[0, 1][..]]);
    assert!(convolve(&[word(""), word("")], 1).unwrap().is_empty());
    let t = convolve(&[word("1 0 0"), word("1 0 0 0"), word("1 0 0 0 0")], 1).unwrap();
    assert_eq!(t.len(), 5);
    assert_eq!(t.letter(0), &[0, 0, 1]);
    assert_eq!(t.track(1), word("0 1 0 0 0"));
    assert_eq!(convolve(&[word("2")], 1), Err(AutomataError::DigitOutOfRange { value: 2, bound: 1 }));
}

#[test]
fn trivial_languages() {
    let alphabet = Alphabet::new(2, 1).unwrap();
    let all = Automaton::universal(alphabet);
    let none = Automaton::empty(alphabet);
    for w in all_words(4, 3) {
        assert!(all.accepts_letters(&w));
        assert!(!none.accepts_letters(&w));
    }
    assert!(none.is_empty());
    assert_eq!(all.shortest_witness().unwrap().len(), 0);
    let bad = TupleWord::from_letters(3, vec![vec![0, 0, 0]]).unwrap();
    assert!(matches!(all.accepts(&bad), Err(AutomataError::ArityMismatch { .. })));
}

#[test]
fn zero_star_one_has_three_state_minimal_dfa() {
    let alphabet = Alphabet::new(1, 1).unwrap();
    let nfa = Automaton::new(alphabet, 2, vec![0], &[1], [(0, 0, 0), (0, 1, 1)]).unwrap();
    assert!(!nfa.is_deterministic());
    let dfa = nfa.minimize();
    assert!(dfa.is_deterministic());
    assert_eq!(dfa.num_states(), 3);
    assert!(dfa.is_minimal());
    assert_eq!(dfa.minimize(), dfa);
    assert_eq!(dfa.to_string(), "arity 1\ndigit_bound 1\nnum_states 3\ninitial 0\nfinal 1\ntransitions\n0 (0) 0\n0 (1) 1\n1 (0) 2\n1 (1) 2\n2 (0) 2\n2 (1) 2\n");
}

#[test]
fn reading_order_is_most_significant_first() {
    // words whose first letter is 1
    let alphabet = Alphabet::new(1, 1).unwrap();
    let a = Automaton::new(alphabet, 2, vec![0], &[1], [(0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap();
    let t = convolve(&[word("1 0 0")], 1).unwrap();
    assert!(a.accepts(&t).unwrap());
    assert!(!a.accepts(&convolve(&[word("0 0 1")], 1).unwrap()).unwrap());
}

#[test]
fn operations_match_brute_force_languages() {
    let mut rng = StdRng::seed_from_u64(7);
    for round in 0..40 {
        let (arity, bound) = SMALL[round % SMALL.len()];
        let alphabet = Alphabet::new(arity, bound).unwrap();
        let max_len = if alphabet.size() > 4 { 4 } else { 6 };
        let a = random_nfa(&mut rng, alphabet);
        let b = random_nfa(&mut rng, alphabet);
        let det = a.determinize();
        let min = a.minimize();
        let comp = a.complement_any();
        let inter = a.intersect(&b).unwrap();
        let uni = a.union(&b).unwrap();
        let duni = det.union(&b.determinize()).unwrap();
        let closed = a.zero_closure();
        assert!(det.is_deterministic() && min.is_minimal() && duni.is_deterministic());
        for w in all_words(alphabet.size(), max_len) {
            let (in_a, in_b) = (naive_accepts(&a, &w), naive_accepts(&b, &w));
            assert_eq!(a.accepts_letters(&w), in_a);
            assert_eq!(det.accepts_letters(&w), in_a);
            assert_eq!(min.accepts_letters(&w), in_a);
            assert_eq!(comp.accepts_letters(&w), !in_a);
            assert_eq!(inter.accepts_letters(&w), in_a && in_b);
            assert_eq!(uni.accepts_letters(&w), in_a || in_b);
            assert_eq!(duni.accepts_letters(&w), in_a || in_b);
            let stripped: Vec<Letter> = w.iter().copied().skip_while(|&l| l == 0).collect();
            let expect_closed = (0..32).any(|j| naive_accepts(&a, &[vec![0; j], stripped.clone()].concat()));
            assert_eq!(closed.accepts_letters(&w), expect_closed, "round {round} word {w:?}");
        }
        assert!(a.equivalent(&min).unwrap());
        assert!(a.intersect(&comp).unwrap().is_empty());
        assert_eq!(a.trim().is_empty(), a.is_empty());
        if let Some(wit) = a.shortest_witness() {
            assert!(a.accepts(&wit).unwrap());
            if !wit.is_empty() {
                assert!(all_words(alphabet.size(), wit.len() - 1).iter().all(|w| !naive_accepts(&a, w)));
            }
        }
    }
}

#[test]
fn projection_and_cylindrification() {
    let mut rng = StdRng::seed_from_u64(11);
    for round in 0..24 {
        let (arity, bound) = [(2, 1), (3, 1), (2, 2)][round % 3];
        let alphabet = Alphabet::new(arity, bound).unwrap();
        let a = random_nfa(&mut rng, alphabet);
        let track = round % arity;
        let p = a.project(track).unwrap();
        let kept = p.alphabet();
        for w in all_words(kept.size(), 4) {
            assert_eq!(p.accepts_letters(&w), projected_accepts(&a, track, &w, kept), "round {round}");
        }
        let cyl = a.cylindrify(track).unwrap();
        assert_eq!(cyl.arity(), arity + 1);
        for w in all_words(cyl.alphabet().size(), 3) {
            let dropped: Vec<Letter> = w
                .iter()
                .map(|&l| {
                    let mut d = cyl.alphabet().digits(l);
                    d.remove(track);
                    alphabet.letter(&d).unwrap()
                })
                .collect();
            assert_eq!(cyl.accepts_letters(&w), a.accepts_letters(&dropped));
        }
        // projecting the new track again recovers the zero closure
        assert!(cyl.project(track).unwrap().equivalent(&a.zero_closure()).unwrap());
    }
    let single = Automaton::universal(Alphabet::new(1, 1).unwrap());
    assert_eq!(single.project(0), Err(AutomataError::ProjectSingleTrack));
}

#[test]
fn track_rearrangements() {
    let mut rng = StdRng::seed_from_u64(3);
    let alphabet = Alphabet::new(3, 1).unwrap();
    for _ in 0..10 {
        let a = random_nfa(&mut rng, alphabet);
        let p = a.permute_tracks(&[2, 0, 1]).unwrap();
        let id = a.identify_tracks(0, 2).unwrap();
        for w in all_words(8, 3) {
            let moved: Vec<Letter> = w
                .iter()
                .map(|&l| {
                    let d = alphabet.digits(l);
                    alphabet.letter(&[d[1], d[2], d[0]]).unwrap()
                })
                .collect();
            assert_eq!(p.accepts_letters(&w), a.accepts_letters(&moved));
        }
        let pair = id.alphabet();
        for w in all_words(pair.size(), 3) {
            let lifted: Vec<Letter> = w
                .iter()
                .map(|&l| {
                    let d = pair.digits(l);
                    alphabet.letter(&[d[0], d[1], d[0]]).unwrap()
                })
                .collect();
            assert_eq!(id.accepts_letters(&w), a.accepts_letters(&lifted));
        }
    }
    let a = Automaton::universal(alphabet);
    assert!(a.permute_tracks(&[0, 0, 1]).is_err());
    assert!(a.identify_tracks(0, 3).is_err());
}

#[test]
fn digit_bound_changes() {
    let alphabet = Alphabet::new(1, 1).unwrap();
    let nfa = Automaton::new(alphabet, 2, vec![0], &[1], [(0, 0, 0), (0, 1, 1)]).unwrap();
    let wide = nfa.with_digit_bound(3).unwrap();
    assert!(wide.accepts(&convolve(&[word("0 1")], 3).unwrap()).unwrap());
    assert!(!wide.accepts(&convolve(&[word("2")], 3).unwrap()).unwrap());
    assert_eq!(wide.with_digit_bound(1).unwrap(), nfa);
    assert!(nfa.equivalent(&wide).unwrap());
    assert!(nfa.intersect(&wide).is_err());
}

#[test]
fn padded_word_automaton() {
    let alphabet = Alphabet::new(2, 2).unwrap();
    let t = convolve(&[word("1 2"), word("2")], 2).unwrap();
    let a = Automaton::padded_word(alphabet, &t).unwrap();
    assert!(a.accepts(&t).unwrap());
    assert!(a.accepts(&convolve(&[word("0 0 1 2"), word("2")], 2).unwrap()).unwrap());
    assert!(!a.accepts(&convolve(&[word("1 2 0"), word("2 0")], 2).unwrap()).unwrap());
}

#[test]
fn text_format_round_trips() {
    let mut rng = StdRng::seed_from_u64(5);
    for (arity, bound) in SMALL {
        let a = random_nfa(&mut rng, Alphabet::new(arity, bound).unwrap());
        let text = a.to_string();
        let back: Automaton = text.parse().unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_string(), text);
    }
    let err = "arity 1\ndigit_bound 1\nnum_states 1\ninitial 0\nfinal\ntransitions\n0 (2) 0\n".parse::<Automaton>();
    assert!(matches!(err, Err(AutomataError::Parse { line: 7, .. })), "{err:?}");
    let err = "arity 1\ndigit_bound 1\nnum_states 1\ninitial 3\nfinal\ntransitions\n".parse::<Automaton>();
    assert!(matches!(err, Err(AutomataError::StateOutOfRange { state: 3, .. })));
    assert!("arity 1\nnum_states 1\n".parse::<Automaton>().is_err());
}

#[test]
fn minimal_states_are_pairwise_distinguishable() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..20 {
        let a = random_nfa(&mut rng, Alphabet::new(1, 2).unwrap()).minimize();
        let n = a.num_states();
        let next = |s: usize, l: usize| a.transitions(s as StateId)[l].1 as usize;
        // table filling
        let mut apart = vec![vec![false; n]; n];
        for p in 0..n {
            for q in 0..n {
                apart[p][q] = a.is_final(p as StateId) != a.is_final(q as StateId);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for p in 0..n {
                for q in 0..n {
                    if !apart[p][q] && (0..3).any(|l| apart[next(p, l)][next(q, l)]) {
                        apart[p][q] = true;
                        changed = true;
                    }
                }
            }
        }
        for p in 0..n {
            for q in p + 1..n {
                assert!(apart[p][q], "states {p} and {q} are equivalent");
            }
        }
    }
}

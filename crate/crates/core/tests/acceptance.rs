//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ostrowski::adder::{self, AdderError};
use ostrowski::automata::{Alphabet, Automaton, Letter, StateId};
use ostrowski::logic::{self, Compiler};
use ostrowski::numeration::{encode, is_valid, DigitWord};
use ostrowski::recognizers::{
    build_adder, build_equality, build_less_than, build_pass_automaton, build_va_graph, build_valid_rep,
};
use ostrowski::{ContinuedFraction, Nat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const FRACTIONS: [&str; 4] = ["1;(1)", "1;(2)", "0;1,(1,2)", "1;(3,1,2)"];

type Outcome = Result<String, String>;

fn cf(s: &str) -> ContinuedFraction {
    s.parse().unwrap()
}

/// Partial quotients and denominators from the recurrence, independent of
/// the library's own convergent code.
struct System {
    cf: ContinuedFraction,
    quotients: Vec<u32>,
    denominators: Vec<u64>,
}

impl System {
    fn new(s: &str) -> Self {
        let cf = cf(s);
        let mut quotients = vec![0];
        let mut denominators = vec![1u64];
        let mut prev = 0u64;
        for k in 1..48 {
            let a = cf.partial_quotient(k).unwrap();
            quotients.push(a);
            let next = a as u64 * denominators[k - 1] + prev;
            prev = denominators[k - 1];
            denominators.push(next);
        }
        Self { cf, quotients, denominators }
    }

    /// Digit `k` (counted from 1 at the least significant end) weighs `q_{k-1}`.
    fn value(&self, w: &DigitWord) -> u64 {
        w.lsd().iter().zip(&self.denominators).map(|(&d, &q)| d as u64 * q).sum()
    }

    /// Greedy expansion, most significant digit first, padded to `len`.
    fn greedy(&self, mut n: u64, len: usize) -> Vec<u32> {
        let mut digits = vec![0; len];
        for k in (1..=len).rev() {
            let q = self.denominators[k - 1];
            digits[len - k] = (n / q) as u32;
            n %= q;
        }
        assert_eq!(n, 0);
        digits
    }

    /// Smallest `q_k` whose coefficient in the greedy expansion is nonzero.
    fn least_term(&self, n: u64) -> u64 {
        let digits = self.greedy(n, 40);
        match digits.iter().rposition(|&d| d != 0) {
            None => 1,
            Some(i) => self.denominators[39 - i],
        }
    }
}

fn letters(aut: &Automaton, tracks: &[&[u32]]) -> Vec<Letter> {
    let alphabet = aut.alphabet();
    (0..tracks[0].len())
        .map(|i| alphabet.letter(&tracks.iter().map(|t| t[i]).collect::<Vec<_>>()).unwrap())
        .collect()
}

fn run(aut: &Automaton, tracks: &[&[u32]]) -> bool {
    aut.accepts_letters(&letters(aut, tracks))
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok && failures.len() < 5 {
        failures.push(what());
    }
}

fn verdict(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(failures.join("; "))
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {:.1} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
    }
}

const RESULT_CHECK: &str = "result is a valid representation";

/// Criteria 1 to 4 share the same additions.
fn addition() -> [Outcome; 4] {
    const MAX: u64 = 2000;
    let start = Instant::now();
    let mut wrong = Vec::new();
    let mut over = Vec::new();
    let mut drift = Vec::new();
    let mut lemmas = Vec::new();
    let mut runs = 0u64;
    for s in FRACTIONS {
        let sys = System::new(s);
        let reps: Vec<_> = (0..=MAX).map(|n| encode(&sys.cf, &n).unwrap()).collect();
        for (m, x) in reps.iter().enumerate() {
            for (n, y) in reps.iter().enumerate() {
                let total = (m + n) as u64;
                runs += 1;
                let sum = match adder::add_words(x, y, false) {
                    Ok(sum) => sum,
                    Err(e @ AdderError::InvariantViolation { check: rule, .. }) if rule != RESULT_CHECK => {
                        check(&mut lemmas, false, || format!("{s} {m}+{n}: {e}"));
                        continue;
                    }
                    Err(e) => {
                        check(&mut wrong, false, || format!("{s} {m}+{n}: {e}"));
                        continue;
                    }
                };
                let result = sum.result.digits();
                check(&mut wrong, sys.value(result) == total && is_valid(&sys.cf, result), || {
                    format!("{s} {m}+{n} gave {}", sum.result)
                });
                let z = sum.pass1.output.lsd();
                let bounded = z.iter().enumerate().all(|(i, &d)| {
                    let a = sys.quotients[i + 1];
                    if i == 0 { d + 1 <= a } else { d <= a }
                });
                check(&mut over, bounded, || format!("{s} {m}+{n}: pass 1 gave {}", sum.pass1.output));
                for (pass, w) in [(1, &sum.pass1.output), (2, &sum.pass2.output), (3, &sum.pass3.output)] {
                    check(&mut drift, sys.value(w) == total, || format!("{s} {m}+{n}: pass {pass} gave {w}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let timing = within(elapsed, Duration::from_secs(30), "the additions");
    let secs = elapsed.as_secs_f64();
    [
        timing.clone().and(verdict(wrong, format!("{runs} sums on 4 fractions, M, N <= {MAX}, {secs:.1} s"))),
        verdict(over, format!("{runs} pass-1 outputs within the quotient bounds")),
        verdict(drift, format!("{} pass outputs keep their value", 3 * runs)),
        verdict(lemmas, format!("{runs} runs with the window lemmas asserted, no failures")),
    ]
}

/// Every word of length `len` over `0..=bound`, most significant digit first.
fn words(len: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u32>| (0..=bound).map(move |d| [w.as_slice(), &[d]].concat()))
            .collect();
    }
    out
}

/// Second tracks accepted by a trimmed two-track automaton alongside `input`.
fn outputs(aut: &Automaton, input: &[u32]) -> BTreeSet<Vec<u32>> {
    fn walk(aut: &Automaton, input: &[u32], states: Vec<StateId>, prefix: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if prefix.len() == input.len() {
            if states.iter().any(|&s| aut.is_final(s)) {
                out.insert(prefix.clone());
            }
            return;
        }
        let alphabet = aut.alphabet();
        for y in 0..=aut.digit_bound() {
            let letter = alphabet.letter(&[input[prefix.len()], y]).unwrap();
            let mut next: Vec<StateId> = states.iter().flat_map(|&s| aut.successors(s, letter)).collect();
            next.sort_unstable();
            next.dedup();
            if !next.is_empty() {
                prefix.push(y);
                walk(aut, input, next, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(aut, input, aut.initial().to_vec(), &mut Vec::new(), &mut out);
    out
}

/// The pass output on `z`, if the pass applies and its result fits in
/// `z.len()` digits.
fn expected_pass(cf: &ContinuedFraction, pass: u8, z: &[u32]) -> BTreeSet<Vec<u32>> {
    let word = DigitWord::from_msd(z);
    let result = match pass {
        1 => adder::pass1(cf, &word.padded(z.len() + 1)),
        2 => adder::pass2(cf, &word),
        _ => adder::pass3(cf, &word),
    };
    result
        .ok()
        .map(|out| out.stripped())
        .filter(|out| out.len() <= z.len())
        .map(|out| out.padded(z.len()).to_msd())
        .into_iter()
        .collect()
}

fn pass_automata() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0u64;
    let golden = cf("1;(1)");
    for pass in 1..=3 {
        let aut = build_pass_automaton(&golden, pass).unwrap().trim();
        for len in 0..=8 {
            for z in words(len, golden.digit_bound()) {
                let expect = expected_pass(&golden, pass, &z);
                check(&mut failures, outputs(&aut, &z) == expect, || format!("golden pass {pass} on {z:?}"));
                cases += 1;
            }
        }
    }
    let sys = System::new("1;(2)");
    let bound = sys.cf.digit_bound();
    let mut rng = StdRng::seed_from_u64(5);
    let mut samples = 0u64;
    for pass in 1..=3 {
        let aut = build_pass_automaton(&sys.cf, pass).unwrap().trim();
        for _ in 0..4000 {
            // half are reachable intermediate words, half are arbitrary
            let z: Vec<u32> = if rng.gen_bool(0.5) {
                let x = encode(&sys.cf, &rng.gen_range(0..300u64)).unwrap();
                let y = encode(&sys.cf, &rng.gen_range(0..300u64)).unwrap();
                let mut w = adder::digitwise_sum(&x, &y).unwrap();
                if pass >= 2 {
                    w = adder::pass1(&sys.cf, &w).unwrap();
                }
                if pass == 3 {
                    w = adder::pass2(&sys.cf, &w).unwrap();
                }
                let w = w.stripped();
                if w.len() > 8 {
                    continue;
                }
                w.padded(rng.gen_range(w.len()..=8)).to_msd()
            } else {
                let len = rng.gen_range(1..=8);
                (0..len).map(|_| rng.gen_range(0..=bound)).collect()
            };
            let expect = expected_pass(&sys.cf, pass, &z);
            check(&mut failures, outputs(&aut, &z) == expect, || format!("[1;(2)] pass {pass} on {z:?}"));
            samples += 1;
        }
    }
    check(&mut failures, samples >= 10_000, || format!("only {samples} samples"));
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120), "the pass automata")?;
    verdict(
        failures,
        format!("{cases} golden words exhaustive, {samples} samples on [1;(2)], {:.1} s", elapsed.as_secs_f64()),
    )
}

fn adder_automaton() -> Outcome {
    const MAX: u64 = 300;
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for s in FRACTIONS {
        let sys = System::new(s);
        let start = Instant::now();
        let aut = build_adder(&sys.cf).unwrap();
        let built = start.elapsed();
        within(built, Duration::from_secs(300), &format!("building the adder for {s}"))?;
        let len = sys.cf.convergent_denominators::<u64>(40).unwrap().iter().position(|&q| q > 2 * MAX + 1).unwrap() + 1;
        let reps: Vec<Vec<u32>> = (0..=2 * MAX + 1).map(|n| sys.greedy(n, len)).collect();
        let start = Instant::now();
        for m in 0..=MAX as usize {
            for n in 0..=MAX as usize {
                let (x, y) = (&reps[m], &reps[n]);
                let ok = run(&aut, &[x, y, &reps[m + n]])
                    && !run(&aut, &[x, y, &reps[m + n + 1]])
                    && (m + n == 0 || !run(&aut, &[x, y, &reps[m + n - 1]]));
                check(&mut failures, ok, || format!("{s}: {m} + {n}"));
            }
        }
        let ran = start.elapsed();
        within(ran, Duration::from_secs(120), &format!("running the adder for {s}"))?;
        notes.push(format!("{s} {} states, build {:.1} s, run {:.1} s", aut.num_states(), built.as_secs_f64(), ran.as_secs_f64()));
    }
    verdict(failures, format!("M, N <= {MAX}, sums accepted, +-1 rejected: {}", notes.join(", ")))
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

/// Reachable state sets after each prefix, by plain subset simulation.
fn naive_accepts(a: &Automaton, word: &[Letter]) -> bool {
    let mut set: BTreeSet<StateId> = a.initial().iter().copied().collect();
    for &l in word {
        set = set.iter().flat_map(|&s| a.successors(s, l)).collect();
    }
    set.iter().any(|&s| a.is_final(s))
}

fn all_words(size: u32, len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Letter>| (0..size).map(move |l| w.iter().copied().chain([l]).collect()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Membership of `word` in the projection of `a` closed under leading
/// zeros: some padding `0^j word` lifts to an accepted word. Padding beyond
/// the number of state subsets cannot add anything new.
fn projected_accepts(a: &Automaton, track: usize, word: &[u32], kept: Alphabet) -> bool {
    let full = a.alphabet();
    let step = |set: &BTreeSet<StateId>, l: Letter| -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        for x in 0..=full.digit_bound() {
            let mut lifted = kept.digits(l);
            lifted.insert(track, x);
            let letter = full.letter(&lifted).unwrap();
            out.extend(set.iter().flat_map(|&s| a.successors(s, letter)));
        }
        out
    };
    let stripped: Vec<Letter> = word.iter().copied().skip_while(|&l| l == 0).collect();
    let mut set: BTreeSet<StateId> = a.initial().iter().copied().collect();
    for _ in 0..=(1 << a.num_states()) {
        let end = stripped.iter().fold(set.clone(), |s, &l| step(&s, l));
        if end.iter().any(|&q| a.is_final(q)) {
            return true;
        }
        set = step(&set, 0);
    }
    false
}

fn toolkit() -> Outcome {
    const SHAPES: [(usize, u32); 6] = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (1, 7)];
    const LEN: usize = 6;
    let mut rng = StdRng::seed_from_u64(17);
    let mut failures = Vec::new();
    let mut words_checked = 0u64;
    let rounds = 24;
    for round in 0..rounds {
        let (arity, bound) = SHAPES[round % SHAPES.len()];
        let alphabet = Alphabet::new(arity, bound).unwrap();
        let a = random_nfa(&mut rng, alphabet);
        let b = random_nfa(&mut rng, alphabet);
        let min = a.minimize();
        let comp = a.complement_any();
        let inter = a.intersect(&b).unwrap();
        let uni = a.union(&b).unwrap();
        check(&mut failures, min.is_deterministic() && min.is_minimal(), || format!("round {round}: not minimal"));
        for w in all_words(alphabet.size(), LEN) {
            let (in_a, in_b) = (naive_accepts(&a, &w), naive_accepts(&b, &w));
            let ok = min.accepts_letters(&w) == in_a
                && comp.accepts_letters(&w) != in_a
                && inter.accepts_letters(&w) == (in_a && in_b)
                && uni.accepts_letters(&w) == (in_a || in_b);
            check(&mut failures, ok, || format!("round {round} on {w:?}"));
            words_checked += 1;
        }
        if arity > 1 {
            let track = round % arity;
            let p = a.project(track).unwrap();
            let kept = p.alphabet();
            for w in all_words(kept.size(), LEN) {
                let ok = p.accepts_letters(&w) == projected_accepts(&a, track, &w, kept);
                check(&mut failures, ok, || format!("round {round} projection on {w:?}"));
                words_checked += 1;
            }
        }
    }
    verdict(failures, format!("{rounds} random automata pairs, {words_checked} words up to length {LEN}"))
}

fn reduction_set() -> Outcome {
    let mut failures = Vec::new();
    let golden = System::new("1;(1)");
    let valid = build_valid_rep(&golden.cf).unwrap();
    let mut words_checked = 0u64;
    for len in 0..=10 {
        for w in words(len, golden.cf.digit_bound()) {
            let expect = is_valid(&golden.cf, &DigitWord::from_msd(&w).stripped());
            check(&mut failures, run(&valid, &[&w]) == expect, || format!("valid on {w:?}"));
            words_checked += 1;
        }
    }
    for s in FRACTIONS {
        let sys = System::new(s);
        let eq = build_equality(&sys.cf).unwrap();
        let lt = build_less_than(&sys.cf).unwrap();
        let reps: Vec<Vec<u32>> = (0..=500).map(|n| sys.greedy(n, 20)).collect();
        for (m, x) in reps.iter().enumerate() {
            for (n, y) in reps.iter().enumerate() {
                let ok = run(&eq, &[x, y]) == (m == n) && run(&lt, &[x, y]) == (m < n);
                check(&mut failures, ok, || format!("{s}: order on {m}, {n}"));
            }
        }
        let va = build_va_graph(&sys.cf).unwrap();
        let reps: Vec<Vec<u32>> = (0..=2000).map(|n| sys.greedy(n, 24)).collect();
        for (x, rep) in reps.iter().enumerate() {
            let v = sys.least_term(x as u64);
            for (y, other) in reps.iter().enumerate() {
                check(&mut failures, run(&va, &[rep, other]) == (y as u64 == v), || format!("{s}: V({x}) vs {y}"));
            }
        }
        check(&mut failures, sys.least_term(0) == 1 && run(&va, &[&reps[0], &reps[1]]), || format!("{s}: V(0)"));
    }
    verdict(
        failures,
        format!("{words_checked} golden words, =/< on 0..=500 and V on 0..=2000 for 4 fractions"),
    )
}

fn decision_procedure() -> Outcome {
    const SUITE: [(&str, bool); 5] = [
        ("A x. A y. x + y = y + x", true),
        ("A x. A y. A z. (x + y) + z = x + (y + z)", true),
        ("E x. ~x = 0 & x + x = x", false),
        ("A x. E y. x = y + y | x = y + y + 1", true),
        ("A x. E y. V(x) = y", true),
    ];
    let start = Instant::now();
    let mut failures = Vec::new();
    for s in FRACTIONS {
        let mut compiler = Compiler::new(&cf(s)).unwrap();
        for (text, expect) in SUITE {
            let got = compiler.decide(&logic::parse(text).unwrap());
            check(&mut failures, got.as_ref() == Ok(&expect), || format!("{s}: {text} gave {got:?}"));
        }
    }
    let formula = logic::parse("V(x)=x").unwrap();
    let found = logic::enumerate(&cf("1;(1)"), &formula, &Nat::from(60u32)).unwrap();
    let expect: Vec<Vec<Nat>> = [1u32, 2, 3, 5, 8, 13, 21, 34, 55].iter().map(|&n| vec![Nat::from(n)]).collect();
    check(&mut failures, found == expect, || format!("V(x)=x up to 60 gave {found:?}"));
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(300), "the decision procedure")?;
    verdict(failures, format!("5 sentences on 4 fractions and one enumeration, {:.1} s", elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let wanted = |n: usize| filter.as_deref().is_none_or(|f| f.split(',').any(|p| p == n.to_string()));
    let mut passed = true;
    let mut report = |n: usize, name: &str, outcome: Outcome| match outcome {
        Ok(summary) => println!("PASS criterion {n} ({name}): {summary}"),
        Err(why) => {
            passed = false;
            println!("FAIL criterion {n} ({name}): {why}");
        }
    };
    if (1..=4).any(wanted) {
        let names = ["adder correctness", "pass-1 digit bound", "value preservation", "window lemmas"];
        for (i, (name, outcome)) in names.into_iter().zip(addition()).enumerate() {
            report(i + 1, name, outcome);
        }
    }
    let rest: [(usize, &str, fn() -> Outcome); 5] = [
        (5, "pass automata", pass_automata),
        (6, "adder automaton", adder_automaton),
        (7, "automata toolkit", toolkit),
        (8, "reduction set", reduction_set),
        (9, "decision procedure", decision_procedure),
    ];
    for (n, name, f) in rest {
        if wanted(n) {
            report(n, name, f());
        }
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

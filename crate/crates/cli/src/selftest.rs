//! Differential checks runnable from the command line.

use std::fmt::Write as _;

use ostrowski::adder::{self, PassOptions};
use ostrowski::automata::convolve;
use ostrowski::numeration::{self, is_valid};
use ostrowski::recognizers::{build_adder, build_valid_rep};
use ostrowski::ContinuedFraction;
use serde_json::json;

use crate::commands::{CliError, Report};

const FRACTIONS: [&str; 4] = ["1;(1)", "1;(2)", "0;1,(1,2)", "1;(3,1,2)"];

/// Summands checked against the adder automaton, which is slower to run.
const AUTOMATON_MAX: u64 = 30;

struct Check {
    name: String,
    cases: u64,
    failure: Option<String>,
}

pub fn run(max: u64, only: Option<ContinuedFraction>) -> Result<Report, CliError> {
    let fractions: Vec<ContinuedFraction> = match only {
        Some(cf) => vec![cf],
        None => FRACTIONS.iter().map(|s| s.parse().expect("built-in continued fraction")).collect(),
    };
    let mut checks = Vec::new();
    for cf in &fractions {
        checks.push(arithmetic(cf, max)?);
        checks.push(validity(cf)?);
        checks.push(automaton(cf, max.min(AUTOMATON_MAX))?);
    }
    let mut text = String::new();
    for c in &checks {
        match &c.failure {
            None => writeln!(text, "PASS {} ({} cases)", c.name, c.cases).unwrap(),
            Some(why) => writeln!(text, "FAIL {}: {why}", c.name).unwrap(),
        }
    }
    let passed = checks.iter().all(|c| c.failure.is_none());
    let json = json!(checks
        .iter()
        .map(|c| json!({ "check": c.name, "cases": c.cases, "passed": c.failure.is_none(), "failure": c.failure }))
        .collect::<Vec<_>>());
    Ok(Report { text, json, code: if passed { 0 } else { 1 } })
}

fn check(name: String, body: impl FnOnce(&mut u64) -> Result<(), String>) -> Check {
    let mut cases = 0;
    let failure = body(&mut cases).err();
    Check { name, cases, failure }
}

/// Every sum up to `max` through the three passes, with the window lemmas
/// asserted, values preserved and the result a representation.
fn arithmetic(cf: &ContinuedFraction, max: u64) -> Result<Check, CliError> {
    let words = (0..=max).map(|n| numeration::encode(cf, &n)).collect::<Result<Vec<_>, _>>()?;
    Ok(check(format!("addition {cf} up to {max}"), |cases| {
        let value = |w: &numeration::DigitWord| numeration::decode::<u64>(cf, w).map_err(|e| e.to_string());
        for (m, x) in words.iter().enumerate() {
            for (n, y) in words.iter().enumerate() {
                let sum = adder::add_words(x, y, false).map_err(|e| format!("{m} + {n}: {e}"))?;
                let expect = (m + n) as u64;
                for (stage, w) in [("sum", &sum.sum), ("pass 1", &sum.pass1.output), ("pass 2", &sum.pass2.output)] {
                    if value(w)? != expect {
                        return Err(format!("{m} + {n}: {stage} changed the value"));
                    }
                }
                if value(sum.result.digits())? != expect || !is_valid(cf, sum.result.digits()) {
                    return Err(format!("{m} + {n}: got {}", sum.result));
                }
                *cases += 1;
            }
        }
        // the unchecked passes agree with the checked ones
        let x = &words[words.len() - 1];
        let s = adder::digitwise_sum(x, x).map_err(|e| e.to_string())?;
        let plain = adder::run_pass1(cf, &s, PassOptions::default()).map_err(|e| e.to_string())?;
        let checked = adder::run_pass1(cf, &s, PassOptions::checked()).map_err(|e| e.to_string())?;
        if plain.output != checked.output {
            return Err("checked and unchecked pass 1 differ".into());
        }
        Ok(())
    }))
}

/// The validity automaton against the digit conditions on short words.
fn validity(cf: &ContinuedFraction) -> Result<Check, CliError> {
    let automaton = build_valid_rep(cf)?;
    let bound = cf.automaton_parameters()?.mu;
    Ok(check(format!("validity automaton {cf}"), |cases| {
        let mut word = vec![0u32; 7];
        loop {
            let w = numeration::DigitWord::from_msd(&word);
            let t = convolve(&[w.clone()], automaton.digit_bound()).map_err(|e| e.to_string())?;
            let accepted = automaton.accepts(&t).map_err(|e| e.to_string())?;
            if accepted != is_valid(cf, &w) {
                return Err(format!("disagrees on {w}"));
            }
            *cases += 1;
            let Some(i) = (0..word.len()).rev().find(|&i| word[i] < bound) else {
                return Ok(());
            };
            word[i] += 1;
            word[i + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }))
}

/// The adder automaton accepts the true sums and rejects their neighbours.
fn automaton(cf: &ContinuedFraction, max: u64) -> Result<Check, CliError> {
    let adder = build_adder(cf)?;
    Ok(check(format!("adder automaton {cf} up to {max}"), |cases| {
        let enc = |n: u64| numeration::encode(cf, &n).map(|w| w.into_digits()).map_err(|e| e.to_string());
        for m in 0..=max {
            for n in 0..=max {
                for (z, expect) in [(m + n, true), (m + n + 1, false)] {
                    let word = convolve(&[enc(m)?, enc(n)?, enc(z)?], adder.digit_bound()).map_err(|e| e.to_string())?;
                    if adder.accepts(&word).map_err(|e| e.to_string())? != expect {
                        return Err(format!("({m}, {n}, {z}) should be {}", if expect { "accepted" } else { "rejected" }));
                    }
                    *cases += 1;
                }
            }
        }
        Ok(())
    }))
}

//! Line-oriented interchange format.
//!
//! ```text
//! arity 2
//! digit_bound 3
//! num_states 2
//! initial 0
//! final 1
//! transitions
//! 0 (0,1) 1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use super::{Alphabet, AutomataError, Automaton, StateId};

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arity {}", self.arity())?;
        writeln!(f, "digit_bound {}", self.digit_bound())?;
        writeln!(f, "num_states {}", self.num_states())?;
        write!(f, "initial")?;
        for s in &self.initial {
            write!(f, " {s}")?;
        }
        write!(f, "\nfinal")?;
        for s in self.finals() {
            write!(f, " {s}")?;
        }
        writeln!(f, "\ntransitions")?;
        let mut digits = vec![0; self.arity()];
        for (src, list) in self.transitions.iter().enumerate() {
            for &(l, dst) in list {
                self.alphabet.unpack_into(l, &mut digits);
                let tuple: Vec<String> = digits.iter().map(u32::to_string).collect();
                writeln!(f, "{src} ({}) {dst}", tuple.join(","))?;
            }
        }
        Ok(())
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> AutomataError {
    AutomataError::Parse { line, reason: reason.into() }
}

fn parse_num<T: FromStr>(line: usize, token: &str) -> Result<T, AutomataError> {
    token.parse().map_err(|_| parse_err(line, format!("expected a number, found {token:?}")))
}

impl FromStr for Automaton {
    type Err = AutomataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<(usize, Vec<String>), AutomataError> {
            let (n, line) = lines.next().ok_or_else(|| parse_err(0, format!("missing `{key}` line")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(parse_err(n, format!("expected `{key}`")));
            }
            Ok((n, parts.map(str::to_owned).collect()))
        };
        let single = |(n, values): (usize, Vec<String>)| -> Result<u64, AutomataError> {
            match values.as_slice() {
                [v] => parse_num(n, v),
                _ => Err(parse_err(n, "expected exactly one value")),
            }
        };
        let arity = single(header("arity")?)? as usize;
        let (bound_line, bound) = {
            let h = header("digit_bound")?;
            (h.0, single(h)?)
        };
        let bound = u32::try_from(bound).map_err(|_| parse_err(bound_line, "digit bound too large"))?;
        let num_states = single(header("num_states")?)? as usize;
        let list = |(n, values): (usize, Vec<String>)| -> Result<Vec<StateId>, AutomataError> {
            values.iter().map(|v| parse_num(n, v)).collect()
        };
        let initial = list(header("initial")?)?;
        let finals = list(header("final")?)?;
        let (n, rest) = header("transitions")?;
        if !rest.is_empty() {
            return Err(parse_err(n, "unexpected tokens after `transitions`"));
        }
        let alphabet = Alphabet::new(arity, bound)?;
        let mut edges = Vec::new();
        for (n, line) in lines {
            let open = line.find('(').ok_or_else(|| parse_err(n, "missing `(`"))?;
            let close = line.find(')').ok_or_else(|| parse_err(n, "missing `)`"))?;
            if close < open {
                return Err(parse_err(n, "malformed letter"));
            }
            let src: StateId = parse_num(n, line[..open].trim())?;
            let dst: StateId = parse_num(n, line[close + 1..].trim())?;
            let digits = line[open + 1..close]
                .split(',')
                .map(|d| parse_num(n, d.trim()))
                .collect::<Result<Vec<u32>, _>>()?;
            let letter = alphabet.letter(&digits).map_err(|e| parse_err(n, e.to_string()))?;
            edges.push((src, letter, dst));
        }
        Automaton::new(alphabet, num_states, initial, &finals, edges)
    }
}

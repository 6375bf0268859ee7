use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ostrowski::adder::{self, AdderError};
use ostrowski::automata::{convolve, AutomataError, Automaton};
use ostrowski::logic::{self, Compiler, LogicError, SyntaxError};
use ostrowski::numeration::{self, DigitWord, NumerationError};
use ostrowski::recognizers::{RecognizerError, Relation};
use ostrowski::{ContfracError, ContinuedFraction, Nat};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Contfrac(#[from] ContfracError),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
    #[error(transparent)]
    Adder(#[from] AdderError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Recognizer(#[from] RecognizerError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let not_quadratic = matches!(
            self,
            CliError::Contfrac(ContfracError::NotQuadratic)
                | CliError::Recognizer(RecognizerError::Contfrac(ContfracError::NotQuadratic))
                | CliError::Logic(LogicError::NotQuadratic)
        );
        if not_quadratic {
            3
        } else {
            2
        }
    }
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        CliError::Logic(e.into())
    }
}

/// What a command prints, in both output modes, and its exit code.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Self { text, json, code: 0 }
    }

    fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

fn digits_json(w: &DigitWord) -> Value {
    json!(w.to_msd())
}

/// Digit words may be given as separate arguments or as one quoted string.
fn parse_word(parts: &[String]) -> Result<DigitWord, CliError> {
    Ok(parts.join(" ").parse()?)
}

pub fn cf_info(cf: &ContinuedFraction, count: usize) -> Result<Report, CliError> {
    let count = match cf.known_len() {
        Some(known) => count.min(known + 1),
        None => count,
    };
    let q: Vec<Nat> = cf.convergent_denominators(count.saturating_sub(1))?;
    let q = &q[..count.min(q.len())];
    let list = |xs: &[u32]| if xs.is_empty() { "(none)".to_owned() } else { join(xs) };
    let mut text = String::new();
    writeln!(text, "cf: {cf}").unwrap();
    writeln!(text, "quadratic: {}", cf.is_quadratic()).unwrap();
    writeln!(text, "preperiod: {}", list(cf.preperiod())).unwrap();
    writeln!(text, "period: {}", list(cf.period())).unwrap();
    let mut obj = json!({
        "cf": cf.to_string(),
        "quadratic": cf.is_quadratic(),
        "a0": cf.a0(),
        "preperiod": cf.preperiod(),
        "period": cf.period(),
        "denominators": q.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
    });
    if let Ok(params) = cf.automaton_parameters() {
        writeln!(text, "max quotient: {}", params.mu).unwrap();
        writeln!(text, "digit bound: {}", params.m).unwrap();
        writeln!(text, "xi: {}", params.xi).unwrap();
        writeln!(text, "nu: {}", params.nu).unwrap();
        obj["max_quotient"] = json!(params.mu);
        obj["digit_bound"] = json!(params.m);
        obj["xi"] = json!(params.xi);
        obj["nu"] = json!(params.nu);
    }
    writeln!(text, "denominators: {}", join(q)).unwrap();
    Ok(Report::new(text, obj))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn encode(cf: &ContinuedFraction, value: &Nat) -> Result<Report, CliError> {
    let w = numeration::encode(cf, value)?;
    Ok(Report::new(format!("{w}\n"), json!({ "value": value.to_string(), "digits": digits_json(w.digits()) })))
}

pub fn decode(cf: &ContinuedFraction, parts: &[String]) -> Result<Report, CliError> {
    let w = parse_word(parts)?;
    let value: Nat = numeration::decode(cf, &w)?;
    let valid = numeration::is_valid(cf, &w);
    let json = json!({ "digits": digits_json(&w), "value": value.to_string(), "valid": valid });
    Ok(Report::new(format!("{value}\n"), json))
}

pub fn validate(cf: &ContinuedFraction, parts: &[String]) -> Result<Report, CliError> {
    let w = parse_word(parts)?;
    Ok(match numeration::check_valid(cf, &w) {
        Ok(()) => Report::new("valid\n".into(), json!({ "valid": true })),
        Err(NumerationError::Invalid { position, reason }) => Report::new(
            format!("invalid: {reason} at position {position}\n"),
            json!({ "valid": false, "position": position, "reason": reason }),
        )
        .with_code(1),
        Err(e) => return Err(e.into()),
    })
}

pub fn add(cf: &ContinuedFraction, left: &Nat, right: &Nat, trace: bool) -> Result<Report, CliError> {
    let x = numeration::encode(cf, left)?;
    let y = numeration::encode(cf, right)?;
    let sum = adder::add_words(&x, &y, trace)?;
    let mut text = String::new();
    let records: Vec<String> = sum.trace().map(ToString::to_string).collect();
    for r in &records {
        writeln!(text, "{r}").unwrap();
    }
    writeln!(text, "{}", sum.result).unwrap();
    let mut obj = json!({
        "left": digits_json(x.digits()),
        "right": digits_json(y.digits()),
        "digits": digits_json(sum.result.digits()),
        "value": (left + right).to_string(),
    });
    if trace {
        obj["trace"] = json!(records);
    }
    Ok(Report::new(text, obj))
}

pub fn build(cf: &ContinuedFraction, relation: Relation, output: Option<&Path>) -> Result<Report, CliError> {
    let automaton = relation.build(cf)?;
    let body = automaton.to_string();
    let summary = json!({
        "relation": relation.name(),
        "states": automaton.num_states(),
        "transitions": automaton.num_transitions(),
        "deterministic": automaton.is_deterministic(),
    });
    match output {
        Some(path) => {
            fs::write(path, &body).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            let text = format!("{}: {} states written to {}\n", relation.name(), automaton.num_states(), path.display());
            Ok(Report::new(text, summary))
        }
        None => {
            let mut json = summary;
            json["automaton"] = json!(body);
            Ok(Report::new(body, json))
        }
    }
}

pub fn run(path: &Path, words: &[String]) -> Result<Report, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let automaton: Automaton = text.parse()?;
    if words.len() != automaton.arity() {
        return Err(CliError::Input(format!(
            "the automaton reads {} tracks but {} words were given",
            automaton.arity(),
            words.len()
        )));
    }
    let tracks = words.iter().map(|w| w.parse::<DigitWord>()).collect::<Result<Vec<_>, _>>()?;
    let word = convolve(&tracks, automaton.digit_bound())?;
    let accepted = automaton.accepts(&word)?;
    let text = if accepted { "accept\n" } else { "reject\n" };
    Ok(Report::new(text.into(), json!({ "accepted": accepted })).with_code(if accepted { 0 } else { 1 }))
}

pub fn decide(cf: &ContinuedFraction, formula: &str, witness: bool) -> Result<Report, CliError> {
    let formula = logic::parse(formula)?;
    let mut compiler = Compiler::new(cf)?;
    let truth = compiler.decide(&formula)?;
    let mut text = format!("{truth}\n");
    let mut obj = json!({ "value": truth });
    if witness && truth {
        if let Some(assignment) = compiler.witness(&formula)? {
            let mut w = serde_json::Map::new();
            for (var, value) in &assignment {
                writeln!(text, "{var} = {value}").unwrap();
                w.insert(var.clone(), json!(value.to_string()));
            }
            obj["witness"] = Value::Object(w);
        }
    }
    Ok(Report::new(text, obj).with_code(if truth { 0 } else { 1 }))
}

pub fn enumerate(cf: &ContinuedFraction, formula: &str, bound: &Nat) -> Result<Report, CliError> {
    let formula = logic::parse(formula)?;
    let vars = formula.free_vars();
    let tuples = logic::enumerate(cf, &formula, bound)?;
    let mut text = String::new();
    for t in &tuples {
        let line: Vec<String> = vars.iter().zip(t).map(|(v, n)| format!("{v}={n}")).collect();
        writeln!(text, "{}", line.join(" ")).unwrap();
    }
    let rows: Vec<Vec<String>> = tuples.iter().map(|t| t.iter().map(|n| n.to_string()).collect()).collect();
    Ok(Report::new(text, json!({ "vars": vars, "bound": bound.to_string(), "tuples": rows })))
}

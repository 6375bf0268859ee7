//! Formulas to automata by structural recursion.
//!
//! Every intermediate automaton reads one track per free variable, sorted
//! by name, over the digits `{0, ..., mu}` that representations actually
//! use. Each track only ever carries padded representations, so complements
//! are taken inside the set of valid tuples.

use std::collections::HashMap;

use crate::automata::{Alphabet, Automaton};
use crate::contfrac::ContinuedFraction;
use crate::recognizers;
use crate::Nat;

use super::syntax::{Formula, Term};
use super::LogicError;

/// A compiled formula: a truth value once no variable is left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compiled {
    Const(bool),
    Auto { automaton: Automaton, vars: Vec<String> },
}

impl Compiled {
    pub fn vars(&self) -> &[String] {
        match self {
            Compiled::Const(_) => &[],
            Compiled::Auto { vars, .. } => vars,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Base {
    Valid,
    Equal,
    Less,
    LessEq,
    Sum,
    LeastTerm,
    Numeral(Nat),
}

/// One base relation on named variables, some of them auxiliary.
struct Constraint {
    base: Base,
    args: Vec<String>,
}

/// Compiles formulas for one continued fraction, caching base relations
/// and compiled subformulas. Not shared between threads.
pub struct Compiler {
    cf: ContinuedFraction,
    bound: u32,
    base: HashMap<Base, Automaton>,
    valid_at: HashMap<(usize, usize), Automaton>,
    valid_all: HashMap<usize, Automaton>,
    cache: HashMap<Formula, Compiled>,
    fresh: usize,
}

impl Compiler {
    pub fn new(cf: &ContinuedFraction) -> Result<Self, LogicError> {
        let params = cf.automaton_parameters()?;
        Ok(Self {
            cf: cf.clone(),
            bound: params.mu,
            base: HashMap::new(),
            valid_at: HashMap::new(),
            valid_all: HashMap::new(),
            cache: HashMap::new(),
            fresh: 0,
        })
    }

    pub fn continued_fraction(&self) -> &ContinuedFraction {
        &self.cf
    }

    /// The compiled formula with tracks in sorted variable order.
    pub fn compile(&mut self, formula: &Formula) -> Result<Compiled, LogicError> {
        if let Some(hit) = self.cache.get(formula) {
            return Ok(hit.clone());
        }
        let out = match formula {
            Formula::Eq(a, b) => {
                let mut cs = Vec::new();
                match (a, b) {
                    (Term::Var(x), t) | (t, Term::Var(x)) => self.bind(t, x, &mut cs),
                    _ => {
                        let x = self.term_var(a, &mut cs);
                        self.bind(b, &x, &mut cs);
                    }
                }
                self.conjoin(cs)?
            }
            Formula::Le(a, b) => self.binary(Base::LessEq, a, b)?,
            Formula::Lt(a, b) => self.binary(Base::Less, a, b)?,
            Formula::LeastTerm(a, b) => self.binary(Base::LeastTerm, a, b)?,
            Formula::Not(f) => {
                let inner = self.compile(f)?;
                self.negate(inner)?
            }
            Formula::And(f, g) => {
                let (f, g) = (self.compile(f)?, self.compile(g)?);
                self.and(f, g)?
            }
            Formula::Or(f, g) => {
                let (f, g) = (self.compile(f)?, self.compile(g)?);
                self.or(f, g)?
            }
            Formula::Implies(f, g) => {
                let f = self.compile(f)?;
                let f = self.negate(f)?;
                let g = self.compile(g)?;
                self.or(f, g)?
            }
            Formula::Exists(v, f) => {
                let inner = self.compile(f)?;
                self.exists(inner, v)?
            }
            Formula::Forall(v, f) => {
                let inner = self.compile(f)?;
                let inner = self.negate(inner)?;
                let inner = self.exists(inner, v)?;
                self.negate(inner)?
            }
        };
        self.cache.insert(formula.clone(), out.clone());
        Ok(out)
    }

    /// The compiled formula over exactly the tracks `order`, which must list
    /// every free variable once.
    pub fn compile_ordered(&mut self, formula: &Formula, order: &[String]) -> Result<Compiled, LogicError> {
        for (i, v) in order.iter().enumerate() {
            if order[..i].contains(v) {
                return Err(LogicError::DuplicateVariable(v.clone()));
            }
        }
        if let Some(v) = formula.free_vars().into_iter().find(|v| !order.contains(v)) {
            return Err(LogicError::UnboundVariable(v));
        }
        let compiled = self.compile(formula)?;
        if order.is_empty() {
            return Ok(compiled);
        }
        let mut sorted = order.to_vec();
        sorted.sort();
        let automaton = self.lift(compiled, &sorted)?;
        let permutation: Vec<usize> = order.iter().map(|v| sorted.binary_search(v).expect("listed")).collect();
        let automaton = automaton.permute_tracks(&permutation)?.minimize();
        Ok(Compiled::Auto { automaton, vars: order.to_vec() })
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    /// Constraints forcing `target = term`.
    fn bind(&mut self, term: &Term, target: &str, out: &mut Vec<Constraint>) {
        let (base, mut args) = match term {
            Term::Var(v) => (Base::Equal, vec![v.clone()]),
            Term::Num(n) => (Base::Numeral(n.clone()), vec![]),
            Term::Add(a, b) => {
                let a = self.term_var(a, out);
                let b = self.term_var(b, out);
                (Base::Sum, vec![a, b])
            }
        };
        args.push(target.to_owned());
        out.push(Constraint { base, args });
    }

    /// A variable equal to `term`, fresh unless the term is a variable.
    fn term_var(&mut self, term: &Term, out: &mut Vec<Constraint>) -> String {
        if let Term::Var(v) = term {
            return v.clone();
        }
        let x = self.fresh_var();
        self.bind(term, &x, out);
        x
    }

    fn binary(&mut self, base: Base, a: &Term, b: &Term) -> Result<Compiled, LogicError> {
        let mut cs = Vec::new();
        let x = self.term_var(a, &mut cs);
        let y = self.term_var(b, &mut cs);
        cs.push(Constraint { base, args: vec![x, y] });
        self.conjoin(cs)
    }

    /// The conjunction of the constraints with auxiliary variables projected
    /// away as soon as no later constraint mentions them.
    fn conjoin(&mut self, constraints: Vec<Constraint>) -> Result<Compiled, LogicError> {
        let mut acc = Compiled::Const(true);
        for (i, c) in constraints.iter().enumerate() {
            let placed = self.place(&c.base, &c.args)?;
            acc = self.and(acc, placed)?;
            let done: Vec<String> = acc
                .vars()
                .iter()
                .filter(|v| v.starts_with('#') && !constraints[i + 1..].iter().any(|c| c.args.contains(v)))
                .cloned()
                .collect();
            for v in done {
                acc = self.exists(acc, &v)?;
            }
        }
        Ok(acc)
    }

    fn base(&mut self, base: &Base) -> Result<Automaton, LogicError> {
        if let Some(a) = self.base.get(base) {
            return Ok(a.clone());
        }
        let cf = &self.cf;
        let built = match base {
            Base::Valid => recognizers::build_valid_rep(cf)?,
            Base::Equal => recognizers::build_equality(cf)?,
            Base::Less => recognizers::build_less_than(cf)?,
            Base::LessEq => recognizers::build_equality(cf)?.union(&recognizers::build_less_than(cf)?)?,
            Base::Sum => recognizers::build_adder(cf)?,
            Base::LeastTerm => recognizers::build_va_graph(cf)?,
            Base::Numeral(n) => recognizers::build_numeral(cf, n)?,
        };
        let narrowed = built.with_digit_bound(self.bound)?.minimize();
        self.base.insert(base.clone(), narrowed.clone());
        Ok(narrowed)
    }

    /// A base relation on `args`, merging repeated variables.
    fn place(&mut self, base: &Base, args: &[String]) -> Result<Compiled, LogicError> {
        let mut automaton = self.base(base)?;
        let mut vars: Vec<String> = Vec::new();
        for v in args {
            match vars.iter().position(|w| w == v) {
                Some(first) => automaton = automaton.identify_tracks(first, vars.len())?,
                None => vars.push(v.clone()),
            }
        }
        let mut sorted = vars.clone();
        sorted.sort();
        let permutation: Vec<usize> = sorted.iter().map(|v| vars.iter().position(|w| w == v).expect("present")).collect();
        let automaton = automaton.permute_tracks(&permutation)?.minimize();
        Ok(Compiled::Auto { automaton, vars: sorted })
    }

    /// `Valid` on track `track` of `arity`, other tracks unconstrained.
    fn valid_at(&mut self, track: usize, arity: usize) -> Result<Automaton, LogicError> {
        if let Some(a) = self.valid_at.get(&(track, arity)) {
            return Ok(a.clone());
        }
        let mut out = self.base(&Base::Valid)?;
        for _ in 0..track {
            out = out.cylindrify(0)?;
        }
        for _ in track + 1..arity {
            out = out.cylindrify(out.arity())?;
        }
        self.valid_at.insert((track, arity), out.clone());
        Ok(out)
    }

    /// Tuples of valid representations.
    fn valid_all(&mut self, arity: usize) -> Result<Automaton, LogicError> {
        if let Some(a) = self.valid_all.get(&arity) {
            return Ok(a.clone());
        }
        let mut out = self.valid_at(0, arity)?;
        for t in 1..arity {
            out = out.intersect(&self.valid_at(t, arity)?)?.minimize();
        }
        self.valid_all.insert(arity, out.clone());
        Ok(out)
    }

    /// Widens to the sorted superset `target`; new tracks range over valid
    /// representations.
    fn lift(&mut self, compiled: Compiled, target: &[String]) -> Result<Automaton, LogicError> {
        self.lift_with(compiled, target, true)
    }

    fn lift_with(&mut self, compiled: Compiled, target: &[String], constrain: bool) -> Result<Automaton, LogicError> {
        let (mut automaton, vars) = match compiled {
            Compiled::Const(true) => return self.valid_all(target.len()),
            Compiled::Const(false) => {
                let alphabet = Alphabet::new(target.len(), self.bound)?;
                return Ok(Automaton::empty(alphabet));
            }
            Compiled::Auto { automaton, vars } => (automaton, vars),
        };
        if vars == target {
            return Ok(automaton);
        }
        let added: Vec<usize> = (0..target.len()).filter(|&pos| vars.binary_search(&target[pos]).is_err()).collect();
        for &pos in &added {
            automaton = automaton.cylindrify(pos)?;
        }
        if constrain {
            for &pos in &added {
                automaton = automaton.intersect(&self.valid_at(pos, target.len())?)?;
            }
        }
        Ok(automaton)
    }

    fn merged(f: &Compiled, g: &Compiled) -> Vec<String> {
        let mut vars: Vec<String> = f.vars().iter().chain(g.vars()).cloned().collect();
        vars.sort();
        vars.dedup();
        vars
    }

    fn and(&mut self, f: Compiled, g: Compiled) -> Result<Compiled, LogicError> {
        match (f, g) {
            (Compiled::Const(false), _) | (_, Compiled::Const(false)) => Ok(Compiled::Const(false)),
            (Compiled::Const(true), h) | (h, Compiled::Const(true)) => Ok(h),
            (f, g) => {
                // each side constrains its own tracks, so the widening
                // needs no validity check
                let vars = Self::merged(&f, &g);
                let f = self.lift_with(f, &vars, false)?;
                let g = self.lift_with(g, &vars, false)?;
                Ok(Compiled::Auto { automaton: f.intersect(&g)?.minimize(), vars })
            }
        }
    }

    fn or(&mut self, f: Compiled, g: Compiled) -> Result<Compiled, LogicError> {
        match (f, g) {
            (Compiled::Const(true), _) | (_, Compiled::Const(true)) => Ok(Compiled::Const(true)),
            (Compiled::Const(false), h) | (h, Compiled::Const(false)) => Ok(h),
            (f, g) => {
                let vars = Self::merged(&f, &g);
                let f = self.lift(f, &vars)?;
                let g = self.lift(g, &vars)?;
                Ok(Compiled::Auto { automaton: f.union(&g)?.minimize(), vars })
            }
        }
    }

    fn negate(&mut self, f: Compiled) -> Result<Compiled, LogicError> {
        match f {
            Compiled::Const(b) => Ok(Compiled::Const(!b)),
            Compiled::Auto { automaton, vars } => {
                let universe = self.valid_all(vars.len())?;
                let complement = automaton.minimize().complement()?;
                Ok(Compiled::Auto { automaton: complement.intersect(&universe)?.minimize(), vars })
            }
        }
    }

    fn exists(&mut self, f: Compiled, var: &str) -> Result<Compiled, LogicError> {
        let Compiled::Auto { automaton, mut vars } = f else {
            return Ok(f);
        };
        let Some(pos) = vars.iter().position(|v| v == var) else {
            return Ok(Compiled::Auto { automaton, vars });
        };
        if vars.len() == 1 {
            return Ok(Compiled::Const(!automaton.is_empty()));
        }
        vars.remove(pos);
        Ok(Compiled::Auto { automaton: automaton.project(pos)?.minimize(), vars })
    }
}

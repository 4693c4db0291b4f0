//! Seeded random automata and the closure-law property suite.
//!
//! Generation uses ChaCha8 seeded from the 64-bit suite seed, with one
//! stream per case index, so every case is reproducible on its own and the
//! suite output does not depend on how cases are scheduled.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{concat, instantiate, parallel};
use crate::analysis::all_words;
use crate::automaton::{Automaton, Letter, StateId, StateSet, Symbol, Transitions, Word};
use crate::error::Result;
use crate::textio::{render_automaton, render_word};
use crate::trace::{parallel_verdicts, splits};

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    /// State counts are uniform on `1..=max_states`.
    pub max_states: usize,
    /// Chance of each possible `(from, symbol, to)` edge, ε included.
    pub edge_probability: f64,
    pub final_probability: f64,
    pub letters: Vec<String>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_states: 4,
            edge_probability: 0.3,
            final_probability: 0.3,
            letters: vec!["a".into(), "b".into()],
        }
    }
}

/// The generator for case `case` of a suite seeded with `seed`.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// States are `s0..s{n-1}` with `s0` initial.
pub fn random_automaton<R: Rng>(rng: &mut R, name: &str, config: &GeneratorConfig) -> Automaton {
    let count = rng.gen_range(1..=config.max_states.max(1));
    let states: Vec<StateId> = (0..count)
        .map(|i| StateId::new(format!("s{i}")).expect("valid state name"))
        .collect();
    let alphabet: BTreeSet<Letter> = config
        .letters
        .iter()
        .map(|l| Letter::new(l.as_str()).expect("generator letters are valid"))
        .collect();
    let symbols: Vec<Symbol> = std::iter::once(Symbol::Epsilon)
        .chain(alphabet.iter().cloned().map(Symbol::Letter))
        .collect();

    let mut transitions = Transitions::new();
    for from in &states {
        for x in &symbols {
            for to in &states {
                if rng.gen_bool(config.edge_probability) {
                    transitions
                        .entry((from.clone(), x.clone()))
                        .or_default()
                        .insert(to.clone());
                }
            }
        }
    }
    let finals: StateSet = states
        .iter()
        .filter(|_| rng.gen_bool(config.final_probability))
        .cloned()
        .collect();
    Automaton::from_parts(
        name,
        alphabet,
        states.iter().cloned().collect(),
        states[0].clone(),
        transitions,
        finals,
    )
}

/// The two operands of case `case`.
pub fn random_pair(seed: u64, case: u64, config: &GeneratorConfig) -> (Automaton, Automaton) {
    let mut rng = case_rng(seed, case);
    let a = random_automaton(&mut rng, "A", config);
    let b = random_automaton(&mut rng, "B", config);
    (a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    /// Membership in `a ; b` equals the existence of a split point.
    Concatenation,
    /// Membership in `a | b` equals membership in either operand.
    Union,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseFailure {
    pub case: u64,
    pub law: Law,
    pub word: Word,
    pub composite: bool,
    pub oracle: bool,
    pub left: Automaton,
    pub right: Automaton,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropsReport {
    pub seed: u64,
    pub cases: u64,
    pub max_len: usize,
    pub checks: u64,
    pub failures: Vec<CaseFailure>,
}

impl PropsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Summary, then the first failing case in full if there is one.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "seed {}", self.seed).unwrap();
        writeln!(out, "cases {}", self.cases).unwrap();
        writeln!(out, "max-len {}", self.max_len).unwrap();
        writeln!(out, "checks {}", self.checks).unwrap();
        writeln!(out, "failures {}", self.failures.len()).unwrap();
        if let Some(f) = self.failures.first() {
            let alphabet = f.left.alphabet().union(f.right.alphabet()).cloned().collect();
            writeln!(
                out,
                "first failure: case {} law {:?} word {} composite {} oracle {}",
                f.case,
                f.law,
                render_word(&f.word, &alphabet),
                f.composite,
                f.oracle
            )
            .unwrap();
            out.push_str(&render_automaton(&f.left));
            out.push_str(&render_automaton(&f.right));
        }
        out
    }
}

/// Checks both closure laws on one random pair over every word up to
/// `max_len`. Returns the number of checks and the failures found.
pub fn check_case(seed: u64, case: u64, max_len: usize, config: &GeneratorConfig) -> Result<(u64, Vec<CaseFailure>)> {
    let (a, b) = random_pair(seed, case, config);
    let left = instantiate(&a, "L")?;
    let right = instantiate(&b, "R")?;
    let cat = concat(&left, &right)?;
    let par = parallel(&left, &right)?;
    let alphabet: BTreeSet<Letter> = a.alphabet().union(b.alphabet()).cloned().collect();

    let mut checks = 0;
    let mut failures = Vec::new();
    for w in all_words(&alphabet, max_len) {
        let by_split = !splits(&a, &b, &w)?.is_empty();
        let (in_a, in_b) = parallel_verdicts(&a, &b, &w)?;
        for (law, composite, oracle) in [
            (Law::Concatenation, cat.accepts(&w)?, by_split),
            (Law::Union, par.accepts(&w)?, in_a || in_b),
        ] {
            checks += 1;
            if composite != oracle {
                failures.push(CaseFailure {
                    case,
                    law,
                    word: w.clone(),
                    composite,
                    oracle,
                    left: a.clone(),
                    right: b.clone(),
                });
            }
        }
    }
    Ok((checks, failures))
}

/// Runs `cases` independent cases in parallel; results are merged in case
/// order.
pub fn run_props(seed: u64, cases: u64, max_len: usize) -> Result<PropsReport> {
    let config = GeneratorConfig::default();
    let outcomes: Vec<(u64, Vec<CaseFailure>)> = (0..cases)
        .into_par_iter()
        .map(|case| check_case(seed, case, max_len, &config))
        .collect::<Result<_>>()?;
    let mut report = PropsReport {
        seed,
        cases,
        max_len,
        checks: 0,
        failures: Vec::new(),
    };
    for (checks, failures) in outcomes {
        report.checks += checks;
        report.failures.extend(failures);
    }
    Ok(report)
}

//! Shared oracles and generators for the integration tests. Nothing here
//! calls the simulation, determinization or composition code under test.
#![allow(dead_code)]

use std::collections::HashSet;

use mhc::{Automaton, Letter, StateId, Symbol, Word};
use proptest::prelude::*;

pub fn word(text: &str) -> Word {
    Letter::chars(text).unwrap()
}

/// Every word over `letters` up to `max_len`, built independently of the
/// library's enumeration helpers.
pub fn words(letters: &[&str], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for l in letters {
                let mut w = w.clone();
                w.push(Letter::new(*l).unwrap());
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Searches run sequences directly on the transition table: any number of
/// letters, at most |S| consecutive ε-steps between them. Dead
/// `(state, position, ε-run)` triples are remembered so the search stays
/// polynomial.
pub fn brute_accepts(a: &Automaton, w: &[Letter]) -> bool {
    fn go(
        a: &Automaton,
        w: &[Letter],
        q: &StateId,
        pos: usize,
        eps_run: usize,
        dead: &mut HashSet<(StateId, usize, usize)>,
    ) -> bool {
        if pos == w.len() && a.finals().contains(q) {
            return true;
        }
        if dead.contains(&(q.clone(), pos, eps_run)) {
            return false;
        }
        if let Some(x) = w.get(pos) {
            if let Some(targets) = a.transitions().get(&(q.clone(), Symbol::Letter(x.clone()))) {
                for r in targets {
                    if go(a, w, r, pos + 1, 0, dead) {
                        return true;
                    }
                }
            }
        }
        if eps_run < a.states().len() {
            if let Some(targets) = a.transitions().get(&(q.clone(), Symbol::Epsilon)) {
                for r in targets {
                    if go(a, w, r, pos, eps_run + 1, dead) {
                        return true;
                    }
                }
            }
        }
        dead.insert((q.clone(), pos, eps_run));
        false
    }
    if w.iter().any(|x| !a.alphabet().contains(x)) {
        return false;
    }
    go(a, w, a.initial(), 0, 0, &mut HashSet::new())
}

/// `b` at the third position from the right.
pub fn in_l1(w: &[Letter]) -> bool {
    w.len() >= 3 && w[w.len() - 3].as_str() == "b"
}

/// `a^m b^n` with `m > 0`.
pub fn in_l2(w: &[Letter]) -> bool {
    let m = w.iter().take_while(|x| x.as_str() == "a").count();
    m > 0 && w[m..].iter().all(|x| x.as_str() == "b")
}

/// Builds an automaton from masks: `edges[(from * (k + 1) + symbol) * n + to]`
/// with symbol 0 = ε.
fn assemble(name: &str, n: usize, k: usize, edges: &[bool], finals: &[bool]) -> Automaton {
    let letters = ["a", "b"];
    let mut b = Automaton::builder(name)
        .alphabet(letters[..k].iter().copied())
        .states((0..n).map(|i| format!("s{i}")))
        .initial("s0")
        .finals((0..n).filter(|&i| finals[i]).map(|i| format!("s{i}")));
    for from in 0..n {
        for x in 0..=k {
            for to in 0..n {
                if edges[(from * (k + 1) + x) * n + to] {
                    let symbol = if x == 0 { "eps" } else { letters[x - 1] };
                    b = b.transition(format!("s{from}"), symbol, format!("s{to}"));
                }
            }
        }
    }
    b.build().unwrap()
}

/// Automata with 1–4 states over `{a}` or `{a, b}`, edges and finals each
/// present with probability 0.3.
pub fn automaton(name: &'static str) -> impl Strategy<Value = Automaton> {
    (1..=4usize, 1..=2usize).prop_flat_map(move |(n, k)| {
        (
            proptest::collection::vec(proptest::bool::weighted(0.3), n * (k + 1) * n),
            proptest::collection::vec(proptest::bool::weighted(0.3), n),
        )
            .prop_map(move |(edges, finals)| assemble(name, n, k, &edges, &finals))
    })
}

/// Same distribution, alphabet fixed to `{a, b}`.
pub fn ab_automaton(name: &'static str) -> impl Strategy<Value = Automaton> {
    (1..=4usize).prop_flat_map(move |n| {
        (
            proptest::collection::vec(proptest::bool::weighted(0.3), n * 3 * n),
            proptest::collection::vec(proptest::bool::weighted(0.3), n),
        )
            .prop_map(move |(edges, finals)| assemble(name, n, 2, &edges, &finals))
    })
}

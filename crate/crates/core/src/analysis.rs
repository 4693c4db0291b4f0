//! Subset construction, synchronous products, language equivalence with
//! counterexamples, and bounded enumeration of a language.
//!
//! [`enumerate_language`] simulates the ε-NFA directly on every string and
//! never goes through [`determinize`], so the two can check each other.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{Automaton, Letter, StateId, StateSet, Symbol, Transitions, Word};
use crate::error::{Error, Result};

/// Default upper bound on [`enumerate_language`]'s `max_len`.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

/// A DFA state of the subset construction: a sorted set of NFA states.
pub type SubsetState = Vec<StateId>;

/// A complete DFA with states `0..len()`. `L` labels each state with where
/// it came from: a subset of NFA states, or a pair of DFA states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa<L = SubsetState> {
    alphabet: Vec<Letter>,
    labels: Vec<L>,
    initial: usize,
    delta: Vec<Vec<usize>>,
    finals: Vec<bool>,
}

impl<L> Dfa<L> {
    /// Sorted alphabet; letter `i` indexes the columns of the transition table.
    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn next(&self, state: usize, letter: usize) -> usize {
        self.delta[state][letter]
    }

    fn letter_index(&self, x: &Letter) -> Result<usize> {
        self.alphabet
            .binary_search(x)
            .map_err(|_| Error::UnknownSymbol(x.to_string()))
    }

    pub fn accepts(&self, input: &[Letter]) -> Result<bool> {
        let mut state = self.initial;
        for x in input {
            state = self.next(state, self.letter_index(x)?);
        }
        Ok(self.finals[state])
    }
}

impl Dfa<SubsetState> {
    /// The DFA as an automaton with states `d0, d1, ...` in exploration order.
    pub fn to_automaton(&self, name: impl Into<String>) -> Automaton {
        let id = |i: usize| StateId::new(format!("d{i}")).expect("valid state name");
        let mut transitions = Transitions::new();
        for (i, row) in self.delta.iter().enumerate() {
            for (x, &j) in self.alphabet.iter().zip(row) {
                transitions
                    .entry((id(i), Symbol::Letter(x.clone())))
                    .or_default()
                    .insert(id(j));
            }
        }
        Automaton::from_parts(
            name,
            self.alphabet.iter().cloned().collect(),
            (0..self.len()).map(id).collect(),
            id(self.initial),
            transitions,
            (0..self.len()).filter(|&i| self.finals[i]).map(id).collect(),
        )
    }
}

/// Explores from the initial state and keeps what is reachable, numbering
/// states in breadth-first order with letters in alphabet order.
fn explore<K, S, F>(alphabet: Vec<Letter>, start: K, mut successor: S, is_final: F) -> Dfa<K>
where
    K: Clone + Eq + std::hash::Hash,
    S: FnMut(&K, &Letter) -> K,
    F: Fn(&K) -> bool,
{
    let mut index: HashMap<K, usize> = HashMap::from([(start.clone(), 0)]);
    let mut labels = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut cursor = 0;
    while cursor < labels.len() {
        let current = labels[cursor].clone();
        let row = alphabet
            .iter()
            .map(|x| {
                let target = successor(&current, x);
                *index.entry(target.clone()).or_insert_with(|| {
                    labels.push(target);
                    labels.len() - 1
                })
            })
            .collect();
        delta.push(row);
        cursor += 1;
    }
    let finals = labels.iter().map(&is_final).collect();
    Dfa {
        alphabet,
        labels,
        initial: 0,
        delta,
        finals,
    }
}

/// Subset construction over `a`'s own alphabet.
pub fn determinize(a: &Automaton) -> Result<Dfa> {
    determinize_over(a, a.alphabet())
}

/// Subset construction over a superset of `a`'s alphabet. Letters `a` does
/// not know lead to the empty subset.
pub fn determinize_over(a: &Automaton, alphabet: &BTreeSet<Letter>) -> Result<Dfa> {
    a.ensure_valid()?;
    if !a.alphabet().is_subset(alphabet) {
        return Err(Error::AlphabetMismatch);
    }
    let start: SubsetState = a.epsilon_closure([a.initial()])?.into_iter().collect();
    let successor = |subset: &SubsetState, x: &Letter| -> SubsetState {
        let symbol = Symbol::Letter(x.clone());
        let moved: StateSet = subset
            .iter()
            .flat_map(|q| a.successors(q, &symbol))
            .cloned()
            .collect();
        a.epsilon_closure(&moved)
            .expect("targets of a valid automaton are states")
            .into_iter()
            .collect()
    };
    let is_final = |subset: &SubsetState| subset.iter().any(|q| a.is_final(q));
    Ok(explore(alphabet.iter().cloned().collect(), start, successor, is_final))
}

/// Synchronous product; a pair is final iff `combine(x final, y final)`.
pub fn product<A, B, F>(x: &Dfa<A>, y: &Dfa<B>, combine: F) -> Result<Dfa<(usize, usize)>>
where
    F: Fn(bool, bool) -> bool,
{
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let letters: HashMap<&Letter, usize> = x.alphabet.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let successor = |&(p, q): &(usize, usize), l: &Letter| {
        let i = letters[l];
        (x.next(p, i), y.next(q, i))
    };
    let is_final = |&(p, q): &(usize, usize)| combine(x.is_final(p), y.is_final(q));
    Ok(explore(
        x.alphabet.clone(),
        (x.initial, y.initial),
        successor,
        is_final,
    ))
}

/// The shortest accepted word, least in letter order among the shortest;
/// `None` iff the language is empty.
pub fn shortest_accepted<L>(x: &Dfa<L>) -> Option<Word> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; x.len()];
    let mut seen = vec![false; x.len()];
    seen[x.initial] = true;
    let mut queue = VecDeque::from([x.initial]);
    while let Some(state) = queue.pop_front() {
        if x.finals[state] {
            let mut word = Vec::new();
            let mut cursor = state;
            while let Some((prev, letter)) = parent[cursor] {
                word.push(x.alphabet[letter].clone());
                cursor = prev;
            }
            word.reverse();
            return Some(word);
        }
        for (letter, &next) in x.delta[state].iter().enumerate() {
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some((state, letter));
                queue.push_back(next);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// A word accepted by exactly one side; present iff not equivalent.
    pub counterexample: Option<Word>,
}

/// Decides `L(a) = L(b)` by searching the xor-product over the union alphabet.
pub fn equivalent(a: &Automaton, b: &Automaton) -> Result<EquivalenceVerdict> {
    let alphabet: BTreeSet<Letter> = a.alphabet().union(b.alphabet()).cloned().collect();
    let da = determinize_over(a, &alphabet)?;
    let db = determinize_over(b, &alphabet)?;
    let xor = product(&da, &db, |p, q| p != q)?;
    let counterexample = shortest_accepted(&xor);
    Ok(EquivalenceVerdict {
        equivalent: counterexample.is_none(),
        counterexample,
    })
}

/// Every word over `alphabet` of length at most `max_len`, shortest first
/// and then in letter order.
pub fn all_words(alphabet: &BTreeSet<Letter>, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |x| {
                    let mut w = w.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// All accepted words of length at most `max_len`, shortest first and then
/// in letter order. `max_len` may not exceed [`DEFAULT_ENUMERATION_BOUND`].
pub fn enumerate_language(a: &Automaton, max_len: usize) -> Result<Vec<Word>> {
    enumerate_language_bounded(a, max_len, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_language_bounded(a: &Automaton, max_len: usize, bound: usize) -> Result<Vec<Word>> {
    if max_len > bound {
        return Err(Error::BoundExceeded {
            requested: max_len,
            bound,
        });
    }
    a.ensure_valid()?;
    let mut accepted = Vec::new();
    // Each level holds every word of one length with its simulated state set.
    let mut level: Vec<(Word, StateSet)> = vec![(Vec::new(), a.epsilon_closure([a.initial()])?)];
    for len in 0..=max_len {
        accepted.extend(
            level
                .iter()
                .filter(|(_, current)| current.iter().any(|q| a.is_final(q)))
                .map(|(w, _)| w.clone()),
        );
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * a.alphabet().len());
        for (w, current) in &level {
            for x in a.alphabet() {
                let mut extended = w.clone();
                extended.push(x.clone());
                next.push((extended, a.step(current, x)?));
            }
        }
        level = next;
    }
    Ok(accepted)
}

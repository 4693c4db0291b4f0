//! ε-NFAs: the `(Σ, S, s, δ, F)` tuple, its validation, and simulation.
//!
//! States carry a namespace path so that automata built from several
//! devices keep track of where each state came from. The transition
//! relation is stored sparsely: a missing `(state, symbol)` entry is the
//! empty set.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Reserved spelling of the empty string in text formats.
pub const EPSILON_TOKEN: &str = "eps";

fn is_plain_token(text: &str) -> bool {
    !text.is_empty() && !text.chars().any(|c| c.is_whitespace() || c == '#')
}

/// Path segments and local state names: whitespace-free and dot-free, since
/// dots join the namespace path in text formats.
pub(crate) fn is_state_token(text: &str) -> bool {
    is_plain_token(text) && !text.contains('.')
}

/// Automaton and device names.
pub(crate) fn is_name_token(text: &str) -> bool {
    is_plain_token(text)
}

/// An alphabet letter. Never the empty string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(String);

impl Letter {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if !is_plain_token(&token) || token == EPSILON_TOKEN || token.contains(',') {
            return Err(Error::InvalidLetter(token));
        }
        Ok(Letter(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Splits `text` into one letter per character.
    pub fn chars(text: &str) -> Result<Vec<Letter>> {
        text.chars().map(|c| Letter::new(c.to_string())).collect()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A transition label: a letter or ε. `Epsilon` sorts before every letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Epsilon,
    Letter(Letter),
}

impl Symbol {
    pub fn letter(&self) -> Option<&Letter> {
        match self {
            Symbol::Epsilon => None,
            Symbol::Letter(l) => Some(l),
        }
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, Symbol::Epsilon)
    }

    /// Parses a text token, mapping the reserved `eps` to [`Symbol::Epsilon`].
    pub fn parse(token: &str) -> Result<Self> {
        if token == EPSILON_TOKEN {
            Ok(Symbol::Epsilon)
        } else {
            Letter::new(token).map(Symbol::Letter)
        }
    }
}

impl From<Letter> for Symbol {
    fn from(l: Letter) -> Self {
        Symbol::Letter(l)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Epsilon => f.write_str(EPSILON_TOKEN),
            Symbol::Letter(l) => l.fmt(f),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Epsilon => f.write_str("ε"),
            Symbol::Letter(l) => l.fmt(f),
        }
    }
}

/// A state name qualified by the path of the device it came from.
///
/// Ordering is lexicographic on `(namespace, local)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId {
    namespace: Vec<String>,
    local: String,
}

impl StateId {
    pub fn new(local: impl Into<String>) -> Result<Self> {
        Self::with_namespace(Vec::<String>::new(), local)
    }

    pub fn with_namespace<I, S>(namespace: I, local: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let namespace: Vec<String> = namespace.into_iter().map(Into::into).collect();
        let local = local.into();
        if let Some(bad) = namespace.iter().find(|s| !is_state_token(s)) {
            return Err(Error::InvalidName(bad.clone()));
        }
        if !is_state_token(&local) {
            return Err(Error::InvalidName(local));
        }
        Ok(StateId { namespace, local })
    }

    /// Parses the dot-joined spelling used by the text formats (`L.R.p0`).
    pub fn parse(dotted: &str) -> Result<Self> {
        let mut parts: Vec<&str> = dotted.split('.').collect();
        let local = parts.pop().unwrap_or_default();
        Self::with_namespace(parts, local).map_err(|_| Error::InvalidName(dotted.to_string()))
    }

    pub fn namespace(&self) -> &[String] {
        &self.namespace
    }

    pub fn local(&self) -> &str {
        &self.local
    }

    /// The same state moved one level down, under `segment`.
    pub(crate) fn prefixed(&self, segment: &str) -> StateId {
        let mut namespace = Vec::with_capacity(self.namespace.len() + 1);
        namespace.push(segment.to_string());
        namespace.extend(self.namespace.iter().cloned());
        StateId {
            namespace,
            local: self.local.clone(),
        }
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for segment in &self.namespace {
            write!(f, "{segment}.")?;
        }
        f.write_str(&self.local)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub type StateSet = BTreeSet<StateId>;
/// An input string: a sequence of letters, never containing ε.
pub type Word = Vec<Letter>;

/// A position in the input paired with a state.
type Config = (usize, StateId);

pub type Transitions = BTreeMap<(StateId, Symbol), StateSet>;

/// An ε-NFA. Immutable once built; ε belongs to every alphabet implicitly
/// and is never stored in [`Automaton::alphabet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    alphabet: BTreeSet<Letter>,
    states: StateSet,
    initial: StateId,
    transitions: Transitions,
    finals: StateSet,
}

impl Automaton {
    /// Assembles an automaton without checking it. Use [`Automaton::validate`]
    /// or go through [`AutomatonBuilder`] for a checked value.
    pub fn from_parts(
        name: impl Into<String>,
        alphabet: BTreeSet<Letter>,
        states: StateSet,
        initial: StateId,
        transitions: Transitions,
        finals: StateSet,
    ) -> Self {
        let mut transitions = transitions;
        transitions.retain(|_, targets| !targets.is_empty());
        Automaton {
            name: name.into(),
            alphabet,
            states,
            initial,
            transitions,
            finals,
        }
    }

    pub fn builder(name: impl Into<String>) -> AutomatonBuilder {
        AutomatonBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    pub fn states(&self) -> &StateSet {
        &self.states
    }

    pub fn initial(&self) -> &StateId {
        &self.initial
    }

    pub fn finals(&self) -> &StateSet {
        &self.finals
    }

    pub fn transitions(&self) -> &Transitions {
        &self.transitions
    }

    pub fn is_final(&self, q: &StateId) -> bool {
        self.finals.contains(q)
    }

    /// `δ(q, x)`; empty when no entry is stored.
    pub fn successors<'a>(
        &'a self,
        q: &StateId,
        x: &Symbol,
    ) -> impl Iterator<Item = &'a StateId> + 'a {
        self.transitions
            .get(&(q.clone(), x.clone()))
            .into_iter()
            .flatten()
    }

    /// Every edge `(from, symbol, to)` in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (&StateId, &Symbol, &StateId)> {
        self.transitions
            .iter()
            .flat_map(|((from, x), targets)| targets.iter().map(move |to| (from, x, to)))
    }

    pub fn edge_count(&self) -> usize {
        self.transitions.values().map(BTreeSet::len).sum()
    }

    /// A copy with a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Automaton {
        Automaton {
            name: name.into(),
            ..self.clone()
        }
    }

    pub(crate) fn into_parts(self) -> (String, BTreeSet<Letter>, StateSet, StateId, Transitions, StateSet) {
        (
            self.name,
            self.alphabet,
            self.states,
            self.initial,
            self.transitions,
            self.finals,
        )
    }

    /// Every invariant violation; empty iff the automaton is well formed.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if !is_name_token(&self.name) {
            violations.push(Violation::new(
                ViolationCode::InvalidName,
                format!("automaton name `{}` is empty or contains whitespace", self.name),
            ));
        }
        if !self.states.contains(&self.initial) {
            violations.push(Violation::new(
                ViolationCode::InitialNotInStates,
                format!("initial state `{}` is not a declared state", self.initial),
            ));
        }
        for f in self.finals.iter().filter(|f| !self.states.contains(f)) {
            violations.push(Violation::new(
                ViolationCode::FinalNotInStates,
                format!("final state `{f}` is not a declared state"),
            ));
        }
        for ((from, x), targets) in &self.transitions {
            if let Symbol::Letter(l) = x {
                if !self.alphabet.contains(l) {
                    violations.push(Violation::new(
                        ViolationCode::UnknownSymbol,
                        format!("transition from `{from}` uses `{l}`, which is not in the alphabet"),
                    ));
                }
            }
            for q in std::iter::once(from).chain(targets) {
                if !self.states.contains(q) {
                    violations.push(Violation::new(
                        ViolationCode::UnknownState,
                        format!("transition `{from} {x}` mentions undeclared state `{q}`"),
                    ));
                }
            }
        }
        ValidationReport { violations }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(report))
        }
    }

    fn check_letter(&self, x: &Letter) -> Result<()> {
        if self.alphabet.contains(x) {
            Ok(())
        } else {
            Err(Error::UnknownSymbol(x.to_string()))
        }
    }

    /// The smallest superset of `from` closed under ε-transitions.
    pub fn epsilon_closure<'a, I>(&self, from: I) -> Result<StateSet>
    where
        I: IntoIterator<Item = &'a StateId>,
    {
        let mut closure = StateSet::new();
        let mut pending = Vec::new();
        for q in from {
            if !self.states.contains(q) {
                return Err(Error::UnknownState(q.clone()));
            }
            if closure.insert(q.clone()) {
                pending.push(q.clone());
            }
        }
        while let Some(q) = pending.pop() {
            for r in self.successors(&q, &Symbol::Epsilon) {
                if closure.insert(r.clone()) {
                    pending.push(r.clone());
                }
            }
        }
        Ok(closure)
    }

    /// One letter of subset simulation: the ε-closure of `δ(current, x)`.
    pub fn step(&self, current: &StateSet, x: &Letter) -> Result<StateSet> {
        self.check_letter(x)?;
        if let Some(q) = current.iter().find(|q| !self.states.contains(q)) {
            return Err(Error::UnknownState(q.clone()));
        }
        let symbol = Symbol::Letter(x.clone());
        let moved: Vec<&StateId> = current
            .iter()
            .flat_map(|q| self.successors(q, &symbol))
            .collect();
        self.epsilon_closure(moved)
    }

    /// Whether some run reads `input`, with ε-moves inserted anywhere.
    pub fn accepts(&self, input: &[Letter]) -> Result<bool> {
        for x in input {
            self.check_letter(x)?;
        }
        let mut current = self.epsilon_closure([&self.initial])?;
        for x in input {
            if current.is_empty() {
                return Ok(false);
            }
            current = self.step(&current, x)?;
        }
        Ok(current.iter().any(|q| self.finals.contains(q)))
    }

    /// The canonical accepting run on `input`, if any.
    ///
    /// Breadth-first over `(position, state)` configurations: the result is
    /// shortest in total steps, then lexicographically least when each step
    /// is compared as `(next state, symbol)`.
    pub fn witness(&self, input: &[Letter]) -> Result<Option<RunWitness>> {
        for x in input {
            self.check_letter(x)?;
        }
        if !self.states.contains(&self.initial) {
            return Err(Error::UnknownState(self.initial.clone()));
        }
        let start: Config = (0, self.initial.clone());
        let mut parent: HashMap<Config, (Config, Symbol)> = HashMap::new();
        let mut seen: HashSet<Config> = HashSet::from([start.clone()]);
        let mut layer = vec![start];

        while !layer.is_empty() {
            if let Some(goal) = layer
                .iter()
                .find(|(pos, q)| *pos == input.len() && self.finals.contains(q))
            {
                return Ok(Some(self.rebuild(goal.clone(), &parent)));
            }
            let mut next = Vec::new();
            for config in &layer {
                let (pos, q) = config;
                let mut moves: Vec<(&StateId, Symbol, usize)> = self
                    .successors(q, &Symbol::Epsilon)
                    .map(|r| (r, Symbol::Epsilon, *pos))
                    .collect();
                if let Some(x) = input.get(*pos) {
                    let symbol = Symbol::Letter(x.clone());
                    moves.extend(self.successors(q, &symbol).map(|r| (r, symbol.clone(), pos + 1)));
                }
                moves.sort();
                for (r, symbol, next_pos) in moves {
                    let target = (next_pos, r.clone());
                    if seen.insert(target.clone()) {
                        parent.insert(target.clone(), (config.clone(), symbol));
                        next.push(target);
                    }
                }
            }
            layer = next;
        }
        Ok(None)
    }

    fn rebuild(
        &self,
        goal: (usize, StateId),
        parent: &HashMap<Config, (Config, Symbol)>,
    ) -> RunWitness {
        let mut states = vec![goal.1.clone()];
        let mut symbols = Vec::new();
        let mut cursor = goal;
        while let Some((prev, symbol)) = parent.get(&cursor) {
            states.push(prev.1.clone());
            symbols.push(symbol.clone());
            cursor = prev.clone();
        }
        states.reverse();
        symbols.reverse();
        RunWitness { states, symbols }
    }
}

/// An accepting run `p0 -x1-> p1 ... -xn-> pn`; `symbols` may contain ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunWitness {
    pub states: Vec<StateId>,
    pub symbols: Vec<Symbol>,
}

impl RunWitness {
    /// The letters read, with ε erased.
    pub fn input(&self) -> Vec<Letter> {
        self.symbols.iter().filter_map(Symbol::letter).cloned().collect()
    }

    /// Checks every run invariant against `a` and the expected `input`.
    pub fn is_valid_for(&self, a: &Automaton, input: &[Letter]) -> bool {
        if self.states.len() != self.symbols.len() + 1 {
            return false;
        }
        let (Some(first), Some(last)) = (self.states.first(), self.states.last()) else {
            return false;
        };
        first == a.initial()
            && a.is_final(last)
            && self.input() == input
            && self
                .states
                .windows(2)
                .zip(&self.symbols)
                .all(|(pair, x)| a.successors(&pair[0], x).any(|r| *r == pair[1]))
    }
}

/// Checked construction from text tokens.
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    name: String,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Option<String>,
    finals: Vec<String>,
    transitions: Vec<(String, String, String)>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        AutomatonBuilder {
            name: name.into(),
            alphabet: Vec::new(),
            states: Vec::new(),
            initial: None,
            finals: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn alphabet<I: IntoIterator<Item = S>, S: Into<String>>(mut self, letters: I) -> Self {
        self.alphabet.extend(letters.into_iter().map(Into::into));
        self
    }

    pub fn states<I: IntoIterator<Item = S>, S: Into<String>>(mut self, states: I) -> Self {
        self.states.extend(states.into_iter().map(Into::into));
        self
    }

    pub fn initial(mut self, state: impl Into<String>) -> Self {
        self.initial = Some(state.into());
        self
    }

    pub fn finals<I: IntoIterator<Item = S>, S: Into<String>>(mut self, states: I) -> Self {
        self.finals.extend(states.into_iter().map(Into::into));
        self
    }

    /// Adds an edge; `symbol` may be the reserved `eps`.
    pub fn transition(
        mut self,
        from: impl Into<String>,
        symbol: impl Into<String>,
        to: impl Into<String>,
    ) -> Self {
        self.transitions.push((from.into(), symbol.into(), to.into()));
        self
    }

    pub fn build(self) -> Result<Automaton> {
        let alphabet = self
            .alphabet
            .into_iter()
            .map(Letter::new)
            .collect::<Result<BTreeSet<_>>>()?;
        let states = self
            .states
            .iter()
            .map(|s| StateId::parse(s))
            .collect::<Result<StateSet>>()?;
        let initial = StateId::parse(self.initial.as_deref().unwrap_or_default())?;
        let finals = self
            .finals
            .iter()
            .map(|s| StateId::parse(s))
            .collect::<Result<StateSet>>()?;
        let mut transitions = Transitions::new();
        for (from, symbol, to) in &self.transitions {
            transitions
                .entry((StateId::parse(from)?, Symbol::parse(symbol)?))
                .or_default()
                .insert(StateId::parse(to)?);
        }
        let a = Automaton::from_parts(self.name, alphabet, states, initial, transitions, finals);
        a.ensure_valid()?;
        Ok(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationCode {
    InvalidName,
    InitialNotInStates,
    FinalNotInStates,
    UnknownState,
    UnknownSymbol,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::InvalidName => "invalid-name",
            ViolationCode::InitialNotInStates => "initial-not-in-states",
            ViolationCode::FinalNotInStates => "final-not-in-states",
            ViolationCode::UnknownState => "unknown-state",
            ViolationCode::UnknownSymbol => "unknown-symbol",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl Violation {
    fn new(code: ViolationCode, message: String) -> Self {
        Violation { code, message }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.code, v.message))
            .collect();
        f.write_str(&lines.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{n1, n2};

    fn set(names: &[&str]) -> StateSet {
        names.iter().map(|n| StateId::parse(n).unwrap()).collect()
    }

    fn word(text: &str) -> Vec<Letter> {
        Letter::chars(text).unwrap()
    }

    #[test]
    fn letters_reject_reserved_and_blank_tokens() {
        assert!(Letter::new("eps").is_err());
        assert!(Letter::new("").is_err());
        assert!(Letter::new("a b").is_err());
        assert!(Letter::new("go").is_ok());
        assert_eq!(Symbol::parse("eps").unwrap(), Symbol::Epsilon);
    }

    #[test]
    fn state_ids_order_by_namespace_then_local() {
        let a = StateId::parse("L.p3").unwrap();
        let b = StateId::parse("R.q0").unwrap();
        let c = StateId::parse("r0").unwrap();
        assert!(c < a && a < b);
        assert_eq!(a.namespace(), ["L".to_string()]);
        assert_eq!(a.to_string(), "L.p3");
        assert!(StateId::parse("L..p").is_err());
    }

    #[test]
    fn fixtures_are_valid() {
        assert!(n1().validate().is_valid());
        assert!(n2().validate().is_valid());
    }

    #[test]
    fn initial_outside_states_is_reported() {
        let a = Automaton::from_parts(
            "X",
            BTreeSet::new(),
            set(&["s0"]),
            StateId::new("s9").unwrap(),
            Transitions::new(),
            StateSet::new(),
        );
        assert_eq!(a.validate().codes(), vec![ViolationCode::InitialNotInStates]);
    }

    #[test]
    fn letter_outside_alphabet_is_reported() {
        let mut transitions = Transitions::new();
        transitions.insert(
            (StateId::new("s0").unwrap(), Symbol::parse("c").unwrap()),
            set(&["s0"]),
        );
        let a = Automaton::from_parts(
            "X",
            [Letter::new("a").unwrap()].into(),
            set(&["s0"]),
            StateId::new("s0").unwrap(),
            transitions,
            StateSet::new(),
        );
        assert_eq!(a.validate().codes(), vec![ViolationCode::UnknownSymbol]);
    }

    #[test]
    fn builder_rejects_dangling_targets() {
        let err = Automaton::builder("X")
            .alphabet(["a"])
            .states(["s0"])
            .initial("s0")
            .transition("s0", "a", "s1")
            .build()
            .unwrap_err();
        match err {
            Error::Invalid(report) => assert_eq!(report.codes(), vec![ViolationCode::UnknownState]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn closure_without_epsilon_edges_is_identity() {
        assert_eq!(n1().epsilon_closure(&set(&["p0"])).unwrap(), set(&["p0"]));
    }

    #[test]
    fn closure_rejects_unknown_states() {
        assert!(matches!(
            n1().epsilon_closure(&set(&["zz"])),
            Err(Error::UnknownState(_))
        ));
    }

    #[test]
    fn step_follows_fixture_edges() {
        let a = Letter::new("a").unwrap();
        let b = Letter::new("b").unwrap();
        assert_eq!(n2().step(&set(&["q0"]), &a).unwrap(), set(&["q0", "q1"]));
        assert_eq!(n2().step(&set(&["q1"]), &a).unwrap(), StateSet::new());
        assert_eq!(n1().step(&set(&["p0"]), &b).unwrap(), set(&["p0", "p1"]));
        let c = Letter::new("c").unwrap();
        assert!(matches!(n1().step(&set(&["p0"]), &c), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn acceptance_examples() {
        assert!(n1().accepts(&word("abaabaa")).unwrap());
        assert!(n2().accepts(&word("a")).unwrap());
        assert!(!n1().accepts(&[]).unwrap());
        assert!(n1().accepts(&word("abc")).is_err());
    }

    #[test]
    fn witness_of_baa_on_n1() {
        let w = n1().witness(&word("baa")).unwrap().unwrap();
        assert_eq!(w.states, set(&["p0", "p1", "p2", "p3"]).into_iter().collect::<Vec<_>>());
        assert_eq!(
            w.symbols,
            word("baa").into_iter().map(Symbol::Letter).collect::<Vec<_>>()
        );
        assert!(w.is_valid_for(&n1(), &word("baa")));
    }

    #[test]
    fn no_witness_for_b_on_n2() {
        assert_eq!(n2().witness(&word("b")).unwrap(), None);
    }

    #[test]
    fn witness_loops_before_branching() {
        let w = n1().witness(&word("bbaa")).unwrap().unwrap();
        assert_eq!(w.states, ["p0", "p0", "p1", "p2", "p3"].map(|s| StateId::parse(s).unwrap()));
    }
}

//! Composition of devices: concatenation (`;`, ⊕) and parallelisation
//! (`|`, ⊗), plus elaboration of whole composition expressions.
//!
//! Both operators take a union of state sets and need the operands to be
//! disjoint. [`elaborate`] manufactures disjointness by prefixing every
//! operand with its position in the expression tree (`L`/`R` per level), so
//! the same device may appear at several leaves.

use std::collections::BTreeMap;
use std::fmt;

use crate::automaton::{is_name_token, is_state_token, Automaton, StateId, StateSet, Symbol, Transitions};
use crate::error::{Error, Result};

/// Local name of the fresh initial state added by [`parallel`].
pub const PARALLEL_ROOT: &str = "r0";

/// Path segment of the left operand of a binary node.
pub const LEFT: &str = "L";
/// Path segment of the right operand of a binary node.
pub const RIGHT: &str = "R";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CompositionExpr {
    Device(String),
    Concat(Box<CompositionExpr>, Box<CompositionExpr>),
    Parallel(Box<CompositionExpr>, Box<CompositionExpr>),
}

impl CompositionExpr {
    pub fn device(name: impl Into<String>) -> Self {
        CompositionExpr::Device(name.into())
    }

    pub fn concat(left: CompositionExpr, right: CompositionExpr) -> Self {
        CompositionExpr::Concat(Box::new(left), Box::new(right))
    }

    pub fn parallel(left: CompositionExpr, right: CompositionExpr) -> Self {
        CompositionExpr::Parallel(Box::new(left), Box::new(right))
    }

    /// Left fold with ⊕: `[a, b, c]` becomes `(a ; b) ; c`.
    pub fn concat_all<I: IntoIterator<Item = CompositionExpr>>(operands: I) -> Option<Self> {
        operands.into_iter().reduce(CompositionExpr::concat)
    }

    /// Left fold with ⊗.
    pub fn parallel_all<I: IntoIterator<Item = CompositionExpr>>(operands: I) -> Option<Self> {
        operands.into_iter().reduce(CompositionExpr::parallel)
    }

    /// Device names at the leaves, left to right, with repetitions.
    pub fn devices(&self) -> Vec<&str> {
        match self {
            CompositionExpr::Device(name) => vec![name.as_str()],
            CompositionExpr::Concat(l, r) | CompositionExpr::Parallel(l, r) => {
                let mut names = l.devices();
                names.extend(r.devices());
                names
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            CompositionExpr::Parallel(..) => 0,
            CompositionExpr::Concat(..) => 1,
            CompositionExpr::Device(_) => 2,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, parenthesize: bool) -> fmt::Result {
        if parenthesize {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Minimal parentheses: `;` binds tighter than `|`, both left-associative.
impl fmt::Display for CompositionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompositionExpr::Device(name) => f.write_str(name),
            CompositionExpr::Concat(l, r) | CompositionExpr::Parallel(l, r) => {
                let (level, op) = match self {
                    CompositionExpr::Concat(..) => (1, ";"),
                    _ => (0, "|"),
                };
                l.fmt_operand(f, l.precedence() < level)?;
                write!(f, " {op} ")?;
                r.fmt_operand(f, r.precedence() <= level)
            }
        }
    }
}

/// Named operands available to [`elaborate`].
#[derive(Clone, Debug, Default)]
pub struct DeviceEnvironment {
    bindings: BTreeMap<String, Automaton>,
}

impl DeviceEnvironment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `a` under its own name.
    pub fn bind(&mut self, a: Automaton) -> Result<()> {
        let name = a.name().to_string();
        self.bind_as(name, a)
    }

    pub fn bind_as(&mut self, name: impl Into<String>, a: Automaton) -> Result<()> {
        let name = name.into();
        if !is_name_token(&name) {
            return Err(Error::InvalidName(name));
        }
        a.ensure_valid()?;
        if self.bindings.contains_key(&name) {
            return Err(Error::DuplicateDevice(name));
        }
        self.bindings.insert(name, a);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Automaton> {
        self.bindings
            .get(name)
            .ok_or_else(|| Error::UnboundDevice(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl FromIterator<(String, Automaton)> for DeviceEnvironment {
    fn from_iter<T: IntoIterator<Item = (String, Automaton)>>(iter: T) -> Self {
        DeviceEnvironment {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Isomorphic copy of `a` with `segment` prepended to every namespace.
pub fn instantiate(a: &Automaton, segment: &str) -> Result<Automaton> {
    if !is_state_token(segment) {
        return Err(Error::InvalidName(segment.to_string()));
    }
    let rename = |q: &StateId| q.prefixed(segment);
    let transitions: Transitions = a
        .transitions()
        .iter()
        .map(|((from, x), targets)| ((rename(from), x.clone()), targets.iter().map(rename).collect()))
        .collect();
    Ok(Automaton::from_parts(
        a.name(),
        a.alphabet().clone(),
        a.states().iter().map(rename).collect(),
        rename(a.initial()),
        transitions,
        a.finals().iter().map(rename).collect(),
    ))
}

/// Instantiates under a whole path; the first segment ends up outermost.
fn instantiate_path(a: &Automaton, path: &[String]) -> Result<Automaton> {
    path.iter()
        .rev()
        .try_fold(a.clone(), |acc, segment| instantiate(&acc, segment))
}

fn ensure_disjoint(a: &Automaton, b: &Automaton) -> Result<()> {
    match a.states().intersection(b.states()).next() {
        Some(q) => Err(Error::NonDisjoint(q.clone())),
        None => Ok(()),
    }
}

/// `a ⊕ b`: runs `a`, then hands control to `b` through an ε-edge from every
/// final state of `a` to the initial state of `b`.
pub fn concat(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    ensure_disjoint(a, b)?;
    let (_, mut alphabet, mut states, initial, mut transitions, finals_a) = a.clone().into_parts();
    let (_, alphabet_b, states_b, initial_b, transitions_b, finals) = b.clone().into_parts();
    alphabet.extend(alphabet_b);
    states.extend(states_b);
    transitions.extend(transitions_b);
    for f in finals_a {
        // Existing ε-edges out of f stay; the bridge is added to them.
        transitions
            .entry((f, Symbol::Epsilon))
            .or_default()
            .insert(initial_b.clone());
    }
    Ok(Automaton::from_parts(
        format!("{};{}", a.name(), b.name()),
        alphabet,
        states,
        initial,
        transitions,
        finals,
    ))
}

/// `a ⊗ b`: a fresh initial state activates both operands by ε.
///
/// The fresh state is `r0` in the empty namespace, or `r0_1`, `r0_2`, ...
/// when that name is taken.
pub fn parallel(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    parallel_at(a, b, &[])
}

fn fresh_root(namespace: &[String], taken: impl Fn(&StateId) -> bool) -> StateId {
    let candidates = std::iter::once(PARALLEL_ROOT.to_string())
        .chain((1..).map(|n| format!("{PARALLEL_ROOT}_{n}")));
    candidates
        .map(|local| StateId::with_namespace(namespace.iter().cloned(), local).expect("valid segments"))
        .find(|q| !taken(q))
        .expect("unbounded candidates")
}

fn parallel_at(a: &Automaton, b: &Automaton, namespace: &[String]) -> Result<Automaton> {
    ensure_disjoint(a, b)?;
    let root = fresh_root(namespace, |q| a.states().contains(q) || b.states().contains(q));
    let (_, mut alphabet, mut states, initial_a, mut transitions, mut finals) = a.clone().into_parts();
    let (_, alphabet_b, states_b, initial_b, transitions_b, finals_b) = b.clone().into_parts();
    alphabet.extend(alphabet_b);
    states.extend(states_b);
    states.insert(root.clone());
    transitions.extend(transitions_b);
    transitions.insert(
        (root.clone(), Symbol::Epsilon),
        StateSet::from([initial_a, initial_b]),
    );
    finals.extend(finals_b);
    Ok(Automaton::from_parts(
        format!("{}|{}", a.name(), b.name()),
        alphabet,
        states,
        root,
        transitions,
        finals,
    ))
}

/// What sits at a position of an elaborated expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Device(String),
    Concat,
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeInfo {
    pub kind: NodeKind,
    /// The subexpression rooted here, as text.
    pub label: String,
}

/// Maps each position path of an expression to what was placed there.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    nodes: BTreeMap<Vec<String>, NodeInfo>,
}

impl Provenance {
    pub fn node(&self, path: &[String]) -> Option<&NodeInfo> {
        self.nodes.get(path)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Vec<String>, &NodeInfo)> {
        self.nodes.iter()
    }

    /// Paths of the device leaves, in left-to-right order.
    pub fn leaves(&self) -> impl Iterator<Item = (&Vec<String>, &str)> {
        self.nodes.iter().filter_map(|(path, info)| match &info.kind {
            NodeKind::Device(name) => Some((path, name.as_str())),
            _ => None,
        })
    }

    /// The deepest expression position whose path prefixes the state's
    /// namespace: the device leaf it was instantiated from, or the parallel
    /// node that created it.
    pub fn owner<'q>(&self, q: &'q StateId) -> &'q [String] {
        let ns = q.namespace();
        (0..=ns.len())
            .rev()
            .map(|n| &ns[..n])
            .find(|prefix| self.nodes.contains_key(*prefix))
            .unwrap_or(&[])
    }
}

/// An elaborated composite with the provenance of its states.
#[derive(Clone, Debug)]
pub struct Elaborated {
    pub automaton: Automaton,
    pub provenance: Provenance,
}

/// Builds the automaton denoted by `e`. Each leaf is instantiated under its
/// position path (empty at the root, then `L`/`R` per level).
pub fn elaborate(e: &CompositionExpr, env: &DeviceEnvironment) -> Result<Automaton> {
    elaborate_with_provenance(e, env).map(|el| el.automaton)
}

pub fn elaborate_with_provenance(e: &CompositionExpr, env: &DeviceEnvironment) -> Result<Elaborated> {
    if let Some(missing) = e.devices().into_iter().find(|d| env.get(d).is_err()) {
        return Err(Error::UnboundDevice(missing.to_string()));
    }
    let mut provenance = Provenance::default();
    let mut path = Vec::new();
    let automaton = elaborate_at(e, env, &mut path, &mut provenance)?;
    let automaton = automaton.renamed(e.to_string().replace(' ', ""));
    Ok(Elaborated {
        automaton,
        provenance,
    })
}

fn elaborate_at(
    e: &CompositionExpr,
    env: &DeviceEnvironment,
    path: &mut Vec<String>,
    provenance: &mut Provenance,
) -> Result<Automaton> {
    let kind = match e {
        CompositionExpr::Device(name) => NodeKind::Device(name.clone()),
        CompositionExpr::Concat(..) => NodeKind::Concat,
        CompositionExpr::Parallel(..) => NodeKind::Parallel,
    };
    provenance.nodes.insert(
        path.clone(),
        NodeInfo {
            kind,
            label: e.to_string(),
        },
    );
    match e {
        CompositionExpr::Device(name) => instantiate_path(env.get(name)?, path),
        CompositionExpr::Concat(l, r) | CompositionExpr::Parallel(l, r) => {
            path.push(LEFT.to_string());
            let left = elaborate_at(l, env, path, provenance);
            path.pop();
            path.push(RIGHT.to_string());
            let right = elaborate_at(r, env, path, provenance);
            path.pop();
            let (left, right) = (left?, right?);
            match e {
                CompositionExpr::Concat(..) => concat(&left, &right),
                _ => parallel_at(&left, &right, path),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Letter;
    use crate::fixtures::{environment, n1, n2};

    fn word(text: &str) -> Vec<Letter> {
        Letter::chars(text).unwrap()
    }

    fn q(dotted: &str) -> StateId {
        StateId::parse(dotted).unwrap()
    }

    fn dev(name: &str) -> CompositionExpr {
        CompositionExpr::device(name)
    }

    #[test]
    fn instantiate_prefixes_namespaces() {
        let l = instantiate(&n1(), "L").unwrap();
        let names: Vec<String> = l.states().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["L.p0", "L.p1", "L.p2", "L.p3"]);
        assert!(l.accepts(&word("abaabaa")).unwrap());
        let twice = instantiate(&instantiate(&n1(), "A").unwrap(), "B").unwrap();
        assert_eq!(twice.initial(), &q("B.A.p0"));
        assert!(instantiate(&n1(), "a.b").is_err());
        assert!(instantiate(&n1(), "").is_err());
    }

    #[test]
    fn concat_composite_structure() {
        let a = instantiate(&n1(), "L").unwrap();
        let b = instantiate(&n2(), "R").unwrap();
        let c = concat(&a, &b).unwrap();
        assert_eq!(c.states().len(), 6);
        assert_eq!(c.initial(), &q("L.p0"));
        assert_eq!(c.finals(), &StateSet::from([q("R.q1")]));
        assert_eq!(c.edge_count(), a.edge_count() + b.edge_count() + 1);
        let bridge: Vec<_> = c.edges().filter(|(_, x, _)| x.is_epsilon()).collect();
        assert_eq!(bridge, vec![(&q("L.p3"), &Symbol::Epsilon, &q("R.q0"))]);
        assert!(c.accepts(&word("aabaaaab")).unwrap());
        assert_eq!(c.epsilon_closure([&q("L.p3")]).unwrap(), StateSet::from([q("L.p3"), q("R.q0")]));
    }

    #[test]
    fn concat_requires_disjoint_operands() {
        assert!(matches!(concat(&n1(), &n1()), Err(Error::NonDisjoint(_))));
        assert!(matches!(parallel(&n2(), &n2()), Err(Error::NonDisjoint(_))));
    }

    #[test]
    fn concat_without_left_finals_is_empty() {
        let dead = Automaton::builder("D")
            .alphabet(["a"])
            .states(["d0"])
            .initial("d0")
            .transition("d0", "a", "d0")
            .build()
            .unwrap();
        let c = concat(&dead, &n2()).unwrap();
        assert!(!c.edges().any(|(_, x, _)| x.is_epsilon()));
        for w in ["", "a", "aa", "ab", "aab"] {
            assert!(!c.accepts(&word(w)).unwrap());
        }
    }

    #[test]
    fn concat_keeps_existing_epsilon_edges_of_finals() {
        let a = Automaton::builder("A")
            .alphabet(["a"])
            .states(["x0", "x1"])
            .initial("x0")
            .finals(["x0"])
            .transition("x0", "eps", "x1")
            .build()
            .unwrap();
        let c = concat(&a, &instantiate(&n2(), "R").unwrap()).unwrap();
        let targets: StateSet = c.successors(&q("x0"), &Symbol::Epsilon).cloned().collect();
        assert_eq!(targets, StateSet::from([q("x1"), q("R.q0")]));
    }

    #[test]
    fn parallel_composite_structure() {
        let a = instantiate(&n1(), "L").unwrap();
        let b = instantiate(&n2(), "R").unwrap();
        let p = parallel(&a, &b).unwrap();
        assert_eq!(p.states().len(), 7);
        assert_eq!(p.initial(), &q("r0"));
        assert_eq!(p.finals(), &StateSet::from([q("L.p3"), q("R.q1")]));
        let root: StateSet = p.successors(&q("r0"), &Symbol::Epsilon).cloned().collect();
        assert_eq!(root, StateSet::from([q("L.p0"), q("R.q0")]));
        assert!(!p.accepts(&word("aabaaaab")).unwrap());
        assert!(p.accepts(&word("a")).unwrap());
    }

    #[test]
    fn parallel_avoids_root_collisions() {
        let taken = Automaton::builder("T")
            .alphabet(["a"])
            .states(["r0"])
            .initial("r0")
            .finals(["r0"])
            .build()
            .unwrap();
        let p = parallel(&taken, &instantiate(&n2(), "R").unwrap()).unwrap();
        assert_eq!(p.initial(), &q("r0_1"));
        assert_eq!(p.states().len(), 4);
    }

    #[test]
    fn elaborate_leaf_is_the_device() {
        let env = environment();
        let a = elaborate(&dev("N1"), &env).unwrap();
        assert_eq!(a, n1());
    }

    #[test]
    fn elaborate_concat_unfolds_to_instantiated_operands() {
        let env = environment();
        let e = elaborate(&CompositionExpr::concat(dev("N1"), dev("N2")), &env).unwrap();
        let manual = concat(
            &instantiate(&n1(), "L").unwrap(),
            &instantiate(&n2(), "R").unwrap(),
        )
        .unwrap();
        assert_eq!(e.states(), manual.states());
        assert_eq!(e.transitions(), manual.transitions());
        assert_eq!(e.name(), "N1;N2");
    }

    #[test]
    fn elaborate_nested_counts_states() {
        let env = environment();
        let e = CompositionExpr::parallel(CompositionExpr::concat(dev("N1"), dev("N2")), dev("N1"));
        let el = elaborate_with_provenance(&e, &env).unwrap();
        assert_eq!(el.automaton.states().len(), 11);
        assert!(el.automaton.validate().is_valid());
        assert_eq!(el.automaton.initial(), &q("r0"));
        assert_eq!(el.provenance.owner(&q("L.R.q0")), ["L".to_string(), "R".to_string()]);
        assert_eq!(el.provenance.owner(&q("r0")), [] as [String; 0]);
        let leaves: Vec<&str> = el.provenance.leaves().map(|(_, n)| n).collect();
        assert_eq!(leaves, ["N1", "N2", "N1"]);
    }

    #[test]
    fn elaborate_self_composition_is_collision_free() {
        let env = environment();
        let e = CompositionExpr::concat(dev("N1"), dev("N1"));
        let a = elaborate(&e, &env).unwrap();
        assert_eq!(a.states().len(), 8);
        assert!(a.accepts(&word("baabaa")).unwrap());
        assert!(!a.accepts(&word("baa")).unwrap());
    }

    #[test]
    fn elaborate_reports_unbound_devices() {
        let env = environment();
        let e = CompositionExpr::concat(dev("N1"), dev("N9"));
        assert_eq!(elaborate(&e, &env).unwrap_err(), Error::UnboundDevice("N9".into()));
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        let e = CompositionExpr::parallel(CompositionExpr::concat(dev("N1"), dev("N2")), dev("N1"));
        assert_eq!(e.to_string(), "N1 ; N2 | N1");
        let e = CompositionExpr::concat(dev("A"), CompositionExpr::concat(dev("B"), dev("C")));
        assert_eq!(e.to_string(), "A ; (B ; C)");
        let e = CompositionExpr::concat(CompositionExpr::parallel(dev("A"), dev("B")), dev("C"));
        assert_eq!(e.to_string(), "(A | B) ; C");
        let folded = CompositionExpr::concat_all([dev("A"), dev("B"), dev("C")]).unwrap();
        assert_eq!(folded.to_string(), "A ; B ; C");
    }

    #[test]
    fn environment_rejects_duplicates() {
        let mut env = environment();
        assert_eq!(env.bind(n1()).unwrap_err(), Error::DuplicateDevice("N1".into()));
        assert!(env.bind_as("bad name", n1()).is_err());
    }
}

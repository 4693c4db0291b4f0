//! Device-level view of a run on a composite: which device is active, where
//! control passes between devices over ε-edges, and how the input is
//! split (`;`) or replicated (`|`) among the operands.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{elaborate_with_provenance, CompositionExpr, DeviceEnvironment, NodeKind, Provenance};
use crate::automaton::{Automaton, Letter, StateId, Symbol, Word};
use crate::error::{Error, Result};
use crate::textio::render_word;

/// A position in a composition expression together with what sits there:
/// a device name for leaves, the subexpression text otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DevicePath {
    pub path: Vec<String>,
    pub name: String,
}

impl DevicePath {
    fn at(provenance: &Provenance, path: &[String]) -> Self {
        let name = match provenance.node(path) {
            Some(info) => match &info.kind {
                NodeKind::Device(name) => name.clone(),
                _ => format!("({})", info.label),
            },
            None => String::new(),
        };
        DevicePath {
            path: path.to_vec(),
            name,
        }
    }

    /// Dot-joined path; empty for the root.
    pub fn path_text(&self) -> String {
        self.path.join(".")
    }
}

impl fmt::Display for DevicePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}@root", self.name)
        } else {
            write!(f, "{}@{}", self.name, self.path_text())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Activate {
        device: DevicePath,
    },
    /// A move inside one device; `symbol` is ε only for the device's own
    /// ε-edges.
    Step {
        device: DevicePath,
        from: StateId,
        symbol: Symbol,
        to: StateId,
    },
    /// An ε-edge leaving one device for another.
    Handoff {
        from_device: DevicePath,
        to_device: DevicePath,
        from: StateId,
        to: StateId,
    },
    Verdict {
        device: DevicePath,
        accepted: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlTrace {
    pub events: Vec<TraceEvent>,
    pub overall: bool,
    pub input: Word,
}

impl ControlTrace {
    pub fn handoffs(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events
            .iter()
            .filter(|e| matches!(e, TraceEvent::Handoff { .. }))
    }

    /// Letters read by step events, in order.
    pub fn consumed(&self) -> Word {
        self.events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::Step { symbol, .. } => symbol.letter().cloned(),
                _ => None,
            })
            .collect()
    }

    /// The state sequence walked by step and handoff events, or just
    /// `initial` when the run makes no moves.
    pub fn walked_states(&self, initial: &StateId) -> Vec<StateId> {
        let mut states = vec![initial.clone()];
        for e in &self.events {
            if let TraceEvent::Step { to, .. } | TraceEvent::Handoff { to, .. } = e {
                states.push(to.clone());
            }
        }
        states
    }

    pub fn to_json(&self, alphabet: &BTreeSet<Letter>) -> Value {
        let events: Vec<Value> = self
            .events
            .iter()
            .map(|e| match e {
                TraceEvent::Activate { device } => json!({
                    "kind": "activate",
                    "device": device.name,
                    "path": device.path_text(),
                }),
                TraceEvent::Step { device, from, symbol, to } => json!({
                    "kind": "step",
                    "device": device.name,
                    "path": device.path_text(),
                    "from": from.to_string(),
                    "letter": symbol.to_string(),
                    "to": to.to_string(),
                }),
                TraceEvent::Handoff { from_device, to_device, from, to } => json!({
                    "kind": "handoff",
                    "device": from_device.name,
                    "path": from_device.path_text(),
                    "to_device": to_device.name,
                    "to_path": to_device.path_text(),
                    "from": from.to_string(),
                    "letter": Symbol::Epsilon.to_string(),
                    "to": to.to_string(),
                }),
                TraceEvent::Verdict { device, accepted } => json!({
                    "kind": "verdict",
                    "device": device.name,
                    "path": device.path_text(),
                    "accepted": accepted,
                }),
            })
            .collect();
        json!({
            "input": render_word(&self.input, alphabet),
            "overall": self.overall,
            "events": events,
        })
    }

    pub fn render_text(&self, alphabet: &BTreeSet<Letter>) -> String {
        let mut out = format!("input {}\n", render_word(&self.input, alphabet));
        for e in &self.events {
            let line = match e {
                TraceEvent::Activate { device } => format!("activate {device}"),
                TraceEvent::Step { device, from, symbol, to } => {
                    format!("step     {device}: {from} --{symbol}--> {to}")
                }
                TraceEvent::Handoff { from_device, to_device, from, to } => {
                    format!("handoff  {from_device} -> {to_device} via {from} --eps--> {to}")
                }
                TraceEvent::Verdict { device, accepted } => {
                    format!("verdict  {device}: {}", if *accepted { "accept" } else { "reject" })
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(if self.overall { "overall accept\n" } else { "overall reject\n" });
        out
    }
}

/// Replays the canonical accepting run of the elaborated `e` on `input` as
/// device-level events. A rejected input yields only verdicts: one per
/// operand that received the whole input, following `|` nodes down from the
/// root.
pub fn control_trace(e: &CompositionExpr, env: &DeviceEnvironment, input: &[Letter]) -> Result<ControlTrace> {
    let elaborated = elaborate_with_provenance(e, env)?;
    let (a, provenance) = (&elaborated.automaton, &elaborated.provenance);
    let Some(run) = a.witness(input)? else {
        let mut events = Vec::new();
        rejection_verdicts(e, &mut Vec::new(), provenance, &mut events);
        return Ok(ControlTrace {
            events,
            overall: false,
            input: input.to_vec(),
        });
    };

    let owner = |q: &StateId| DevicePath::at(provenance, provenance.owner(q));
    let mut events = Vec::new();
    let mut active = HashSet::new();
    let first = owner(&run.states[0]);
    active.insert(first.clone());
    events.push(TraceEvent::Activate { device: first });

    for (pair, symbol) in run.states.windows(2).zip(&run.symbols) {
        let (from, to) = (&pair[0], &pair[1]);
        let (source, target) = (owner(from), owner(to));
        if source == target {
            events.push(TraceEvent::Step {
                device: source,
                from: from.clone(),
                symbol: symbol.clone(),
                to: to.clone(),
            });
            continue;
        }
        if finishes_device(provenance, env, &source, from) {
            events.push(TraceEvent::Verdict {
                device: source.clone(),
                accepted: true,
            });
        }
        events.push(TraceEvent::Handoff {
            from_device: source,
            to_device: target.clone(),
            from: from.clone(),
            to: to.clone(),
        });
        if active.insert(target.clone()) {
            events.push(TraceEvent::Activate { device: target });
        }
    }
    let last = run.states.last().expect("runs are nonempty");
    events.push(TraceEvent::Verdict {
        device: owner(last),
        accepted: true,
    });
    Ok(ControlTrace {
        events,
        overall: true,
        input: input.to_vec(),
    })
}

/// Whether `q`, a state of the leaf at `device`, is final in that leaf.
fn finishes_device(provenance: &Provenance, env: &DeviceEnvironment, device: &DevicePath, q: &StateId) -> bool {
    let Some(NodeKind::Device(name)) = provenance.node(&device.path).map(|n| &n.kind) else {
        return false;
    };
    let Ok(leaf) = env.get(name) else {
        return false;
    };
    let inner = &q.namespace()[device.path.len()..];
    StateId::with_namespace(inner.iter().cloned(), q.local())
        .map(|original| leaf.is_final(&original))
        .unwrap_or(false)
}

fn rejection_verdicts(
    e: &CompositionExpr,
    path: &mut Vec<String>,
    provenance: &Provenance,
    events: &mut Vec<TraceEvent>,
) {
    match e {
        CompositionExpr::Parallel(l, r) => {
            for (segment, child) in [(crate::algebra::LEFT, l), (crate::algebra::RIGHT, r)] {
                path.push(segment.to_string());
                rejection_verdicts(child, path, provenance, events);
                path.pop();
            }
        }
        _ => events.push(TraceEvent::Verdict {
            device: DevicePath::at(provenance, path),
            accepted: false,
        }),
    }
}

fn union_alphabet(a: &Automaton, b: &Automaton, input: &[Letter]) -> Result<()> {
    match input
        .iter()
        .find(|x| !a.alphabet().contains(*x) && !b.alphabet().contains(*x))
    {
        Some(x) => Err(Error::UnknownSymbol(x.to_string())),
        None => Ok(()),
    }
}

/// Membership where letters outside `a`'s alphabet simply reject.
fn member(a: &Automaton, w: &[Letter]) -> Result<bool> {
    if w.iter().any(|x| !a.alphabet().contains(x)) {
        return Ok(false);
    }
    a.accepts(w)
}

/// Every `i` with `input[..i]` in `L(a)` and `input[i..]` in `L(b)`, by
/// direct membership tests on the two operands.
pub fn splits(a: &Automaton, b: &Automaton, input: &[Letter]) -> Result<BTreeSet<usize>> {
    union_alphabet(a, b, input)?;
    let mut found = BTreeSet::new();
    for i in 0..=input.len() {
        if member(a, &input[..i])? && member(b, &input[i..])? {
            found.insert(i);
        }
    }
    Ok(found)
}

/// Each operand run on its own copy of the whole input.
pub fn parallel_verdicts(a: &Automaton, b: &Automaton, input: &[Letter]) -> Result<(bool, bool)> {
    union_alphabet(a, b, input)?;
    Ok((member(a, input)?, member(b, input)?))
}

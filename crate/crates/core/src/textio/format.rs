//! The line-based automaton file format.
//!
//! ```text
//! name N2
//! alphabet a b
//! states q0 q1
//! initial q0
//! final q1
//! trans q0 a q0
//! trans q0 a q1
//! trans q1 b q1
//! ```
//!
//! `#` starts a comment. `name` comes first; `alphabet`, `states`,
//! `initial` and `final` appear at most once; `final` may be omitted or
//! list nothing. `eps` in a `trans` line is an ε-edge.

use std::collections::{BTreeSet, HashMap};

use super::ParseDiagnostic;
use crate::automaton::{Automaton, Letter, StateId, StateSet, Symbol, Transitions, EPSILON_TOKEN};
use crate::error::{Error, Result};

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or_default();
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (column, (offset, c)) in content.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((offset, column + 1)),
            (true, Some((begin, col))) => {
                tokens.push(Token {
                    text: &content[begin..offset],
                    pos: Pos { line: line_no, column: col },
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((begin, col)) = start {
        tokens.push(Token {
            text: &content[begin..],
            pos: Pos { line: line_no, column: col },
        });
    }
    tokens
}

#[derive(Default)]
struct Parsed<'a> {
    name: Option<String>,
    alphabet: Option<BTreeSet<Letter>>,
    states: Option<HashMap<StateId, Pos>>,
    state_order: Vec<StateId>,
    initial: Option<(StateId, Pos)>,
    finals: Option<Vec<(StateId, Pos)>>,
    transitions: Vec<(StateId, Pos, Symbol, Pos, StateId, Pos)>,
    diagnostics: Vec<ParseDiagnostic>,
    seen: HashMap<&'a str, usize>,
}

impl Parsed<'_> {
    fn report(&mut self, pos: Pos, code: &'static str, message: impl Into<String>) {
        self.diagnostics
            .push(ParseDiagnostic::new(pos.line, pos.column, code, message));
    }

    fn state(&mut self, token: &Token<'_>) -> Option<StateId> {
        match StateId::parse(token.text) {
            Ok(q) => Some(q),
            Err(_) => {
                self.report(token.pos, "invalid-token", format!("`{}` is not a valid state name", token.text));
                None
            }
        }
    }
}

/// Parses an automaton file. On failure every diagnostic found is returned
/// inside [`Error::Parse`].
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut p = Parsed::default();
    let mut last_line = 1;
    let mut first_content = true;

    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        last_line = line_no;
        let tokens = tokenize(line_no, line);
        let Some((keyword, args)) = tokens.split_first() else {
            continue;
        };
        if first_content && keyword.text != "name" {
            p.report(keyword.pos, "missing-name", "the first line must be `name <ident>`");
        }
        first_content = false;

        let known = matches!(keyword.text, "name" | "alphabet" | "states" | "initial" | "final");
        if known {
            if let Some(previous) = p.seen.insert(keyword.text, line_no) {
                p.report(
                    keyword.pos,
                    "duplicate-section",
                    format!("`{}` already given on line {previous}", keyword.text),
                );
                continue;
            }
        }

        match keyword.text {
            "name" => match args {
                [name] => p.name = Some(name.text.to_string()),
                _ => p.report(keyword.pos, "malformed-line", "expected `name <ident>`"),
            },
            "alphabet" => {
                let mut letters = BTreeSet::new();
                for t in args {
                    if t.text == EPSILON_TOKEN {
                        p.report(t.pos, "reserved-letter", "`eps` is implicit in every alphabet");
                    } else {
                        match Letter::new(t.text) {
                            Ok(l) if letters.contains(&l) => {
                                p.report(t.pos, "duplicate-letter", format!("letter `{}` listed twice", t.text))
                            }
                            Ok(l) => {
                                letters.insert(l);
                            }
                            Err(_) => p.report(t.pos, "invalid-token", format!("`{}` is not a valid letter", t.text)),
                        }
                    }
                }
                p.alphabet = Some(letters);
            }
            "states" => {
                let mut states = HashMap::new();
                for t in args {
                    if let Some(q) = p.state(t) {
                        if let std::collections::hash_map::Entry::Vacant(slot) = states.entry(q.clone()) {
                            slot.insert(t.pos);
                            p.state_order.push(q);
                        } else {
                            p.report(t.pos, "duplicate-state", format!("state `{q}` declared twice"));
                        }
                    }
                }
                p.states = Some(states);
            }
            "initial" => match args {
                [t] => {
                    if let Some(q) = p.state(t) {
                        p.initial = Some((q, t.pos));
                    }
                }
                _ => p.report(keyword.pos, "malformed-line", "expected `initial <state>`"),
            },
            "final" => {
                let finals = args.iter().filter_map(|t| p.state(t).map(|q| (q, t.pos))).collect();
                p.finals = Some(finals);
            }
            "trans" => match args {
                [from, symbol, to] => {
                    let symbol_parsed = Symbol::parse(symbol.text);
                    let (Some(f), Some(t)) = (p.state(from), p.state(to)) else {
                        continue;
                    };
                    match symbol_parsed {
                        Ok(x) => p.transitions.push((f, from.pos, x, symbol.pos, t, to.pos)),
                        Err(_) => p.report(symbol.pos, "invalid-token", format!("`{}` is not a valid letter", symbol.text)),
                    }
                }
                _ => p.report(keyword.pos, "malformed-line", "expected `trans <from> <letter|eps> <to>`"),
            },
            other => p.report(keyword.pos, "malformed-line", format!("unknown keyword `{other}`")),
        }
    }

    let end = Pos { line: last_line, column: 1 };
    if p.name.is_none() && !p.diagnostics.iter().any(|d| d.code == "missing-name") {
        p.report(end, "missing-name", "no `name` line");
    }
    if p.initial.is_none() && !p.seen.contains_key("initial") {
        p.report(end, "missing-initial", "no `initial` line");
    }
    if p.alphabet.is_none() {
        p.report(end, "missing-section", "no `alphabet` line");
    }
    if p.states.is_none() {
        p.report(end, "missing-section", "no `states` line");
    }

    let alphabet = p.alphabet.take().unwrap_or_default();
    let declared = p.states.take().unwrap_or_default();
    let unknown_state = |p: &mut Parsed<'_>, q: &StateId, pos: Pos| {
        if !declared.contains_key(q) {
            p.report(pos, "unknown-state", format!("state `{q}` is not declared"));
        }
    };
    if let Some((q, pos)) = p.initial.clone() {
        unknown_state(&mut p, &q, pos);
    }
    for (q, pos) in p.finals.clone().unwrap_or_default() {
        unknown_state(&mut p, &q, pos);
    }
    let mut transitions = Transitions::new();
    for (from, from_pos, x, x_pos, to, to_pos) in std::mem::take(&mut p.transitions) {
        unknown_state(&mut p, &from, from_pos);
        unknown_state(&mut p, &to, to_pos);
        if let Symbol::Letter(l) = &x {
            if !alphabet.contains(l) {
                p.report(x_pos, "unknown-symbol", format!("letter `{l}` is not in the alphabet"));
            }
        }
        transitions.entry((from, x)).or_default().insert(to);
    }

    if !p.diagnostics.is_empty() {
        p.diagnostics.sort_by_key(|d| (d.line, d.column));
        return Err(Error::Parse(p.diagnostics));
    }
    let (initial, _) = p.initial.expect("checked above");
    let a = Automaton::from_parts(
        p.name.expect("checked above"),
        alphabet,
        p.state_order.into_iter().collect(),
        initial,
        transitions,
        p.finals.unwrap_or_default().into_iter().map(|(q, _)| q).collect::<StateSet>(),
    );
    debug_assert!(a.validate().is_valid());
    Ok(a)
}

/// Canonical text: sections in a fixed order, everything sorted.
pub fn render_automaton(a: &Automaton) -> String {
    fn line<T: ToString>(keyword: &str, items: impl IntoIterator<Item = T>) -> String {
        let mut out = keyword.to_string();
        for item in items {
            out.push(' ');
            out.push_str(&item.to_string());
        }
        out.push('\n');
        out
    }
    let mut out = String::new();
    out.push_str(&line("name", [a.name()]));
    out.push_str(&line("alphabet", a.alphabet()));
    out.push_str(&line("states", a.states()));
    out.push_str(&line("initial", [a.initial()]));
    out.push_str(&line("final", a.finals()));
    for (from, x, to) in a.edges() {
        out.push_str(&format!("trans {from} {x} {to}\n"));
    }
    out
}

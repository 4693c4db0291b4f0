//! The two example devices shipped in `fixtures/`: `N1` accepts words over
//! `{a, b}` whose third letter from the right is `b`; `N2` accepts `a^m b^n`
//! with `m > 0`.

use crate::algebra::DeviceEnvironment;
use crate::automaton::Automaton;
use crate::textio::parse_automaton;

pub const N1_SOURCE: &str = include_str!("../fixtures/N1.nfa");
pub const N2_SOURCE: &str = include_str!("../fixtures/N2.nfa");

pub fn n1() -> Automaton {
    parse_automaton(N1_SOURCE).expect("bundled N1 parses")
}

pub fn n2() -> Automaton {
    parse_automaton(N2_SOURCE).expect("bundled N2 parses")
}

/// `N1` and `N2` bound under their own names.
pub fn environment() -> DeviceEnvironment {
    [n1(), n2()]
        .into_iter()
        .map(|a| (a.name().to_string(), a))
        .collect()
}

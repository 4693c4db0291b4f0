mod common;

use common::automaton;
use mhc::algebra::{elaborate, CompositionExpr, DeviceEnvironment};
use mhc::fixtures::{n1, n2, N1_SOURCE};
use mhc::textio::{parse_automaton, parse_expression, render_automaton, render_expression};
use proptest::prelude::*;

fn expr_tree() -> impl Strategy<Value = CompositionExpr> {
    let leaf = prop_oneof![Just("A"), Just("B"), Just("dev_2")].prop_map(CompositionExpr::device);
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| CompositionExpr::concat(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| CompositionExpr::parallel(l, r)),
        ]
    })
}

#[test]
fn fixtures_round_trip() {
    for a in [n1(), n2()] {
        let text = render_automaton(&a);
        let back = parse_automaton(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(render_automaton(&back), text);
    }
}

#[test]
fn fixture_source_parses_to_its_canonical_form() {
    let a = parse_automaton(N1_SOURCE).unwrap();
    let canonical = render_automaton(&a);
    assert_ne!(canonical, N1_SOURCE);
    assert_eq!(parse_automaton(&canonical).unwrap(), a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn automata_round_trip(a in automaton("A")) {
        let text = render_automaton(&a);
        let back = parse_automaton(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(render_automaton(&back), text);
    }

    #[test]
    fn composites_round_trip(
        e in expr_tree(), a in automaton("A"), b in automaton("B"), c in automaton("dev_2"),
    ) {
        let env: DeviceEnvironment = [a, b, c].into_iter().map(|x| (x.name().to_string(), x)).collect();
        let composite = elaborate(&e, &env).unwrap();
        let text = render_automaton(&composite);
        let back = parse_automaton(&text).unwrap();
        prop_assert_eq!(&back, &composite);
        prop_assert_eq!(render_automaton(&back), text);
    }

    #[test]
    fn expressions_round_trip(e in expr_tree()) {
        let text = render_expression(&e);
        let back = parse_expression(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(render_expression(&back), text.clone());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(parse_expression(&compact).unwrap(), e);
    }
}

mod common;

use common::{ab_automaton, automaton, brute_accepts, words};
use mhc::analysis::{determinize, enumerate_language, equivalent};
use mhc::Automaton;
use proptest::prelude::*;

fn letters(a: &Automaton) -> Vec<&str> {
    a.alphabet().iter().map(|l| l.as_str()).collect()
}

fn shortlex_less(x: &[mhc::Letter], y: &[mhc::Letter]) -> bool {
    (x.len(), x) < (y.len(), y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinization_preserves_language(a in automaton("A")) {
        let dfa = determinize(&a).unwrap();
        prop_assert!(dfa.len() <= 1 << a.states().len());
        for w in words(&letters(&a), 6) {
            prop_assert_eq!(dfa.accepts(&w).unwrap(), a.accepts(&w).unwrap(), "word {:?}", w);
        }
        let back = dfa.to_automaton("D");
        prop_assert!(back.validate().is_valid());
        for w in words(&letters(&a), 5) {
            prop_assert_eq!(back.accepts(&w).unwrap(), a.accepts(&w).unwrap());
        }
    }

    #[test]
    fn equivalence_agrees_with_bounded_enumeration(a in ab_automaton("A"), b in ab_automaton("B")) {
        let verdict = equivalent(&a, &b).unwrap();
        let da = determinize(&a).unwrap().len();
        let db = determinize(&b).unwrap().len();
        // Two DFAs that differ do so on some word shorter than the size of
        // their product.
        let bound = (da * db).min(10);
        let agree = enumerate_language(&a, bound).unwrap() == enumerate_language(&b, bound).unwrap();
        if da * db <= 10 {
            prop_assert_eq!(verdict.equivalent, agree);
        } else if !agree {
            prop_assert!(!verdict.equivalent);
        }
        prop_assert_eq!(verdict.equivalent, verdict.counterexample.is_none());
        if let Some(w) = verdict.counterexample {
            prop_assert_ne!(a.accepts(&w).unwrap(), b.accepts(&w).unwrap());
            prop_assert_ne!(brute_accepts(&a, &w), brute_accepts(&b, &w));
            for shorter in words(&["a", "b"], w.len()) {
                if shortlex_less(&shorter, &w) {
                    prop_assert_eq!(a.accepts(&shorter).unwrap(), b.accepts(&shorter).unwrap(),
                        "{:?} precedes counterexample {:?}", shorter, w);
                }
            }
        }
    }

    #[test]
    fn enumeration_is_strict_shortlex_and_sound(a in automaton("A")) {
        let listed = enumerate_language(&a, 5).unwrap();
        for pair in listed.windows(2) {
            prop_assert!(shortlex_less(&pair[0], &pair[1]));
        }
        let expected: Vec<_> = words(&letters(&a), 5).into_iter().filter(|w| brute_accepts(&a, w)).collect();
        prop_assert_eq!(listed, expected);
    }

    #[test]
    fn every_automaton_is_equivalent_to_itself_and_its_dfa(a in automaton("A")) {
        prop_assert!(equivalent(&a, &a).unwrap().equivalent);
        let back = determinize(&a).unwrap().to_automaton("D");
        prop_assert!(equivalent(&a, &back).unwrap().equivalent);
    }
}

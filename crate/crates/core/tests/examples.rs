mod common;

use common::zoo_models;
use osl_core::semantics::{find_countermodel, DEFAULT_ASSIGNMENT_CAP};
use osl_core::{decide, implies, logically_equivalent, prove, semantics::default_models, Prop, SearchConfig, Sequent};

fn seq(s: &str) -> Sequent {
    Sequent::parse(s).unwrap()
}

fn prop(s: &str) -> Prop {
    Prop::parse(s).unwrap()
}

#[test]
fn small_valid_sequents_hold_everywhere() {
    for m in zoo_models() {
        for s in ["a |- a, a", "|- a | ~a", "a, ~a |-", "a & b |- b"] {
            assert!(
                m.valid(&seq(s), DEFAULT_ASSIGNMENT_CAP).unwrap().is_none(),
                "{s} in {}",
                m.label()
            );
        }
    }
}

#[test]
fn contradictions_evaluate_to_zero() {
    // Z lies in every flat, so `p & ~p ⊆ Z` pins the value to Z.
    let contradiction = seq("p & ~p |-");
    for m in zoo_models() {
        for f in m.family() {
            let v = [("p".into(), f)].into_iter().collect();
            assert!(m.holds(&v, &contradiction).unwrap(), "{}", m.label());
        }
    }
}

#[test]
fn no_countermodel_for_negated_pair() {
    let found = find_countermodel(&seq("a, ~a |-"), &default_models(), DEFAULT_ASSIGNMENT_CAP).unwrap();
    assert!(found.witness.is_none());
    assert!(found.skipped.is_empty());
}

#[test]
fn conjunction_then_negation_is_proved() {
    let cfg = SearchConfig::default();
    assert!(prove(&seq("q & p, ~p |-"), &cfg).unwrap().is_proved());
    assert!(decide(&seq("p |- p"), &cfg, &default_models()).unwrap().is_proved());
}

#[test]
fn implication_and_equivalence() {
    let cfg = SearchConfig::default();
    for (beta, alpha) in [("b & a", "a"), ("p", "p"), ("a & b", "b")] {
        assert!(
            implies(&prop(beta), &prop(alpha), &cfg).unwrap().is_proved(),
            "{beta} => {alpha}"
        );
    }
    for a in ["p", "p & q", "p | ~q"] {
        let (x, y) = logically_equivalent(&prop(a), &prop(a), &cfg).unwrap();
        assert!(x.is_proved() && y.is_proved(), "{a}");
    }
    let (x, y) = logically_equivalent(&prop("p"), &prop("q"), &cfg).unwrap();
    assert!(x.is_refuted() && y.is_refuted());
}

#[test]
fn deeper_search_keeps_proofs() {
    for s in [
        "s, ~s |-",
        "q & p, ~p |-",
        "q, p, ~p |-",
        "a & ~a |-",
        "p & q, ~q | ~p |-",
    ] {
        let first = (1..=8)
            .find(|&d| {
                let cfg = SearchConfig {
                    max_depth: d,
                    ..SearchConfig::default()
                };
                prove(&seq(s), &cfg).unwrap().is_proved()
            })
            .unwrap_or_else(|| panic!("{s} not proved by depth 8"));
        for d in first..=first + 2 {
            let cfg = SearchConfig {
                max_depth: d,
                ..SearchConfig::default()
            };
            assert!(prove(&seq(s), &cfg).unwrap().is_proved(), "{s} at depth {d}");
        }
    }
}

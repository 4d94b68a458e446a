use std::collections::BTreeSet;

use desguard_core::fixtures::*;
use desguard_core::observer::{build_ca_observer, state_estimate, EstimateResult};
use desguard_core::ops::{restrict_to_safe_states, state_set};
use desguard_core::synthesis::{check_ca_controllability, check_ca_observability};
use desguard_core::{AttackSpec, Automaton, Event, Word};
use desguard_testkit::{gen, oracle, rng};
use proptest::prelude::*;

fn observable_words(events: &BTreeSet<Event>, depth: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut level = vec![Word::empty()];
    for _ in 0..depth {
        level = level
            .iter()
            .flat_map(|w| events.iter().map(move |e| w.pushed(e.clone())))
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

fn check_estimates(h: &Automaton, atk: &AttackSpec) {
    let observable = h.alphabet().observable();
    let atk_h = atk.restrict_to(h);
    let obs = build_ca_observer(h, &atk_h, &observable).unwrap();
    for w in observable_words(&observable, 4) {
        let expected = oracle::estimate(h, &atk_h, &observable, &w, 10);
        match state_estimate(&obs, &w) {
            EstimateResult::Estimate(e) => assert_eq!(e.0, expected, "estimate after {w}"),
            EstimateResult::OffDomain => assert!(expected.is_empty(), "{w} should be in the domain"),
        }
    }
}

#[test]
fn fixture_estimates() {
    let (g, atk) = fix_del();
    let h = restrict_to_safe_states(&g, &state_set(&g, &fix_lin_safe_names()).unwrap()).unwrap();
    check_estimates(&h, &atk);
    let (g, atk) = fix_conf();
    let h = restrict_to_safe_states(&g, &state_set(&g, &fix_conf_safe_names()).unwrap()).unwrap();
    check_estimates(&h, &atk);
}

fn tracker_matches_definition(g: &Automaton, h: &Automaton, atk: &AttackSpec) {
    let v = check_ca_observability(g, h, atk, g.alphabet()).unwrap();
    let def = oracle::ca_observability_violation(g, h, atk, &g.alphabet().observable(), 9);
    assert_eq!(v.holds, def.is_none(), "tracker {v}, definition {def:?}");
    if let Some((s, e)) = def {
        assert_eq!(v.witness, Some(s));
        assert_eq!(v.witness_event, Some(e));
    }
}

#[test]
fn discriminating_pair() {
    let (g, atk) = fix_del();
    let h = restrict_to_safe_states(&g, &state_set(&g, &fix_lin_safe_names()).unwrap()).unwrap();
    assert!(check_ca_observability(&g, &h, &atk, g.alphabet()).unwrap().holds);
    tracker_matches_definition(&g, &h, &atk);
    let (g, atk) = fix_conf();
    let h = restrict_to_safe_states(&g, &state_set(&g, &fix_conf_safe_names()).unwrap()).unwrap();
    let v = check_ca_observability(&g, &h, &atk, g.alphabet()).unwrap();
    assert_eq!(v.witness, Some(Word::parse("a").unwrap()));
    assert_eq!(v.witness_event, Some(ev("c")));
    tracker_matches_definition(&g, &h, &atk);
}

#[test]
fn reduction_to_classical_properties() {
    let examples = gen::classical_examples();
    let mut verdicts = Vec::new();
    for (g, h) in &examples {
        let none = AttackSpec::none("G");
        let cc = check_ca_controllability(g, h, g.alphabet()).unwrap();
        let co = check_ca_observability(g, h, &none, g.alphabet()).unwrap();
        let classical_cc = oracle::controllability_violation(g, h, &g.alphabet().uncontrollable(), 8);
        let classical_co = oracle::classical_observability_violation(g, h, &g.alphabet().observable(), 8);
        assert_eq!(cc.holds, classical_cc.is_none());
        assert_eq!(co.holds, classical_co.is_none());
        verdicts.push((cc.holds, co.holds));
    }
    assert_eq!(
        verdicts,
        vec![(true, true), (false, true), (true, false), (true, true), (true, true), (true, true), (false, false)]
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_estimates_match_brute_force(seed in any::<u64>()) {
        let inst = gen::random_instance(&mut rng(seed), 6, &["a", "b", "c"]);
        check_estimates(&inst.h, &inst.atk);
    }

    #[test]
    fn random_observability_matches_definition(seed in any::<u64>()) {
        let inst = gen::random_instance(&mut rng(seed), 7, &["a", "b", "c"]);
        tracker_matches_definition(&inst.g, &inst.h, &inst.atk);
    }

    #[test]
    fn random_controllability_matches_enumeration(seed in any::<u64>()) {
        let inst = gen::random_instance(&mut rng(seed), 8, &["a", "b", "c", "d"]);
        let v = check_ca_controllability(&inst.g, &inst.h, inst.g.alphabet()).unwrap();
        let def = oracle::controllability_violation(&inst.g, &inst.h, &inst.g.alphabet().uncontrollable(), 9);
        prop_assert_eq!(v.holds, def.is_none());
        if let Some((s, e)) = def {
            prop_assert_eq!(v.witness, Some(s));
            prop_assert_eq!(v.witness_event, Some(e));
        }
    }
}

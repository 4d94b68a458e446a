use std::collections::BTreeSet;

use desguard_core::fixtures::*;
use desguard_core::ops::{accepts, compare_languages, enumerate_language, restrict_to_safe_states, state_set, CompareMode};
use desguard_core::sim::{simulate_with_traces, AttackerMode, SimConfig};
use desguard_core::synthesis::{check_ca_controllability, check_ca_observability, synthesize_ca_supervisor};
use desguard_core::verify::{large_language, large_language_bounded};
use desguard_core::{Alphabet, AttackSpec, Automaton, SupervisorRealization, Which};
use desguard_testkit::{gen, oracle, rng};
use proptest::prelude::*;

fn agree(g: &Automaton, sup: &SupervisorRealization, atk: &AttackSpec, depth: usize) {
    let la = large_language(g, sup, atk).unwrap();
    let exact = enumerate_language(&la, depth, Which::Generated);
    assert_eq!(exact, large_language_bounded(g, sup, atk, depth).unwrap());
    assert_eq!(exact, oracle::large_language(g, &[sup], atk, depth));
    assert!(compare_languages(&la, g, CompareMode::Inclusion).unwrap().holds);
}

fn with_actuators(alphabet: &Alphabet, attacked: &BTreeSet<desguard_core::Event>) -> Alphabet {
    let mut out = Alphabet::new();
    for (e, a) in alphabet.iter() {
        let mut a = *a;
        a.actuator_attackable = attacked.contains(e);
        out.insert(e.clone(), a).unwrap();
    }
    out
}

fn retarget(sup: &SupervisorRealization, alphabet: Alphabet) -> SupervisorRealization {
    SupervisorRealization::from_parts(
        sup.name.clone(),
        sup.observer().clone(),
        sup.patterns().to_vec(),
        sup.off_domain().clone(),
        alphabet,
    )
    .unwrap()
}

#[test]
fn deletion_fixture() {
    let (g, atk) = fix_del();
    let h = restrict_to_safe_states(&g, &state_set(&g, &fix_lin_safe_names()).unwrap()).unwrap();
    let sup = synthesize_ca_supervisor(&g, &h, &atk, g.alphabet(), false).unwrap();
    agree(&g, &sup, &atk, 6);
    let la = large_language(&g, &sup, &atk).unwrap();
    assert!(compare_languages(&la, &h, CompareMode::Equality).unwrap().holds);
    let attacked = retarget(&sup, with_actuators(g.alphabet(), &set(&["b"])));
    let la = large_language(&g, &attacked, &atk).unwrap();
    assert!(compare_languages(&la, &g, CompareMode::Equality).unwrap().holds);
    let v = check_ca_controllability(&g, &h, attacked.alphabet()).unwrap();
    assert!(!v.holds);
}

#[test]
fn permissive_on_attacked_plant() {
    let (g, atk) = fix_conf();
    let sup = SupervisorRealization::permissive("S", &g).unwrap();
    agree(&g, &sup, &atk, 4);
    let la = large_language(&g, &sup, &atk).unwrap();
    assert!(compare_languages(&la, &g, CompareMode::Equality).unwrap().holds);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tracker_agrees_with_definition(seed in any::<u64>()) {
        let inst = gen::random_instance(&mut rng(seed), 7, &["a", "b", "c"]);
        let sup = synthesize_ca_supervisor(&inst.g, &inst.h, &inst.atk, inst.g.alphabet(), true).unwrap();
        agree(&inst.g, &sup, &inst.atk, 6);
    }

    #[test]
    fn supervisor_achieves_spec_when_conditions_hold(seed in any::<u64>()) {
        let inst = gen::random_instance(&mut rng(seed), 7, &["a", "b", "c"]);
        let cc = check_ca_controllability(&inst.g, &inst.h, inst.g.alphabet()).unwrap();
        let co = check_ca_observability(&inst.g, &inst.h, &inst.atk, inst.g.alphabet()).unwrap();
        let sup = synthesize_ca_supervisor(&inst.g, &inst.h, &inst.atk, inst.g.alphabet(), true).unwrap();
        let la = large_language(&inst.g, &sup, &inst.atk).unwrap();
        let eq = compare_languages(&la, &inst.h, CompareMode::Equality).unwrap();
        if cc.holds && co.holds {
            prop_assert!(eq.holds, "{}", eq);
        }
        // A wrong large language must come from a failed condition.
        if !eq.holds {
            prop_assert!(!(cc.holds && co.holds));
        }
    }

    #[test]
    fn actuator_attacks_are_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = gen::random_instance(&mut r, 7, &["a", "b", "c"]);
        let sup = synthesize_ca_supervisor(&inst.g, &inst.h, &inst.atk, inst.g.alphabet(), true).unwrap();
        let ctrl: Vec<_> = inst.g.alphabet().controllable().into_iter().collect();
        let mut attacked = BTreeSet::new();
        let mut prev = large_language(&inst.g, &sup, &inst.atk).unwrap();
        for e in ctrl {
            attacked.insert(e);
            let s = retarget(&sup, with_actuators(inst.g.alphabet(), &attacked));
            let next = large_language(&inst.g, &s, &inst.atk).unwrap();
            prop_assert!(compare_languages(&prev, &next, CompareMode::Inclusion).unwrap().holds);
            prev = next;
        }
    }

    #[test]
    fn simulation_stays_inside_large_language(seed in any::<u64>()) {
        let inst = gen::random_instance(&mut rng(seed), 7, &["a", "b", "c"]);
        let sup = synthesize_ca_supervisor(&inst.g, &inst.h, &inst.atk, inst.g.alphabet(), true).unwrap();
        let la = large_language(&inst.g, &sup, &inst.atk).unwrap();
        for attacker in [AttackerMode::Random, AttackerMode::Maximal] {
            let cfg = SimConfig { runs: 30, depth: 10, seed, attacker, ..SimConfig::default() };
            let (_, traces) = simulate_with_traces(&inst.g, &[&sup], &inst.atk, &inst.h, &cfg, 30).unwrap();
            for t in traces {
                prop_assert!(accepts(&la, &t.word(), Which::Generated).unwrap());
            }
        }
    }
}

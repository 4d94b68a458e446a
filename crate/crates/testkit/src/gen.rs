use std::collections::{BTreeMap, BTreeSet};

use desguard_core::attack::TransitionKey;
use desguard_core::coordination::{CoordinationProblem, ProblemAttacks, SpecSource};
use desguard_core::fixtures::chain;
use desguard_core::ops::{compose_parallel, restrict_to_safe_states, state_set};
use desguard_core::{Alphabet, AttackSpec, Automaton, Event, EventAttrs, Label, StateId, StateTag};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ev(name: &str) -> Event {
    Event::new(name).unwrap()
}

/// Random attributes for the given event names. Sensor-attackable events
/// are observable; no actuator attacks.
pub fn random_alphabet(rng: &mut ChaCha8Rng, names: &[&str]) -> Alphabet {
    let mut a = Alphabet::new();
    for n in names {
        let mut attrs = EventAttrs::default();
        if rng.random_bool(0.3) {
            attrs = attrs.unobservable();
        } else if rng.random_bool(0.6) {
            attrs = attrs.sensor_attack();
        }
        if rng.random_bool(0.25) {
            attrs = attrs.uncontrollable();
        }
        a.insert(ev(n), attrs).unwrap();
    }
    a
}

/// Deterministic acyclic automaton with at most `max_states` states over
/// `alphabet`, trimmed to its accessible part. Every state is marked.
pub fn random_acyclic(rng: &mut ChaCha8Rng, name: &str, prefix: &str, alphabet: &Alphabet, max_states: usize, density: f64) -> Automaton {
    let n = rng.random_range(2..=max_states.max(2));
    let mut b = Automaton::builder(name, alphabet.clone());
    let ids: Vec<usize> = (0..n)
        .map(|i| b.add_state(&format!("{prefix}{i}"), true, StateTag::Plant).unwrap())
        .collect();
    b.set_initial(ids[0]);
    let events: Vec<Event> = alphabet.events().cloned().collect();
    for i in 0..n - 1 {
        for e in &events {
            if rng.random_bool(density) {
                let j = rng.random_range(i + 1..n);
                b.add_transition(ids[i], Label::Event(e.clone()), ids[j]).unwrap();
            }
        }
    }
    let g = b.build().unwrap();
    restrict_to_safe_states(&g, &g.accessible()).unwrap().renamed(name)
}

/// Random acyclic attack automaton over `alphabet` with at most
/// `max_states` states and a nonempty marked language.
pub fn random_attack_automaton(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_states: usize) -> Automaton {
    let n = rng.random_range(1..=max_states);
    let mut b = Automaton::builder("F", alphabet.clone());
    let ids: Vec<usize> = (0..n)
        .map(|i| b.add_state(&format!("f{i}"), false, StateTag::Plant).unwrap())
        .collect();
    b.set_initial(ids[0]);
    let events: Vec<Event> = alphabet.events().cloned().collect();
    for i in 0..n {
        if rng.random_bool(0.5) {
            b.set_marked(ids[i], true);
        }
        if i + 1 < n {
            for e in &events {
                if rng.random_bool(0.4) {
                    let j = rng.random_range(i + 1..n);
                    b.add_transition(ids[i], Label::Event(e.clone()), ids[j]).unwrap();
                }
            }
        }
    }
    let f = b.build().unwrap();
    if f.coaccessible().contains(&f.initial()) {
        return f;
    }
    let mut b = Automaton::builder("F", alphabet.clone());
    for q in f.state_ids() {
        b.add_state(f.state_name(q), f.is_marked(q) || q == f.initial(), StateTag::Plant).unwrap();
    }
    b.set_initial(f.initial().0);
    for (q, l, t) in f.transitions() {
        b.add_transition(q.0, l.clone(), t.0).unwrap();
    }
    b.build().unwrap()
}

/// Attacks a random selection of the sensor-attackable transitions of `g`
/// with attack automata over `over`.
pub fn random_attack(rng: &mut ChaCha8Rng, g: &Automaton, over: &Alphabet, max_states: usize, p: f64) -> AttackSpec {
    let mut atk = AttackSpec::none(g.name());
    for (q, l, t) in g.transitions() {
        let Some(e) = l.event() else { continue };
        if g.alphabet().attrs(e).is_some_and(|a| a.sensor_attackable) && rng.random_bool(p) {
            atk.insert(TransitionKey::of(g, q, e, t), random_attack_automaton(rng, over, max_states));
        }
    }
    atk
}

/// Random safe-state set containing the initial state.
pub fn random_safe(rng: &mut ChaCha8Rng, g: &Automaton, p: f64) -> BTreeSet<StateId> {
    g.state_ids()
        .filter(|q| *q == g.initial() || rng.random_bool(p))
        .collect()
}

/// A random attacked plant with a random safe sub-automaton.
pub struct Instance {
    pub g: Automaton,
    pub atk: AttackSpec,
    pub safe: BTreeSet<StateId>,
    pub h: Automaton,
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_states: usize, names: &[&str]) -> Instance {
    let alphabet = random_alphabet(rng, names);
    let g = random_acyclic(rng, "G", "q", &alphabet, max_states, 0.5);
    let atk = random_attack(rng, &g, &alphabet, 3, 0.7);
    let safe = random_safe(rng, &g, 0.55);
    let h = restrict_to_safe_states(&g, &safe).unwrap();
    Instance { g, atk, safe, h }
}

/// Two acyclic components sharing `c`. Attacks on private events use
/// strings of private events of the same component; the shared event is
/// sometimes deleted everywhere in both components. Such attacks only
/// depend on local behaviour.
///
/// With `product_spec` the specification is the product of safe-state sets
/// of the components, hence decomposable over `{c}` and solved without
/// coordinator extension. Otherwise it is a random safe-state set of the
/// composition and extension is enabled.
pub fn random_coordination(rng: &mut ChaCha8Rng, product_spec: bool) -> CoordinationProblem {
    let all = random_alphabet(rng, &["a", "b", "c", "d", "e"]);
    let pick = |names: &[&str]| -> BTreeSet<Event> { names.iter().map(|n| ev(n)).collect() };
    let a1 = all.restrict(&pick(&["a", "c", "d"]));
    let a2 = all.restrict(&pick(&["b", "c", "e"]));
    let g1 = random_acyclic(rng, "G1", "p", &a1, 4, 0.45);
    let g2 = random_acyclic(rng, "G2", "r", &a2, 4, 0.45);
    let private1 = all.restrict(&pick(&["a", "d"]));
    let private2 = all.restrict(&pick(&["b", "e"]));
    let mut atk1 = AttackSpec::none("G1");
    let mut atk2 = AttackSpec::none("G2");
    for (g, private, atk) in [(&g1, &private1, &mut atk1), (&g2, &private2, &mut atk2)] {
        for (q, l, t) in g.transitions() {
            let e = l.event().unwrap();
            if private.contains(e) && g.alphabet().attrs(e).unwrap().sensor_attackable && rng.random_bool(0.5) {
                atk.insert(TransitionKey::of(g, q, e, t), random_attack_automaton(rng, private, 3));
            }
        }
    }
    let c = ev("c");
    if all.attrs(&c).unwrap().sensor_attackable && rng.random_bool(0.4) {
        let mut del = Automaton::builder("D", Alphabet::new());
        let i = del.add_state("f0", true, StateTag::Plant).unwrap();
        del.set_initial(i);
        let del = del.build().unwrap();
        let by: BTreeMap<Event, Automaton> = [(c, del)].into_iter().collect();
        for (k, f) in AttackSpec::per_event(&g1, &by).entries() {
            atk1.insert(k.clone(), f.clone());
        }
        for (k, f) in AttackSpec::per_event(&g2, &by).entries() {
            atk2.insert(k.clone(), f.clone());
        }
    }
    let g = compose_parallel(&g1, &g2).unwrap();
    let safe: BTreeSet<String> = if product_spec {
        let s1: BTreeSet<String> = random_safe(rng, &g1, 0.75).into_iter().map(|q| g1.state_name(q).to_string()).collect();
        let s2: BTreeSet<String> = random_safe(rng, &g2, 0.75).into_iter().map(|q| g2.state_name(q).to_string()).collect();
        s1.iter()
            .flat_map(|p| s2.iter().map(move |r| format!("({p},{r})")))
            .filter(|n| g.state_id(n).is_some())
            .collect()
    } else {
        random_safe(rng, &g, 0.75)
            .into_iter()
            .map(|q| g.state_name(q).to_string())
            .collect()
    };
    CoordinationProblem::new(g1, g2, SpecSource::SafeStates(safe))
        .with_extension(!product_spec)
        .with_attacks(ProblemAttacks::Components(atk1, atk2))
}

/// Hand-built attack-free instances with known classical verdicts.
pub fn classical_examples() -> Vec<(Automaton, Automaton)> {
    let mut out = Vec::new();
    let alpha = |spec: &[(&str, bool, bool)]| {
        let mut a = Alphabet::new();
        for (n, obs, ctrl) in spec {
            let mut attrs = EventAttrs::default();
            if !obs {
                attrs = attrs.unobservable();
            }
            if !ctrl {
                attrs = attrs.uncontrollable();
            }
            a.insert(ev(n), attrs).unwrap();
        }
        a
    };
    let safe = |g: &Automaton, names: &[&str]| restrict_to_safe_states(g, &state_set(g, names).unwrap()).unwrap();
    // Controllable and observable.
    let g = chain("G", alpha(&[("a", true, true), ("b", true, true)]), &["q0"], &[("q0", "a", "q1"), ("q1", "b", "q2")]);
    out.push((g.clone(), safe(&g, &["q0", "q1"])));
    // Uncontrollable exit.
    let g = chain("G", alpha(&[("a", true, true), ("b", true, false)]), &["q0"], &[("q0", "a", "q1"), ("q1", "b", "q2")]);
    out.push((g.clone(), safe(&g, &["q0", "q1"])));
    // An unobservable prefix makes `a` and `u a` look alike.
    let g = chain(
        "G",
        alpha(&[("u", false, true), ("a", true, true), ("c", true, true)]),
        &["q0"],
        &[("q0", "u", "q1"), ("q1", "a", "q3"), ("q3", "c", "q5"), ("q0", "a", "q2"), ("q2", "c", "q4")],
    );
    out.push((g.clone(), safe(&g, &["q0", "q1", "q2", "q3", "q4"])));
    // Same plant, observation distinguishes: u observable.
    let g = chain(
        "G",
        alpha(&[("u", true, true), ("a", true, true), ("c", true, true)]),
        &["q0"],
        &[("q0", "u", "q1"), ("q0", "a", "q2"), ("q1", "c", "q3"), ("q2", "c", "q4")],
    );
    out.push((g.clone(), safe(&g, &["q0", "q1", "q2", "q4"])));
    // Unobservable but harmless event before a shared decision.
    let g = chain(
        "G",
        alpha(&[("u", false, false), ("a", true, true), ("b", true, true)]),
        &["q0"],
        &[("q0", "u", "q1"), ("q1", "a", "q2"), ("q0", "a", "q3"), ("q3", "b", "q4")],
    );
    out.push((g.clone(), safe(&g, &["q0", "q1", "q2", "q3"])));
    // Uncontrollable and unobservable leak.
    let g = chain(
        "G",
        alpha(&[("u", false, false), ("a", true, true)]),
        &["q0"],
        &[("q0", "a", "q1"), ("q1", "u", "q2"), ("q2", "a", "q3")],
    );
    out.push((g.clone(), safe(&g, &["q0", "q1", "q2"])));
    // Both properties fail.
    let g = chain(
        "G",
        alpha(&[("u", false, true), ("a", true, true), ("b", true, false), ("c", true, true)]),
        &["q0"],
        &[
            ("q0", "u", "q1"),
            ("q1", "a", "q3"),
            ("q3", "c", "q5"),
            ("q0", "a", "q2"),
            ("q2", "c", "q4"),
            ("q2", "b", "q6"),
        ],
    );
    out.push((g.clone(), safe(&g, &["q0", "q1", "q2", "q3", "q4"])));
    out
}

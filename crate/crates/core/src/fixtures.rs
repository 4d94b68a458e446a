//! Small canonical models used throughout the tests and examples.
//!
//! * `fix_lin`: `q0 -a-> q1 -b-> q2`, everything observable and controllable.
//! * `fix_safe`: the sub-automaton of `fix_lin` on `{q0, q1}`.
//! * `fix_del`: `fix_lin` with `(q0, a, q1)` attacked by the deletion language `{ε}`.
//! * `fix_conf`: `a` and `b` from `q0` both reported as `x`, then `c`;
//!   safe states `q0..q3`.
//! * `fix_coord`: `G1 = p0 -a-> p1 -c-> p2`, `G2 = r0 -c-> r1 -b-> r2`,
//!   specification the prefix closure of `ac`.
//!
//! The helpers panic on malformed input; they are meant for literals.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;

use crate::alphabet::{Alphabet, Event, EventAttrs};
use crate::attack::{AttackSpec, TransitionKey};
use crate::automaton::{Automaton, Label, StateTag};
use crate::ops::prefix_closure_automaton;
use crate::word::Word;

pub fn ev(name: &str) -> Event {
    Event::new(name).expect("valid event name")
}

pub fn set(names: &[&str]) -> BTreeSet<Event> {
    names.iter().map(|n| ev(n)).collect()
}

/// Alphabet with default attributes (observable, controllable).
pub fn sigma(names: &[&str]) -> Alphabet {
    Alphabet::from_events(names.iter().map(|n| ev(n)))
}

pub fn sigma_ab() -> Alphabet {
    sigma(&["a", "b"])
}

/// Deterministic automaton from `(src, event, dst)` triples. Every state is
/// marked; the first source is initial unless `states` lists more.
pub fn chain(name: &str, alphabet: Alphabet, states: &[&str], trans: &[(&str, &str, &str)]) -> Automaton {
    let mut b = Automaton::builder(name, alphabet);
    for s in states {
        b.add_state(s, true, StateTag::Plant).expect("state");
    }
    for (s, _, d) in trans {
        b.ensure_state(s, true, StateTag::Plant).expect("state");
        b.ensure_state(d, true, StateTag::Plant).expect("state");
    }
    b.set_initial_by_name(states.first().copied().unwrap_or(trans[0].0))
        .expect("initial");
    for (s, e, d) in trans {
        b.add_transition_by_name(s, Label::Event(ev(e)), d).expect("transition");
    }
    b.build().expect("automaton")
}

/// Deterministic trie automaton whose marked language is exactly `words`.
pub fn attack_language_automaton(name: &str, alphabet: &Alphabet, words: &[Word]) -> Automaton {
    let mut b = Automaton::builder(name, alphabet.clone());
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    let root = b.add_state("f0", false, StateTag::Plant).expect("state");
    b.set_initial(root);
    index.insert(Word::empty(), root);
    for w in words {
        let mut cur = Word::empty();
        for e in w.iter() {
            let next = cur.pushed(e.clone());
            if !index.contains_key(&next) {
                let id = b
                    .add_state(&format!("f{}", index.len()), false, StateTag::Plant)
                    .expect("state");
                b.add_transition(index[&cur], Label::Event(e.clone()), id)
                    .expect("transition");
                index.insert(next.clone(), id);
            }
            cur = next;
        }
        b.set_marked(index[&cur], true);
    }
    b.build().expect("automaton")
}

pub fn fix_lin() -> Automaton {
    chain("G", sigma_ab(), &["q0", "q1", "q2"], &[("q0", "a", "q1"), ("q1", "b", "q2")])
}

/// `fix_lin` with `a` sensor-attackable.
pub fn fix_lin_sensor() -> Automaton {
    let alphabet = Alphabet::new()
        .with(ev("a"), EventAttrs::default().sensor_attack())
        .and_then(|a| a.with(ev("b"), EventAttrs::default()))
        .expect("alphabet");
    chain("G", alphabet, &["q0", "q1", "q2"], &[("q0", "a", "q1"), ("q1", "b", "q2")])
}

pub fn fix_safe() -> Automaton {
    chain("H", sigma_ab(), &["q0", "q1"], &[("q0", "a", "q1")])
}

pub fn fix_lin_safe_names() -> [&'static str; 2] {
    ["q0", "q1"]
}

/// Plant and deletion attack on `(q0, a, q1)`.
pub fn fix_del() -> (Automaton, AttackSpec) {
    let g = fix_lin_sensor();
    let f = attack_language_automaton("F_del", g.alphabet(), &[Word::empty()]);
    let atk = AttackSpec::none("G").with(TransitionKey::new("q0", ev("a"), "q1"), f);
    (g, atk)
}

/// Plant and replacement attacks `a -> x`, `b -> x`.
pub fn fix_conf() -> (Automaton, AttackSpec) {
    let mut alphabet = Alphabet::new();
    for e in ["a", "b"] {
        alphabet
            .insert(ev(e), EventAttrs::default().sensor_attack())
            .expect("attrs");
    }
    for e in ["c", "x"] {
        alphabet.insert(ev(e), EventAttrs::default()).expect("attrs");
    }
    let g = chain(
        "G",
        alphabet,
        &["q0", "q1", "q2", "q3", "q4"],
        &[("q0", "a", "q1"), ("q0", "b", "q2"), ("q1", "c", "q3"), ("q2", "c", "q4")],
    );
    let x = Word::from(alloc::vec![ev("x")]);
    let f = attack_language_automaton("F_x", g.alphabet(), &[x]);
    let atk = AttackSpec::none("G")
        .with(TransitionKey::new("q0", ev("a"), "q1"), f.clone())
        .with(TransitionKey::new("q0", ev("b"), "q2"), f);
    (g, atk)
}

pub fn fix_conf_safe_names() -> [&'static str; 4] {
    ["q0", "q1", "q2", "q3"]
}

/// Component plants and the specification automaton for `closure{ac}`.
pub fn fix_coord() -> (Automaton, Automaton, Automaton) {
    let g1 = chain("G1", sigma(&["a", "c"]), &["p0", "p1", "p2"], &[("p0", "a", "p1"), ("p1", "c", "p2")]);
    let g2 = chain("G2", sigma(&["b", "c"]), &["r0", "r1", "r2"], &[("r0", "c", "r1"), ("r1", "b", "r2")]);
    let k = prefix_closure_automaton(
        "K",
        &sigma(&["a", "b", "c"]),
        &[Word::from(alloc::vec![ev("a"), ev("c")])],
    )
    .expect("spec");
    (g1, g2, k)
}

/// Renders a language as a sorted, comma separated list for messages.
pub fn show(lang: &BTreeSet<Word>) -> String {
    let mut s = String::from("{");
    for (i, w) in lang.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&format!("{w}"));
    }
    s.push('}');
    s
}

use std::collections::{BTreeMap, BTreeSet};

use desguard_core::attack::TransitionKey;
use desguard_core::synthesis::control_pattern;
use desguard_core::{AttackSpec, Automaton, Event, Label, StateId, SupervisorRealization, Word};

/// Strings of length at most `max_len` spelled by runs from the initial
/// state, keeping those ending in a marked state when `marked_only`.
fn words(a: &Automaton, max_len: usize, marked_only: bool) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(a.initial(), Word::empty())];
    while let Some((q, w)) = stack.pop() {
        if !marked_only || a.is_marked(q) {
            out.insert(w.clone());
        }
        if w.len() == max_len {
            continue;
        }
        for (l, t) in a.transitions_from(q) {
            match l {
                Label::Event(e) => stack.push((*t, w.pushed(e.clone()))),
                Label::Epsilon => panic!("reference helpers expect ε-free automata"),
            }
        }
    }
    out
}

pub fn generated(a: &Automaton, max_len: usize) -> BTreeSet<Word> {
    words(a, max_len, false)
}

pub fn marked(a: &Automaton, max_len: usize) -> BTreeSet<Word> {
    words(a, max_len, true)
}

fn concat_sets(a: &BTreeSet<Word>, b: &BTreeSet<Word>) -> BTreeSet<Word> {
    a.iter().flat_map(|x| b.iter().map(move |y| x.concat(y))).collect()
}

/// Longest attack string considered; the generators produce acyclic attack
/// automata with far shorter strings.
const ATTACK_BOUND: usize = 16;

/// Attacked versions of `s`: the concatenation, step by step, of the attack
/// language of each attacked transition or the event itself.
pub fn theta(g: &Automaton, atk: &AttackSpec, s: &Word) -> BTreeSet<Word> {
    let mut out: BTreeSet<Word> = [Word::empty()].into_iter().collect();
    let mut q = g.initial();
    for e in s.iter() {
        let t = g.step(q, e).expect("string in the plant language");
        let piece = match atk.get(&TransitionKey::of(g, q, e, t)) {
            Some(f) => marked(f, ATTACK_BOUND),
            None => [Word::from(vec![e.clone()])].into_iter().collect(),
        };
        out = concat_sets(&out, &piece);
        q = t;
    }
    out
}

pub fn phi(g: &Automaton, atk: &AttackSpec, s: &Word, observable: &BTreeSet<Event>) -> BTreeSet<Word> {
    theta(g, atk, s)
        .into_iter()
        .map(|w| w.project(|e| observable.contains(e)))
        .collect()
}

/// `∪ Θ(s)` over all plant strings of length at most `max_s`.
pub fn attacked_language(g: &Automaton, atk: &AttackSpec, max_s: usize) -> BTreeSet<Word> {
    generated(g, max_s).iter().flat_map(|s| theta(g, atk, s)).collect()
}

pub fn observed_language(g: &Automaton, atk: &AttackSpec, max_s: usize, observable: &BTreeSet<Event>) -> BTreeSet<Word> {
    generated(g, max_s)
        .iter()
        .flat_map(|s| phi(g, atk, s, observable))
        .collect()
}

fn state_after(g: &Automaton, s: &Word) -> StateId {
    g.run(g.initial(), s.iter()).expect("string in the plant language")
}

/// Names of the states of `h` reached by strings having `w` among their
/// attacked observations.
pub fn estimate(h: &Automaton, atk: &AttackSpec, observable: &BTreeSet<Event>, w: &Word, max_s: usize) -> BTreeSet<String> {
    generated(h, max_s)
        .into_iter()
        .filter(|s| phi(h, atk, s, observable).contains(w))
        .map(|s| h.state_name(state_after(h, &s)).to_string())
        .collect()
}

/// First `(s, σ)` violating CA-observability of `L(h)` read literally from
/// the definition, over all plant strings of length at most `max_s`.
pub fn ca_observability_violation(
    g: &Automaton,
    h: &Automaton,
    atk: &AttackSpec,
    observable: &BTreeSet<Event>,
    max_s: usize,
) -> Option<(Word, Event)> {
    let lg = generated(g, max_s + 1);
    let k = generated(h, max_s + 1);
    let mut inverse: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    let mut images: BTreeMap<Word, BTreeSet<Word>> = BTreeMap::new();
    for s in generated(g, max_s) {
        let ph = phi(g, atk, &s, observable);
        for w in &ph {
            inverse.entry(w.clone()).or_default().push(s.clone());
        }
        images.insert(s, ph);
    }
    let events: Vec<Event> = g.alphabet().events().cloned().collect();
    for s in generated(h, max_s) {
        for e in &events {
            if !k.contains(&s.pushed(e.clone())) {
                continue;
            }
            let ok = images[&s].iter().any(|w| {
                inverse[w].iter().all(|s2| {
                    let s2e = s2.pushed(e.clone());
                    !(k.contains(s2) && lg.contains(&s2e)) || k.contains(&s2e)
                })
            });
            if !ok {
                return Some((s, e.clone()));
            }
        }
    }
    None
}

/// `K Σ_uc ∩ L(G) ⊆ K` by enumeration.
pub fn controllability_violation(g: &Automaton, h: &Automaton, forced: &BTreeSet<Event>, max_s: usize) -> Option<(Word, Event)> {
    let lg = generated(g, max_s + 1);
    let k = generated(h, max_s + 1);
    for s in generated(h, max_s) {
        for e in forced {
            let se = s.pushed(e.clone());
            if lg.contains(&se) && !k.contains(&se) {
                return Some((s, e.clone()));
            }
        }
    }
    None
}

/// Conventional observability by comparing all pairs of strings with equal
/// projections.
pub fn classical_observability_violation(
    g: &Automaton,
    h: &Automaton,
    observable: &BTreeSet<Event>,
    max_s: usize,
) -> Option<(Word, Event)> {
    let lg = generated(g, max_s + 1);
    let k = generated(h, max_s + 1);
    let kk = generated(h, max_s);
    let events: Vec<Event> = g.alphabet().events().cloned().collect();
    for s in &kk {
        for e in &events {
            if !k.contains(&s.pushed(e.clone())) {
                continue;
            }
            let ps = s.project(|x| observable.contains(x));
            for s2 in &kk {
                let s2e = s2.pushed(e.clone());
                if s2.project(|x| observable.contains(x)) == ps && lg.contains(&s2e) && !k.contains(&s2e) {
                    return Some((s.clone(), e.clone()));
                }
            }
        }
    }
    None
}

/// The recursive definition of the large language of a conjunction of
/// supervisors, evaluated with explicit observation sets.
pub fn large_language(g: &Automaton, sups: &[&SupervisorRealization], atk: &AttackSpec, depth: usize) -> BTreeSet<Word> {
    let lg = generated(g, depth);
    let mut out: BTreeSet<Word> = [Word::empty()].into_iter().collect();
    let mut frontier = vec![Word::empty()];
    let events: Vec<Event> = g.alphabet().events().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            let th = theta(g, atk, s);
            for e in &events {
                let se = s.pushed(e.clone());
                if !lg.contains(&se) {
                    continue;
                }
                let allowed = sups.iter().all(|sup| {
                    let Some(attrs) = sup.alphabet().attrs(e) else { return true };
                    if !attrs.controllable || attrs.actuator_attackable {
                        return true;
                    }
                    let seen = sup.observer().automaton().alphabet().event_set();
                    th.iter()
                        .map(|w| w.project(|x| seen.contains(x)))
                        .any(|w| control_pattern(sup, &w).contains(e))
                });
                if allowed {
                    out.insert(se.clone());
                    next.push(se);
                }
            }
        }
        frontier = next;
    }
    out
}

/// `P1(K) ∥ P2(K)` restricted to strings of length at most `depth`, for a
/// finite `K` given by its strings.
pub fn decomposition(k: &BTreeSet<Word>, s1: &BTreeSet<Event>, s2: &BTreeSet<Event>, events: &[Event], depth: usize) -> BTreeSet<Word> {
    let p1: BTreeSet<Word> = k.iter().map(|w| w.project(|e| s1.contains(e))).collect();
    let p2: BTreeSet<Word> = k.iter().map(|w| w.project(|e| s2.contains(e))).collect();
    let mut out = BTreeSet::new();
    let mut level = vec![Word::empty()];
    for d in 0..=depth {
        let mut next = Vec::new();
        for w in level {
            if p1.contains(&w.project(|e| s1.contains(e))) && p2.contains(&w.project(|e| s2.contains(e))) {
                out.insert(w.clone());
                if d < depth {
                    for e in events {
                        next.push(w.pushed(e.clone()));
                    }
                }
            }
        }
        level = next;
    }
    out
}

/// Observer property of the projection onto `sk` checked on the finite
/// language `l`: a witness `(s, σ)` where `P(s)σ` is a projected string but
/// no extension of `s` realizes it.
pub fn observer_property_violation(l: &BTreeSet<Word>, sk: &BTreeSet<Event>) -> Option<(Word, Event)> {
    let p = |w: &Word| w.project(|e| sk.contains(e));
    let pl: BTreeSet<Word> = l.iter().map(p).collect();
    for s in l {
        for e in sk {
            let target = p(s).pushed(e.clone());
            if !pl.contains(&target) {
                continue;
            }
            let ok = l
                .iter()
                .any(|v| v.len() > s.len() && v.prefix(s.len()) == *s && p(v) == target);
            if !ok {
                return Some((s.clone(), e.clone()));
            }
        }
    }
    None
}

/// Some `s` with `P_{i,o}(Θ_i(P_i(s))) ≠ P_{i,o}(Θ(s))`.
pub fn local_consistency_violation(
    global: &Automaton,
    global_atk: &AttackSpec,
    local: &Automaton,
    local_atk: &AttackSpec,
    depth: usize,
) -> Option<Word> {
    let observed = local.alphabet().observable();
    let events = local.alphabet().event_set();
    generated(global, depth).into_iter().find(|s| {
        let ps = s.project(|e| events.contains(e));
        phi(local, local_atk, &ps, &observed) != phi(global, global_atk, s, &observed)
    })
}

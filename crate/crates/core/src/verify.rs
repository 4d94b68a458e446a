//! Large languages of supervised plants under attack, and the language
//! equalities relating local and global supervision.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec::Vec;

use crate::alphabet::Event;
use crate::attack::{theta_automaton, AttackSpec};
use crate::automaton::{Automaton, Label, StateTag, Which};
use crate::error::Result;
use crate::coordination::CoordinatedSystem;
use crate::ops::{accepts, compare_languages, compose_parallel, project, CompareMode};
use crate::verdict::Verdict;
use crate::synthesis::SupervisorRealization;
use crate::tracker::{ObsPoint, Tracker, View};
use crate::word::Word;

/// `L_a(S/G)`: the strings of `g` the supervisor cannot rule out under any
/// attacked observation and tampered pattern.
pub fn large_language(g: &Automaton, sup: &SupervisorRealization, atk: &AttackSpec) -> Result<Automaton> {
    conjunction_large_language(g, &[sup], atk)
}

/// Large language of the conjunction of several supervisors over `g`. Each
/// supervisor sees the attacked observations through its own observable
/// events and only rules on events of its alphabet.
pub fn conjunction_large_language(
    g: &Automaton,
    sups: &[&SupervisorRealization],
    atk: &AttackSpec,
) -> Result<Automaton> {
    let observers: Vec<_> = sups.iter().map(|s| s.observer()).collect();
    let tracker = Tracker::build_filtered(g, atk, &observers, |st, e| {
        sups.iter()
            .zip(&st.views)
            .all(|(s, view)| s.may_enable(view, e))
    })?;
    let name = if sups.len() == 1 {
        format!("La({})", sups[0].name)
    } else {
        let names: Vec<&str> = sups.iter().map(|s| s.name.as_str()).collect();
        format!("La({})", names.join("&"))
    };
    let mut b = Automaton::builder(name, g.alphabet().clone());
    for i in 0..tracker.len() {
        let q = tracker.state(i).plant;
        b.add_state(&format!("{}.{i}", g.state_name(q)), true, StateTag::Plant)?;
    }
    b.set_initial(0);
    for i in 0..tracker.len() {
        for (e, j) in tracker.transitions_from(i) {
            b.add_transition(i, Label::Event(e.clone()), *j)?;
        }
    }
    b.build()
}

/// Observer points reachable by the observations of `theta` as seen by
/// `sup`.
fn view_of(theta: &Automaton, sup: &SupervisorRealization) -> Result<View> {
    let obs = sup.observer();
    let seen: BTreeSet<Event> = obs
        .automaton()
        .alphabet()
        .events()
        .filter(|e| theta.alphabet().contains(e))
        .cloned()
        .collect();
    let phi = project(theta, &seen)?;
    let start = (phi.initial(), ObsPoint::State(obs.initial()));
    let mut visited = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut view = View::new();
    while let Some((f, p)) = queue.pop_front() {
        if phi.is_marked(f) {
            view.insert(p);
        }
        for (l, t) in phi.transitions_from(f) {
            let Label::Event(e) = l else { continue };
            let np = match p {
                ObsPoint::State(x) => obs.step(x, e).map_or(ObsPoint::Off, ObsPoint::State),
                ObsPoint::Off => ObsPoint::Off,
            };
            if visited.insert((*t, np)) {
                queue.push_back((*t, np));
            }
        }
    }
    Ok(view)
}

/// Evaluates the recursive definition of the large language string by
/// string up to length `depth`, building the attacked observations of each
/// string afresh.
pub fn large_language_bounded(
    g: &Automaton,
    sup: &SupervisorRealization,
    atk: &AttackSpec,
    depth: usize,
) -> Result<BTreeSet<Word>> {
    conjunction_large_language_bounded(g, &[sup], atk, depth)
}

pub fn conjunction_large_language_bounded(
    g: &Automaton,
    sups: &[&SupervisorRealization],
    atk: &AttackSpec,
    depth: usize,
) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::from([Word::empty()]);
    let mut frontier = alloc::vec![Word::empty()];
    let events: Vec<Event> = g.alphabet().events().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            let theta = theta_automaton(g, atk, s)?;
            let views = sups
                .iter()
                .map(|sup| view_of(&theta, sup))
                .collect::<Result<Vec<_>>>()?;
            for e in &events {
                let t = s.pushed(e.clone());
                if !accepts(g, &t, Which::Generated)? {
                    continue;
                }
                if sups.iter().zip(&views).all(|(sup, v)| sup.may_enable(v, e)) {
                    out.insert(t.clone());
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Outcome of the three language equalities for a coordinated system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    /// Conjunction large language against the composition of the local ones.
    pub conjunction: Verdict,
    /// Each local large language against the projection of `K`.
    pub local: [Verdict; 2],
    /// Conjunction large language against `K`.
    pub global: Verdict,
}

impl TheoremReport {
    pub fn all_hold(&self) -> bool {
        self.conjunction.holds && self.local.iter().all(|v| v.holds) && self.global.holds
    }
}

pub fn verify_theorems(sys: &CoordinatedSystem) -> Result<TheoremReport> {
    let [l1, l2] = &sys.local;
    let conj = conjunction_large_language(&sys.plant, &[&l1.supervisor, &l2.supervisor], &sys.attack)?;
    let la1 = large_language(&l1.plant, &l1.supervisor, &l1.attack)?;
    let la2 = large_language(&l2.plant, &l2.supervisor, &l2.attack)?;
    let composed = compose_parallel(&la1, &la2)?;
    let conjunction = compare_languages(&conj, &composed, CompareMode::Equality)?;
    let mut local = Vec::new();
    for (la, l) in [(&la1, l1), (&la2, l2)] {
        let pk = project(&sys.spec, &l.plant.alphabet().event_set())?;
        local.push(compare_languages(la, &pk, CompareMode::Equality)?);
    }
    let global = compare_languages(&conj, &sys.spec, CompareMode::Equality)?;
    let [v1, v2]: [Verdict; 2] = local.try_into().expect("two components");
    Ok(TheoremReport {
        conjunction,
        local: [v1, v2],
        global,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::ops::{compare_languages, enumerate_language, restrict_to_safe_states, state_set, CompareMode};
    use crate::synthesis::synthesize_ca_supervisor;

    fn words(list: &[&str]) -> BTreeSet<Word> {
        list.iter().map(|s| Word::parse(s).unwrap()).collect()
    }

    #[test]
    fn permissive_yields_plant_language() {
        let g = fix_lin();
        let sup = SupervisorRealization::permissive("S", &g).unwrap();
        let la = large_language(&g, &sup, &AttackSpec::none("G")).unwrap();
        assert!(compare_languages(&la, &g, CompareMode::Equality).unwrap().holds);
        let bounded = large_language_bounded(&g, &sup, &AttackSpec::none("G"), 2).unwrap();
        assert_eq!(bounded, words(&["", "a", "a b"]));
    }

    #[test]
    fn deletion_supervisor_achieves_spec() {
        let (g, atk) = fix_del();
        let h = restrict_to_safe_states(&g, &state_set(&g, &["q0", "q1"]).unwrap()).unwrap();
        let sup = synthesize_ca_supervisor(&g, &h, &atk, g.alphabet(), false).unwrap();
        let la = large_language(&g, &sup, &atk).unwrap();
        assert_eq!(enumerate_language(&la, 5, Which::Generated), words(&["", "a"]));
        assert_eq!(large_language_bounded(&g, &sup, &atk, 3).unwrap(), words(&["", "a"]));
        assert_eq!(large_language_bounded(&g, &sup, &atk, 0).unwrap(), words(&[""]));
    }

    #[test]
    fn actuator_attack_enables_b() {
        let (g, atk) = fix_del();
        let h = restrict_to_safe_states(&g, &state_set(&g, &["q0", "q1"]).unwrap()).unwrap();
        let alphabet = g.alphabet().with_actuator_attacks(&set(&["b"])).unwrap();
        let sup = synthesize_ca_supervisor(&g, &h, &atk, &alphabet, true).unwrap();
        let la = large_language(&g, &sup, &atk).unwrap();
        assert_eq!(enumerate_language(&la, 5, Which::Generated), words(&["", "a", "a b"]));
    }
}

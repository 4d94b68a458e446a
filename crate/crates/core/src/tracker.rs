//! Joint exploration of a plant and the sets of observer states its attacked
//! observations can lead to.
//!
//! A tracker state `(q, W)` pairs the plant state reached by `s` with, per
//! observer, `W = {ξ(x0, w) : w ∈ Φ(s)}` where `Φ(s)` collects the projected
//! attacked versions of `s`. Runs leaving the observer domain collapse to
//! [`ObsPoint::Off`].

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::alphabet::Event;
use crate::attack::AttackSpec;
use crate::automaton::{Automaton, Label, StateId};
use crate::error::Result;
use crate::observer::ObserverAutomaton;
use crate::ops::erase_events;
use crate::word::Word;

/// An observer state, or the absorbing point outside its transition function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObsPoint {
    State(StateId),
    Off,
}

pub type View = BTreeSet<ObsPoint>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TrackerState {
    pub plant: StateId,
    pub views: Vec<View>,
}

/// Advances observer views along plant transitions.
pub(crate) struct Stepper<'a> {
    observers: Vec<&'a ObserverAutomaton>,
    /// Per observer, attack automata with events it does not see erased.
    erased: Vec<BTreeMap<(StateId, Event), Automaton>>,
    cache: Vec<BTreeMap<(ObsPoint, StateId, Event), View>>,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(
        plant: &Automaton,
        atk: &AttackSpec,
        observers: Vec<&'a ObserverAutomaton>,
    ) -> Result<Self> {
        atk.validate(plant)?;
        let resolved = atk.resolve(plant)?;
        let erased = observers
            .iter()
            .map(|o| {
                let keep = o.automaton().alphabet().event_set();
                resolved
                    .iter()
                    .map(|(k, f)| (k.clone(), erase_events(f, &keep)))
                    .collect()
            })
            .collect();
        let cache = observers.iter().map(|_| BTreeMap::new()).collect();
        Ok(Stepper {
            observers,
            erased,
            cache,
        })
    }

    pub(crate) fn initial_views(&self) -> Vec<View> {
        self.observers
            .iter()
            .map(|o| [ObsPoint::State(o.initial())].into_iter().collect())
            .collect()
    }

    fn point_step(obs: &ObserverAutomaton, p: ObsPoint, e: &Event) -> ObsPoint {
        match p {
            ObsPoint::State(x) => obs.step(x, e).map_or(ObsPoint::Off, ObsPoint::State),
            ObsPoint::Off => ObsPoint::Off,
        }
    }

    /// Points reachable from `p` while reading the (erased) attack language
    /// of the plant transition `(q, e)`.
    fn image(&mut self, i: usize, p: ObsPoint, q: StateId, e: &Event) -> View {
        let obs = self.observers[i];
        let Some(f) = self.erased[i].get(&(q, e.clone())) else {
            let mut out = View::new();
            out.insert(if obs.observes(e) {
                Self::point_step(obs, p, e)
            } else {
                p
            });
            return out;
        };
        let key = (p, q, e.clone());
        if let Some(v) = self.cache[i].get(&key) {
            return v.clone();
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let start = (p, f.initial());
        seen.insert(start);
        queue.push_back(start);
        let mut out = View::new();
        while let Some((pt, s)) = queue.pop_front() {
            if f.is_marked(s) {
                out.insert(pt);
            }
            for (l, t) in f.transitions_from(s) {
                let next = match l {
                    Label::Epsilon => (pt, *t),
                    Label::Event(a) => (Self::point_step(obs, pt, a), *t),
                };
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        self.cache[i].insert(key, out.clone());
        out
    }

    /// Views after the plant moves from `q` on `e`.
    pub(crate) fn advance(&mut self, views: &[View], q: StateId, e: &Event) -> Vec<View> {
        (0..views.len())
            .map(|i| {
                let mut next = View::new();
                for p in &views[i] {
                    next.extend(self.image(i, *p, q, e));
                }
                next
            })
            .collect()
    }
}

/// The reachable tracker states in breadth-first order over sorted events,
/// so the recorded access strings are length-lexicographically minimal.
#[derive(Clone, Debug)]
pub struct Tracker {
    states: Vec<TrackerState>,
    trans: Vec<Vec<(Event, usize)>>,
    parent: Vec<Option<(usize, Event)>>,
}

impl Tracker {
    /// Explores `plant` restricted to the moves accepted by `allow`.
    pub fn build_filtered(
        plant: &Automaton,
        atk: &AttackSpec,
        observers: &[&ObserverAutomaton],
        mut allow: impl FnMut(&TrackerState, &Event) -> bool,
    ) -> Result<Tracker> {
        plant.require_deterministic()?;
        let mut stepper = Stepper::new(plant, atk, observers.to_vec())?;
        let root = TrackerState {
            plant: plant.initial(),
            views: stepper.initial_views(),
        };
        let mut index = BTreeMap::new();
        index.insert(root.clone(), 0usize);
        let mut t = Tracker {
            states: alloc::vec![root],
            trans: alloc::vec![Vec::new()],
            parent: alloc::vec![None],
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let cur = t.states[i].clone();
            let moves: Vec<(Event, StateId)> = plant
                .transitions_from(cur.plant)
                .iter()
                .filter_map(|(l, d)| l.event().map(|e| (e.clone(), *d)))
                .collect();
            for (e, d) in moves {
                if !allow(&cur, &e) {
                    continue;
                }
                let next = TrackerState {
                    plant: d,
                    views: stepper.advance(&cur.views, cur.plant, &e),
                };
                let j = match index.get(&next) {
                    Some(j) => *j,
                    None => {
                        let j = t.states.len();
                        index.insert(next.clone(), j);
                        t.states.push(next);
                        t.trans.push(Vec::new());
                        t.parent.push(Some((i, e.clone())));
                        queue.push_back(j);
                        j
                    }
                };
                t.trans[i].push((e, j));
            }
        }
        Ok(t)
    }

    pub fn build(plant: &Automaton, atk: &AttackSpec, observers: &[&ObserverAutomaton]) -> Result<Tracker> {
        Self::build_filtered(plant, atk, observers, |_, _| true)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &TrackerState {
        &self.states[i]
    }

    pub fn states(&self) -> &[TrackerState] {
        &self.states
    }

    pub fn transitions_from(&self, i: usize) -> &[(Event, usize)] {
        &self.trans[i]
    }

    pub fn step(&self, i: usize, e: &Event) -> Option<usize> {
        self.trans[i].iter().find(|(a, _)| a == e).map(|(_, j)| *j)
    }

    pub fn run(&self, w: &Word) -> Option<usize> {
        w.iter().try_fold(0, |i, e| self.step(i, e))
    }

    /// Length-lexicographically least string reaching state `i`.
    pub fn access_string(&self, mut i: usize) -> Word {
        let mut rev = Vec::new();
        while let Some((p, e)) = &self.parent[i] {
            rev.push(e.clone());
            i = *p;
        }
        rev.reverse();
        Word::from(rev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::observer::build_ca_observer;
    use crate::ops::{restrict_to_safe_states, state_set};

    #[test]
    fn deletion_keeps_observer_at_start() {
        let (g, atk) = fix_del();
        let h = restrict_to_safe_states(&g, &state_set(&g, &["q0", "q1"]).unwrap()).unwrap();
        let obs = build_ca_observer(&h, &atk, &g.alphabet().observable()).unwrap();
        let t = Tracker::build(&g, &atk, &[&obs]).unwrap();
        let after_a = t.run(&Word::parse("a").unwrap()).unwrap();
        let x0 = ObsPoint::State(obs.initial());
        assert_eq!(t.state(after_a).views[0], [x0].into_iter().collect());
        let after_ab = t.run(&Word::parse("a b").unwrap()).unwrap();
        assert_eq!(t.state(after_ab).views[0], [ObsPoint::Off].into_iter().collect());
        assert_eq!(t.access_string(after_ab), Word::parse("a b").unwrap());
    }

    #[test]
    fn insertion_spreads_view() {
        let g = fix_lin_sensor();
        let f = attack_language_automaton(
            "F",
            g.alphabet(),
            &[Word::parse("a").unwrap(), Word::parse("a a").unwrap()],
        );
        let atk = AttackSpec::none("G").with(crate::attack::TransitionKey::new("q0", ev("a"), "q1"), f);
        let obs = build_ca_observer(&g, &AttackSpec::none("G"), &g.alphabet().observable()).unwrap();
        let t = Tracker::build(&g, &atk, &[&obs]).unwrap();
        let i = t.run(&Word::parse("a").unwrap()).unwrap();
        let v = &t.state(i).views[0];
        assert_eq!(v.len(), 2);
        assert!(v.contains(&ObsPoint::Off));
    }
}

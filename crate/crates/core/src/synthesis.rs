//! CA-controllability, CA-observability and supervisor synthesis.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabet, Event};
use crate::attack::AttackSpec;
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::observer::{build_ca_observer, ObserverAutomaton, StateEstimate};
use crate::tracker::{ObsPoint, Tracker};
use crate::verdict::Verdict;
use crate::word::Word;

/// Set of enabled events.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ControlPattern(pub BTreeSet<Event>);

impl ControlPattern {
    pub fn contains(&self, e: &Event) -> bool {
        self.0.contains(e)
    }

    pub fn events(&self) -> &BTreeSet<Event> {
        &self.0
    }
}

impl fmt::Display for ControlPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Names of `g`'s safe states, as an estimate would list them.
fn ids_of(g: &Automaton, estimate: &StateEstimate) -> Result<Vec<StateId>> {
    estimate
        .iter()
        .map(|n| g.state_id(n).ok_or_else(|| Error::UnknownState(String::from(n))))
        .collect()
}

/// Events leading from some estimated state to an unsafe state of `g`.
pub fn rho_disable(
    estimate: &StateEstimate,
    g: &Automaton,
    safe: &BTreeSet<StateId>,
) -> Result<BTreeSet<Event>> {
    let mut out = BTreeSet::new();
    for q in ids_of(g, estimate)? {
        for (l, t) in g.transitions_from(q) {
            if let Some(e) = l.event() {
                if !safe.contains(t) {
                    out.insert(e.clone());
                }
            }
        }
    }
    Ok(out)
}

/// Checks that `h` is a sub-automaton of `g` by state names and returns the
/// ids of its states in `g`.
fn embed(g: &Automaton, h: &Automaton) -> Result<Vec<StateId>> {
    g.require_deterministic()?;
    h.require_deterministic()?;
    let map: Vec<StateId> = h
        .state_ids()
        .map(|q| {
            g.state_id(h.state_name(q))
                .ok_or_else(|| Error::UnknownState(String::from(h.state_name(q))))
        })
        .collect::<Result<_>>()?;
    if map[h.initial().0] != g.initial() {
        return Err(Error::Invalid(format!(
            "`{}` and `{}` have different initial states",
            h.name(),
            g.name()
        )));
    }
    for (q, l, t) in h.transitions() {
        let e = l.event().expect("deterministic");
        if g.step(map[q.0], e) != Some(map[t.0]) {
            return Err(Error::Invalid(format!(
                "`{}` is not a sub-automaton of `{}`: transition ({}, {e}, {}) is missing",
                h.name(),
                g.name(),
                h.state_name(q),
                h.state_name(t)
            )));
        }
    }
    Ok(map)
}

/// Safe states of `g`: those that `h` keeps.
fn safe_set(g: &Automaton, h: &Automaton) -> Result<BTreeSet<StateId>> {
    Ok(embed(g, h)?.into_iter().collect())
}

/// `K (Σ_uc ∪ Σ_c^a) ∩ L(G) ⊆ K` with `K = L(h)`. Attributes are read from
/// `alphabet`.
pub fn check_ca_controllability(g: &Automaton, h: &Automaton, alphabet: &Alphabet) -> Result<Verdict> {
    let map = embed(g, h)?;
    let forced: BTreeSet<Event> = alphabet
        .uncontrollable()
        .union(&alphabet.actuator_attackable())
        .cloned()
        .collect();
    let mut parent: BTreeMap<StateId, Option<(StateId, Event)>> = BTreeMap::new();
    parent.insert(h.initial(), None);
    let mut queue = VecDeque::from([h.initial()]);
    let access = |parent: &BTreeMap<StateId, Option<(StateId, Event)>>, mut q: StateId| {
        let mut rev = Vec::new();
        while let Some(Some((p, e))) = parent.get(&q) {
            rev.push(e.clone());
            q = *p;
        }
        rev.reverse();
        Word::from(rev)
    };
    while let Some(q) = queue.pop_front() {
        for (l, t) in g.transitions_from(map[q.0]) {
            let e = l.event().expect("deterministic");
            match h.step(q, e) {
                Some(n) => {
                    if !parent.contains_key(&n) {
                        parent.insert(n, Some((q, e.clone())));
                        queue.push_back(n);
                    }
                }
                None if forced.contains(e) => {
                    let s = access(&parent, q);
                    let kind = if alphabet.is_uncontrollable(e) {
                        "uncontrollable"
                    } else {
                        "actuator-attackable"
                    };
                    return Ok(Verdict::fails(
                        s,
                        Some(e.clone()),
                        format!("{kind} event `{e}` leaves the specification (to `{}`)", g.state_name(*t)),
                    ));
                }
                None => {}
            }
        }
    }
    Ok(Verdict::holds(format!(
        "no uncontrollable or actuator-attackable event leaves `{}`",
        h.name()
    )))
}

/// For every `s` in `K` and `σ` with `sσ ∈ K`, some attacked observation of
/// `s` yields an estimate that does not ask to disable `σ`.
pub fn check_ca_observability(
    g: &Automaton,
    h: &Automaton,
    atk: &AttackSpec,
    alphabet: &Alphabet,
) -> Result<Verdict> {
    let safe = safe_set(g, h)?;
    let atk_h = atk.restrict_to(h);
    let obs = build_ca_observer(h, &atk_h, &observed(alphabet, h))?;
    let rho: Vec<Option<BTreeSet<Event>>> = obs
        .automaton()
        .state_ids()
        .map(|x| {
            if obs.automaton().is_marked(x) {
                rho_disable(obs.estimate_of(x), g, &safe).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;
    let tracker = Tracker::build(h, &atk_h, &[&obs])?;
    for i in 0..tracker.len() {
        let st = tracker.state(i);
        for (l, _) in h.transitions_from(st.plant) {
            let e = l.event().expect("deterministic");
            let allowed = st.views[0].iter().any(|p| match p {
                ObsPoint::State(x) => rho[x.0].as_ref().is_some_and(|r| !r.contains(e)),
                ObsPoint::Off => false,
            });
            if !allowed {
                return Ok(Verdict::fails(
                    tracker.access_string(i),
                    Some(e.clone()),
                    format!(
                        "every attacked observation of the string leads to an estimate that disables `{e}`"
                    ),
                ));
            }
        }
    }
    Ok(Verdict::holds(format!(
        "every legal continuation of `{}` stays enabled under some attacked observation",
        h.name()
    )))
}

fn observed(alphabet: &Alphabet, h: &Automaton) -> BTreeSet<Event> {
    alphabet
        .observable()
        .into_iter()
        .filter(|e| h.alphabet().contains(e))
        .collect()
}

/// An observer-based supervisor: a control pattern per observer state plus
/// the pattern applied outside the observer domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupervisorRealization {
    pub name: String,
    observer: ObserverAutomaton,
    patterns: Vec<ControlPattern>,
    off_domain: ControlPattern,
    alphabet: Alphabet,
}

impl SupervisorRealization {
    pub fn from_parts(
        name: impl Into<String>,
        observer: ObserverAutomaton,
        patterns: Vec<ControlPattern>,
        off_domain: ControlPattern,
        alphabet: Alphabet,
    ) -> Result<Self> {
        let name = name.into();
        if patterns.len() != observer.automaton().state_count() {
            return Err(Error::Invalid(format!(
                "supervisor `{name}` has {} patterns for {} observer states",
                patterns.len(),
                observer.automaton().state_count()
            )));
        }
        for p in patterns.iter().chain(core::iter::once(&off_domain)) {
            if let Some(e) = p.0.iter().find(|e| !alphabet.contains(e)) {
                return Err(Error::UnknownEvent(e.clone()));
            }
        }
        if let Some(e) = observer.automaton().alphabet().events().find(|e| !alphabet.contains(e)) {
            return Err(Error::UnknownEvent(e.clone()));
        }
        Ok(SupervisorRealization {
            name,
            observer,
            patterns,
            off_domain,
            alphabet,
        })
    }

    /// A supervisor that enables every event everywhere, observing through
    /// the attack-free observer of `g`.
    pub fn permissive(name: impl Into<String>, g: &Automaton) -> Result<Self> {
        let obs = build_ca_observer(g, &AttackSpec::none(g.name()), &g.alphabet().observable())?;
        let all = ControlPattern(g.alphabet().event_set());
        let patterns = alloc::vec![all.clone(); obs.automaton().state_count()];
        Self::from_parts(name, obs, patterns, all, g.alphabet().clone())
    }

    pub fn observer(&self) -> &ObserverAutomaton {
        &self.observer
    }

    pub fn patterns(&self) -> &[ControlPattern] {
        &self.patterns
    }

    pub fn off_domain(&self) -> &ControlPattern {
        &self.off_domain
    }

    /// Events this supervisor is responsible for.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Pattern issued at an observer point. Observer states with an empty
    /// estimate lie outside the domain.
    pub fn pattern_at(&self, p: ObsPoint) -> &ControlPattern {
        match p {
            ObsPoint::State(x) if self.observer.automaton().is_marked(x) => &self.patterns[x.0],
            _ => &self.off_domain,
        }
    }

    /// Whether this supervisor lets `e` occur given the points its
    /// observations may have led to. Events outside its alphabet are not its
    /// concern; uncontrollable and actuator-attackable ones cannot be
    /// prevented.
    pub fn may_enable(&self, view: &BTreeSet<ObsPoint>, e: &Event) -> bool {
        match self.alphabet.attrs(e) {
            None => true,
            Some(a) if !a.controllable || a.actuator_attackable => true,
            Some(_) => view.iter().any(|p| self.pattern_at(*p).contains(e)),
        }
    }

    /// The same supervisor with `e` added to every pattern.
    pub fn with_enabled(&self, e: &Event) -> Result<Self> {
        if !self.alphabet.contains(e) {
            return Err(Error::UnknownEvent(e.clone()));
        }
        let mut out = self.clone();
        for p in out.patterns.iter_mut().chain(core::iter::once(&mut out.off_domain)) {
            p.0.insert(e.clone());
        }
        Ok(out)
    }
}

/// The pattern after observing `w`.
pub fn control_pattern(sup: &SupervisorRealization, w: &Word) -> ControlPattern {
    let p = sup.observer.run(w).map_or(ObsPoint::Off, ObsPoint::State);
    sup.pattern_at(p).clone()
}

/// Builds the CA-supervisor of `h` inside `g`. Unless `force` is set, both
/// CA-controllability and CA-observability must hold; the first failing
/// verdict is returned as [`Error::Precondition`].
pub fn synthesize_ca_supervisor(
    g: &Automaton,
    h: &Automaton,
    atk: &AttackSpec,
    alphabet: &Alphabet,
    force: bool,
) -> Result<SupervisorRealization> {
    if !force {
        for v in [
            check_ca_controllability(g, h, alphabet)?,
            check_ca_observability(g, h, atk, alphabet)?,
        ] {
            if !v.holds {
                return Err(Error::Precondition(Box::new(v)));
            }
        }
    }
    let safe = safe_set(g, h)?;
    let obs = build_ca_observer(h, &atk.restrict_to(h), &observed(alphabet, h))?;
    let events = alphabet.event_set();
    let forced: BTreeSet<Event> = alphabet.uncontrollable();
    let patterns = obs
        .estimates()
        .iter()
        .map(|est| {
            let rho = rho_disable(est, g, &safe)?;
            Ok(ControlPattern(
                events
                    .difference(&rho)
                    .chain(forced.iter())
                    .cloned()
                    .collect(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    SupervisorRealization::from_parts(
        format!("S_{}", h.name()),
        obs,
        patterns,
        ControlPattern(forced),
        alphabet.clone(),
    )
}

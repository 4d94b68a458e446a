//! Sensor attacks as string substitution on attacked transitions, and
//! actuator attacks as tampering with control patterns.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabet, Event};
use crate::automaton::{Automaton, Label, StateId, StateTag};
use crate::error::{Error, Result};
use crate::ops::{self, Refinement};
use crate::word::Word;

/// A plant transition `(source, event, target)` named by state names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionKey {
    pub source: String,
    pub event: Event,
    pub target: String,
}

impl TransitionKey {
    pub fn new(source: &str, event: Event, target: &str) -> Self {
        TransitionKey {
            source: source.to_string(),
            event,
            target: target.to_string(),
        }
    }

    pub fn of(g: &Automaton, q: StateId, event: &Event, t: StateId) -> Self {
        TransitionKey::new(g.state_name(q), event.clone(), g.state_name(t))
    }
}

impl fmt::Display for TransitionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.source, self.event, self.target)
    }
}

/// Attacked transitions of one plant, each mapped to the automaton whose
/// marked language is the attack language of that transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackSpec {
    plant: String,
    entries: BTreeMap<TransitionKey, Automaton>,
}

impl AttackSpec {
    /// No attacked transitions.
    pub fn none(plant: &str) -> Self {
        AttackSpec {
            plant: plant.to_string(),
            entries: BTreeMap::new(),
        }
    }

    pub fn plant_name(&self) -> &str {
        &self.plant
    }

    pub fn insert(&mut self, key: TransitionKey, attack: Automaton) {
        self.entries.insert(key, attack);
    }

    pub fn with(mut self, key: TransitionKey, attack: Automaton) -> Self {
        self.insert(key, attack);
        self
    }

    pub fn entries(&self) -> &BTreeMap<TransitionKey, Automaton> {
        &self.entries
    }

    pub fn get(&self, key: &TransitionKey) -> Option<&Automaton> {
        self.entries.get(key)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Events of the attacked transitions.
    pub fn attacked_events(&self) -> BTreeSet<Event> {
        self.entries.keys().map(|k| k.event.clone()).collect()
    }

    /// Attacks every transition of `g` labeled with a key of `by_event`.
    pub fn per_event(g: &Automaton, by_event: &BTreeMap<Event, Automaton>) -> Self {
        let mut spec = AttackSpec::none(g.name());
        for (q, l, t) in g.transitions() {
            if let Label::Event(e) = l {
                if let Some(f) = by_event.get(e) {
                    spec.insert(TransitionKey::of(g, q, e, t), f.clone());
                }
            }
        }
        spec
    }

    /// Checks the spec against its plant: every key is a transition of `g`
    /// carrying a sensor-attackable event, and every attack automaton is
    /// deterministic, ε-free, over plant events and marks a nonempty language.
    pub fn validate(&self, g: &Automaton) -> Result<()> {
        g.require_deterministic()?;
        for (key, f) in &self.entries {
            let present = match (g.state_id(&key.source), g.state_id(&key.target)) {
                (Some(q), Some(t)) => g.step(q, &key.event) == Some(t),
                _ => false,
            };
            if !present {
                return Err(Error::MissingTransition {
                    key: key.clone(),
                    plant: g.name().to_string(),
                });
            }
            let sensor = g
                .alphabet()
                .attrs(&key.event)
                .is_some_and(|a| a.sensor_attackable);
            if !sensor {
                return Err(Error::NotSensorAttackable(key.clone()));
            }
            let invalid = |reason: String| Error::InvalidAttackAutomaton {
                key: key.clone(),
                reason,
            };
            if !f.is_deterministic() {
                return Err(invalid(format!("`{}` is not deterministic and ε-free", f.name())));
            }
            if let Some(e) = f.alphabet().events().find(|e| !g.alphabet().contains(e)) {
                return Err(invalid(format!("event `{e}` is not a plant event")));
            }
            if !f.coaccessible().contains(&f.initial()) {
                return Err(invalid(format!("`{}` marks the empty language", f.name())));
            }
        }
        Ok(())
    }

    /// Attack automaton per `(source state, event)` of a deterministic plant.
    pub fn resolve<'a>(&'a self, g: &Automaton) -> Result<BTreeMap<(StateId, Event), &'a Automaton>> {
        let mut out = BTreeMap::new();
        for (key, f) in &self.entries {
            let q = g.state_id(&key.source).ok_or_else(|| Error::MissingTransition {
                key: key.clone(),
                plant: g.name().to_string(),
            })?;
            out.insert((q, key.event.clone()), f);
        }
        Ok(out)
    }

    /// Keeps the entries whose transitions exist in `h` (matched by state
    /// names), re-targeted at `h`.
    pub fn restrict_to(&self, h: &Automaton) -> AttackSpec {
        let mut out = AttackSpec::none(h.name());
        for (key, f) in &self.entries {
            let present = match (h.state_id(&key.source), h.state_id(&key.target)) {
                (Some(q), Some(t)) => h.step(q, &key.event) == Some(t),
                _ => false,
            };
            if present {
                out.insert(key.clone(), f.clone());
            }
        }
        out
    }

    /// Carries the attacks of `g` over to a refinement of `g`: a refined
    /// transition is attacked iff its origin transition is.
    pub fn lift(&self, g: &Automaton, refinement: &Refinement) -> AttackSpec {
        let plant = &refinement.plant;
        let mut out = AttackSpec::none(plant.name());
        for (q, l, t) in plant.transitions() {
            let Label::Event(e) = l else { continue };
            let key = TransitionKey::of(g, refinement.origin[q.0], e, refinement.origin[t.0]);
            if let Some(f) = self.entries.get(&key) {
                out.insert(TransitionKey::of(plant, q, e, t), f.clone());
            }
        }
        out
    }

    /// Same entries, attributed to another plant name.
    pub fn for_plant(&self, plant: &str) -> AttackSpec {
        AttackSpec {
            plant: plant.to_string(),
            entries: self.entries.clone(),
        }
    }
}

fn inserted_name(key: &TransitionKey, f: &Automaton, s: StateId) -> String {
    format!("{}|{}|{}/{}", key.source, key.event, key.target, f.state_name(s))
}

/// Splices a fresh copy of each attack automaton into the plant in place of
/// its attacked transition: an ε move from the source to the copy's initial
/// state and ε moves from each marked copy state to the target. Original
/// plant states are marked and tagged [`StateTag::Plant`], inserted ones are
/// unmarked and tagged [`StateTag::Inserted`], so the marked language is the
/// set of attacked strings of the plant language.
pub fn build_attacked_automaton(g: &Automaton, atk: &AttackSpec) -> Result<Automaton> {
    atk.validate(g)?;
    let attacked = atk.resolve(g)?;
    let mut builder = Automaton::builder(format!("{}^a", g.name()), g.alphabet().clone());
    let mut plant = Vec::with_capacity(g.state_count());
    for q in g.state_ids() {
        plant.push(builder.add_state(g.state_name(q), true, StateTag::Plant)?);
    }
    builder.set_initial(plant[g.initial().0]);
    for (q, l, t) in g.transitions() {
        let Label::Event(e) = l else { continue };
        match attacked.get(&(q, e.clone())) {
            None => builder.add_transition(plant[q.0], l.clone(), plant[t.0])?,
            Some(f) => {
                let key = TransitionKey::of(g, q, e, t);
                splice(&mut builder, &key, f, plant[q.0], plant[t.0])?;
            }
        }
    }
    builder.build()
}

fn splice(
    builder: &mut crate::automaton::AutomatonBuilder,
    key: &TransitionKey,
    f: &Automaton,
    from: usize,
    to: usize,
) -> Result<()> {
    let copy: Vec<usize> = f
        .state_ids()
        .map(|s| builder.add_state(&inserted_name(key, f, s), false, StateTag::Inserted))
        .collect::<Result<_>>()?;
    builder.add_transition(from, Label::Epsilon, copy[f.initial().0])?;
    for (s, l, t) in f.transitions() {
        builder.add_transition(copy[s.0], l.clone(), copy[t.0])?;
    }
    for s in f.marked_states() {
        builder.add_transition(copy[s.0], Label::Epsilon, to)?;
    }
    Ok(())
}

/// Replaces every transition labeled outside `observable` by an ε move.
/// States and marking are unchanged; the alphabet shrinks to the observable
/// events.
pub fn erase_unobservable(ga: &Automaton, observable: &BTreeSet<Event>) -> Automaton {
    let keep: BTreeSet<Event> = observable
        .iter()
        .filter(|e| ga.alphabet().contains(e))
        .cloned()
        .collect();
    ops::erase_events(ga, &keep).renamed(format!("{}_eps", ga.name()))
}

/// Automaton marking the attacked versions of one plant string: the
/// concatenation, along the run of `s`, of `{σ}` for unattacked steps and
/// the attack language for attacked ones.
pub fn theta_automaton(g: &Automaton, atk: &AttackSpec, s: &Word) -> Result<Automaton> {
    atk.validate(g)?;
    let attacked = atk.resolve(g)?;
    let mut builder = Automaton::builder(format!("Theta({s})"), g.alphabet().clone());
    let mut prev = builder.add_state("c0", s.is_empty(), StateTag::Plant)?;
    builder.set_initial(prev);
    let mut q = g.initial();
    for (k, e) in s.iter().enumerate() {
        let Some(t) = (if g.alphabet().contains(e) { g.step(q, e) } else { None }) else {
            return Err(Error::NotInLanguage {
                word: s.to_string(),
                position: k,
            });
        };
        let next = builder.add_state(&format!("c{}", k + 1), k + 1 == s.len(), StateTag::Plant)?;
        match attacked.get(&(q, e.clone())) {
            None => builder.add_transition(prev, Label::Event(e.clone()), next)?,
            Some(f) => {
                let key = TransitionKey::new(&format!("c{k}"), e.clone(), &format!("c{}", k + 1));
                splice(&mut builder, &key, f, prev, next)?;
            }
        }
        prev = next;
        q = t;
    }
    builder.build()
}

/// Deterministic automaton over the observable events marking the natural
/// projection of the attacked strings of `s`.
pub fn phi_automaton(g: &Automaton, atk: &AttackSpec, s: &Word) -> Result<Automaton> {
    let theta = theta_automaton(g, atk, s)?;
    Ok(ops::project(&theta, &g.alphabet().observable())?.renamed(format!("Phi({s})")))
}

/// The interval `lower ⊆ γ^a ⊆ upper` describing every control pattern an
/// actuator attacker can produce from a commanded pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternBounds {
    pub lower: BTreeSet<Event>,
    pub upper: BTreeSet<Event>,
}

impl PatternBounds {
    pub fn contains(&self, pattern: &BTreeSet<Event>) -> bool {
        self.lower.is_subset(pattern) && pattern.is_subset(&self.upper)
    }

    /// Every pattern in the interval. Exponential in `|upper - lower|`.
    pub fn members(&self) -> Vec<BTreeSet<Event>> {
        let free: Vec<&Event> = self.upper.difference(&self.lower).collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for mask in 0u64..(1u64 << free.len()) {
            let mut p = self.lower.clone();
            for (i, e) in free.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p.insert((*e).clone());
                }
            }
            out.push(p);
        }
        out
    }
}

/// Bounds of the attacked patterns of `gamma`: `(γ - Σ_c^a, γ ∪ Σ_c^a)`.
pub fn actuator_pattern_bounds(gamma: &BTreeSet<Event>, alphabet: &Alphabet) -> Result<PatternBounds> {
    if let Some(e) = gamma.iter().find(|e| !alphabet.contains(e)) {
        return Err(Error::UnknownEvent((*e).clone()));
    }
    let attackable = alphabet.actuator_attackable();
    Ok(PatternBounds {
        lower: gamma.difference(&attackable).cloned().collect(),
        upper: gamma.union(&attackable).cloned().collect(),
    })
}

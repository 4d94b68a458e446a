//! The automaton value shared by plants, specifications, attack automata and
//! observers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabet, Event};
use crate::error::{Error, Result};

/// Index of a state inside one automaton. States are kept sorted by name, so
/// ids follow name order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

/// Transition label: an event or the silent move.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Epsilon,
    Event(Event),
}

impl Label {
    pub fn event(&self) -> Option<&Event> {
        match self {
            Label::Epsilon => None,
            Label::Event(e) => Some(e),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Epsilon => f.write_str("ε"),
            Label::Event(e) => write!(f, "{e}"),
        }
    }
}

/// Distinguishes original plant states from states inserted while splicing
/// attack automata into a plant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateTag {
    #[default]
    Plant,
    Inserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateInfo {
    pub name: String,
    pub marked: bool,
    pub tag: StateTag,
}

/// Which language of an automaton an operation looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Generated,
    Marked,
}

/// A finite automaton, possibly nondeterministic and with ε moves.
///
/// Values are canonical: states are sorted by name and each state's outgoing
/// transitions are sorted by `(label, target)`. Two automata with the same
/// states, marking and transitions therefore compare equal regardless of how
/// they were built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automaton {
    name: String,
    alphabet: Alphabet,
    states: Vec<StateInfo>,
    initial: StateId,
    delta: Vec<Vec<(Label, StateId)>>,
}

pub(crate) fn is_valid_state_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == ':' || c == '#')
}

impl Automaton {
    pub fn builder(name: impl Into<String>, alphabet: Alphabet) -> AutomatonBuilder {
        AutomatonBuilder::new(name, alphabet)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[StateInfo] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state(&self, q: StateId) -> &StateInfo {
        &self.states[q.0]
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0].name
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states
            .binary_search_by(|s| s.name.as_str().cmp(name))
            .ok()
            .map(StateId)
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.states[q.0].marked
    }

    pub fn tag(&self, q: StateId) -> StateTag {
        self.states[q.0].tag
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.state_ids().filter(|q| self.is_marked(*q))
    }

    pub fn transitions_from(&self, q: StateId) -> &[(Label, StateId)] {
        &self.delta[q.0]
    }

    /// All transitions in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Label, StateId)> {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(q, out)| out.iter().map(move |(l, t)| (StateId(q), l, *t)))
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    /// Successors of `q` under `label` (no ε-closure).
    pub fn successors<'a>(
        &'a self,
        q: StateId,
        label: &'a Label,
    ) -> impl Iterator<Item = StateId> + 'a {
        let out = &self.delta[q.0];
        let start = out.partition_point(|(l, _)| l < label);
        out[start..]
            .iter()
            .take_while(move |(l, _)| l == label)
            .map(|(_, t)| *t)
    }

    /// First successor under event `e`; the unique one on deterministic automata.
    pub fn step(&self, q: StateId, e: &Event) -> Option<StateId> {
        let out = &self.delta[q.0];
        let start = out.partition_point(|(l, _)| match l {
            Label::Epsilon => true,
            Label::Event(x) => x < e,
        });
        match out.get(start) {
            Some((Label::Event(x), t)) if x == e => Some(*t),
            _ => None,
        }
    }

    /// Runs a deterministic automaton along `events` from `q`.
    pub fn run<'a>(&self, q: StateId, events: impl IntoIterator<Item = &'a Event>) -> Option<StateId> {
        let mut cur = q;
        for e in events {
            cur = self.step(cur, e)?;
        }
        Some(cur)
    }

    /// Events with at least one transition out of `q`.
    pub fn enabled(&self, q: StateId) -> impl Iterator<Item = &Event> {
        let mut last: Option<&Event> = None;
        self.delta[q.0].iter().filter_map(move |(l, _)| match l {
            Label::Event(e) if last != Some(e) => {
                last = Some(e);
                Some(e)
            }
            _ => None,
        })
    }

    pub fn has_epsilon(&self) -> bool {
        self.delta
            .iter()
            .any(|out| out.iter().any(|(l, _)| *l == Label::Epsilon))
    }

    /// No ε labels and at most one successor per `(source, event)`.
    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().all(|out| {
            out.iter().all(|(l, _)| *l != Label::Epsilon)
                && out.windows(2).all(|w| w[0].0 != w[1].0)
        })
    }

    pub(crate) fn require_deterministic(&self) -> Result<()> {
        if self.is_deterministic() {
            Ok(())
        } else {
            Err(Error::NotDeterministic(self.name.clone()))
        }
    }

    /// States reachable from the initial state.
    pub fn accessible(&self) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![self.initial];
        seen.insert(self.initial);
        while let Some(q) = stack.pop() {
            for (_, t) in &self.delta[q.0] {
                if seen.insert(*t) {
                    stack.push(*t);
                }
            }
        }
        seen
    }

    /// States from which a marked state is reachable.
    pub fn coaccessible(&self) -> BTreeSet<StateId> {
        let mut rev: Vec<Vec<StateId>> = alloc::vec![Vec::new(); self.states.len()];
        for (q, _, t) in self.transitions() {
            rev[t.0].push(q);
        }
        let mut seen: BTreeSet<StateId> = self.marked_states().collect();
        let mut stack: Vec<StateId> = seen.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for p in &rev[q.0] {
                if seen.insert(*p) {
                    stack.push(*p);
                }
            }
        }
        seen
    }

    /// ε-closure of a state set.
    pub fn epsilon_closure(&self, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut out = set.clone();
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for t in self.successors(q, &Label::Epsilon) {
                if out.insert(t) {
                    stack.push(t);
                }
            }
        }
        out
    }

    /// Whether the transition graph has a cycle reachable from the initial state.
    pub fn is_acyclic(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut color = alloc::vec![0u8; self.states.len()];
        let mut stack: Vec<(StateId, usize)> = alloc::vec![(self.initial, 0)];
        color[self.initial.0] = 1;
        while let Some((q, i)) = stack.pop() {
            let out = &self.delta[q.0];
            if i < out.len() {
                stack.push((q, i + 1));
                let t = out[i].1;
                match color[t.0] {
                    0 => {
                        color[t.0] = 1;
                        stack.push((t, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color[q.0] = 2;
            }
        }
        true
    }

    /// Same automaton under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Automaton {
        let mut out = self.clone();
        out.name = name.into();
        out
    }

    /// Same automaton over a different alphabet. Every event used by a
    /// transition must remain.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Automaton> {
        for (_, l, _) in self.transitions() {
            if let Label::Event(e) = l {
                if !alphabet.contains(e) {
                    return Err(Error::UnknownEvent(e.clone()));
                }
            }
        }
        let mut out = self.clone();
        out.alphabet = alphabet;
        Ok(out)
    }

    /// Every state marked.
    pub fn with_all_marked(&self) -> Automaton {
        let mut out = self.clone();
        for s in &mut out.states {
            s.marked = true;
        }
        out
    }

    /// Relabels transitions through `f`; returns a possibly nondeterministic
    /// automaton over `alphabet`.
    pub(crate) fn relabel(
        &self,
        alphabet: Alphabet,
        f: impl Fn(&Label) -> Label,
    ) -> Automaton {
        let mut delta: Vec<Vec<(Label, StateId)>> = self
            .delta
            .iter()
            .map(|out| out.iter().map(|(l, t)| (f(l), *t)).collect())
            .collect();
        for out in &mut delta {
            out.sort();
            out.dedup();
        }
        Automaton {
            name: self.name.clone(),
            alphabet,
            states: self.states.clone(),
            initial: self.initial,
            delta,
        }
    }
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "automaton {} (initial {})", self.name, self.state_name(self.initial))?;
        for (q, l, t) in self.transitions() {
            writeln!(f, "  {} {} {}", self.state_name(q), l, self.state_name(t))?;
        }
        Ok(())
    }
}

/// Incremental constructor for [`Automaton`].
///
/// States are added by name and referred to by the returned builder index;
/// [`AutomatonBuilder::build`] sorts everything into canonical order.
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    name: String,
    alphabet: Alphabet,
    states: Vec<StateInfo>,
    index: BTreeMap<String, usize>,
    initial: Option<usize>,
    trans: Vec<(usize, Label, usize)>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        AutomatonBuilder {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            index: BTreeMap::new(),
            initial: None,
            trans: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn add_state(&mut self, name: &str, marked: bool, tag: StateTag) -> Result<usize> {
        if !is_valid_state_name(name) {
            return Err(Error::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(Error::DuplicateState(name.to_string()));
        }
        let id = self.states.len();
        self.states.push(StateInfo {
            name: name.to_string(),
            marked,
            tag,
        });
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Returns the index of `name`, adding it if new.
    pub fn ensure_state(&mut self, name: &str, marked: bool, tag: StateTag) -> Result<usize> {
        match self.index.get(name) {
            Some(i) => Ok(*i),
            None => self.add_state(name, marked, tag),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn set_marked(&mut self, idx: usize, marked: bool) {
        self.states[idx].marked = marked;
    }

    pub fn set_initial(&mut self, idx: usize) {
        self.initial = Some(idx);
    }

    pub fn set_initial_by_name(&mut self, name: &str) -> Result<()> {
        let i = self
            .lookup(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))?;
        self.initial = Some(i);
        Ok(())
    }

    pub fn add_transition(&mut self, src: usize, label: Label, dst: usize) -> Result<()> {
        if let Label::Event(e) = &label {
            if !self.alphabet.contains(e) {
                return Err(Error::UnknownEvent(e.clone()));
            }
        }
        self.trans.push((src, label, dst));
        Ok(())
    }

    pub fn add_transition_by_name(&mut self, src: &str, label: Label, dst: &str) -> Result<()> {
        let s = self
            .lookup(src)
            .ok_or_else(|| Error::UnknownState(src.to_string()))?;
        let d = self
            .lookup(dst)
            .ok_or_else(|| Error::UnknownState(dst.to_string()))?;
        self.add_transition(s, label, d)
    }

    pub fn build(self) -> Result<Automaton> {
        let initial = self.initial.ok_or(Error::MissingInitial(self.name.clone()))?;
        let mut order: Vec<usize> = (0..self.states.len()).collect();
        order.sort_by(|a, b| self.states[*a].name.cmp(&self.states[*b].name));
        let mut remap = alloc::vec![0usize; self.states.len()];
        for (new, old) in order.iter().enumerate() {
            remap[*old] = new;
        }
        let mut delta: Vec<Vec<(Label, StateId)>> = alloc::vec![Vec::new(); self.states.len()];
        for (s, l, d) in self.trans {
            delta[remap[s]].push((l, StateId(remap[d])));
        }
        for out in &mut delta {
            out.sort();
            out.dedup();
        }
        let mut states = self.states;
        let mut sorted: Vec<StateInfo> = Vec::with_capacity(states.len());
        let mut slots: Vec<Option<StateInfo>> = states.drain(..).map(Some).collect();
        for old in &order {
            sorted.push(slots[*old].take().expect("each state moved once"));
        }
        Ok(Automaton {
            name: self.name,
            alphabet: self.alphabet,
            states: sorted,
            initial: StateId(remap[initial]),
            delta,
        })
    }
}

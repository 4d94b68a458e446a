//! Events and alphabets with their observation, control and attack attributes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::error::{Error, Result};

/// A symbolic event name.
///
/// Names are non-empty and may not contain whitespace or any of `:`, `,`, `#`
/// so that they survive the line-oriented model format and comma-separated
/// command line lists.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(Arc<str>);

impl Event {
    pub fn new(name: &str) -> Result<Self> {
        if is_valid_token(name) {
            Ok(Event(Arc::from(name)))
        } else {
            Err(Error::InvalidName(String::from(name)))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Event {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_token(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c == ':' || c == ',' || c == '#')
}

/// Per-event attribute flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EventAttrs {
    pub observable: bool,
    pub controllable: bool,
    pub sensor_attackable: bool,
    pub actuator_attackable: bool,
}

impl Default for EventAttrs {
    /// Observable and controllable, not attackable.
    fn default() -> Self {
        EventAttrs {
            observable: true,
            controllable: true,
            sensor_attackable: false,
            actuator_attackable: false,
        }
    }
}

impl EventAttrs {
    pub fn unobservable(mut self) -> Self {
        self.observable = false;
        self
    }

    pub fn uncontrollable(mut self) -> Self {
        self.controllable = false;
        self
    }

    pub fn sensor_attack(mut self) -> Self {
        self.sensor_attackable = true;
        self
    }

    pub fn actuator_attack(mut self) -> Self {
        self.actuator_attackable = true;
        self
    }

    fn check(&self, event: &Event) -> Result<()> {
        if self.sensor_attackable && !self.observable {
            return Err(Error::SensorAttackUnobservable(event.clone()));
        }
        if self.actuator_attackable && !self.controllable {
            return Err(Error::ActuatorAttackUncontrollable(event.clone()));
        }
        Ok(())
    }
}

/// A finite event set together with the attribute partition of each event.
///
/// Only the per-event flags are stored, so derived sets such as the
/// unobservable or uncontrollable events can never disagree with the
/// primary ones.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    events: BTreeMap<Event, EventAttrs>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet where every event carries the default attributes.
    pub fn from_events<I>(events: I) -> Self
    where
        I: IntoIterator<Item = Event>,
    {
        Alphabet {
            events: events.into_iter().map(|e| (e, EventAttrs::default())).collect(),
        }
    }

    pub fn insert(&mut self, event: Event, attrs: EventAttrs) -> Result<()> {
        attrs.check(&event)?;
        self.events.insert(event, attrs);
        Ok(())
    }

    pub fn with(mut self, event: Event, attrs: EventAttrs) -> Result<Self> {
        self.insert(event, attrs)?;
        Ok(self)
    }

    pub fn contains(&self, event: &Event) -> bool {
        self.events.contains_key(event)
    }

    pub fn attrs(&self, event: &Event) -> Option<EventAttrs> {
        self.events.get(event).copied()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Event, &EventAttrs)> {
        self.events.iter()
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.events.keys()
    }

    pub fn event_set(&self) -> BTreeSet<Event> {
        self.events.keys().cloned().collect()
    }

    fn select(&self, pred: impl Fn(&EventAttrs) -> bool) -> BTreeSet<Event> {
        self.events
            .iter()
            .filter(|(_, a)| pred(a))
            .map(|(e, _)| e.clone())
            .collect()
    }

    pub fn observable(&self) -> BTreeSet<Event> {
        self.select(|a| a.observable)
    }

    pub fn unobservable(&self) -> BTreeSet<Event> {
        self.select(|a| !a.observable)
    }

    pub fn controllable(&self) -> BTreeSet<Event> {
        self.select(|a| a.controllable)
    }

    pub fn uncontrollable(&self) -> BTreeSet<Event> {
        self.select(|a| !a.controllable)
    }

    pub fn sensor_attackable(&self) -> BTreeSet<Event> {
        self.select(|a| a.sensor_attackable)
    }

    pub fn actuator_attackable(&self) -> BTreeSet<Event> {
        self.select(|a| a.actuator_attackable)
    }

    pub fn is_observable(&self, e: &Event) -> bool {
        self.attrs(e).is_some_and(|a| a.observable)
    }

    pub fn is_uncontrollable(&self, e: &Event) -> bool {
        self.attrs(e).is_some_and(|a| !a.controllable)
    }

    pub fn is_actuator_attackable(&self, e: &Event) -> bool {
        self.attrs(e).is_some_and(|a| a.actuator_attackable)
    }

    /// Keeps only the events in `keep`, with their attributes.
    pub fn restrict(&self, keep: &BTreeSet<Event>) -> Alphabet {
        Alphabet {
            events: self
                .events
                .iter()
                .filter(|(e, _)| keep.contains(*e))
                .map(|(e, a)| (e.clone(), *a))
                .collect(),
        }
    }

    /// Union of two alphabets. Shared events must carry identical attributes.
    pub fn merge(&self, other: &Alphabet) -> Result<Alphabet> {
        let mut events = self.events.clone();
        for (e, a) in &other.events {
            match events.get(e) {
                Some(existing) if existing != a => {
                    return Err(Error::AttributeConflict(e.clone()));
                }
                Some(_) => {}
                None => {
                    events.insert(e.clone(), *a);
                }
            }
        }
        Ok(Alphabet { events })
    }

    /// Drops every sensor-attack flag.
    pub fn without_sensor_attacks(&self) -> Alphabet {
        let mut out = self.clone();
        for a in out.events.values_mut() {
            a.sensor_attackable = false;
        }
        out
    }

    /// Replaces the set of actuator-attackable events.
    pub fn with_actuator_attacks(&self, attackable: &BTreeSet<Event>) -> Result<Alphabet> {
        let mut out = self.clone();
        for (e, a) in out.events.iter_mut() {
            a.actuator_attackable = attackable.contains(e);
            a.check(e)?;
        }
        Ok(out)
    }
}

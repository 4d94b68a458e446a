use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Deref;

use crate::alphabet::Event;
use crate::error::Result;

/// A finite event string. Ordered shortest-first, then lexicographically by
/// event name, which is the order used for enumeration and witnesses.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Event>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a whitespace separated list of event names. The empty string
    /// and `ε` both denote the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let mut events = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "ε" {
                continue;
            }
            events.push(Event::new(tok)?);
        }
        Ok(Word(events))
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn push(&mut self, e: Event) {
        self.0.push(e);
    }

    pub fn pushed(&self, e: Event) -> Word {
        let mut w = self.clone();
        w.0.push(e);
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    /// Keeps only events accepted by `keep`.
    pub fn project(&self, keep: impl Fn(&Event) -> bool) -> Word {
        Word(self.0.iter().filter(|e| keep(e)).cloned().collect())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn into_inner(self) -> Vec<Event> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Event];
    fn deref(&self) -> &[Event] {
        &self.0
    }
}

impl From<Vec<Event>> for Word {
    fn from(v: Vec<Event>) -> Self {
        Word(v)
    }
}

impl FromIterator<Event> for Word {
    fn from_iter<T: IntoIterator<Item = Event>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(e.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

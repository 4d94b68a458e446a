use alloc::string::String;
use core::fmt;

use crate::alphabet::Event;
use crate::word::Word;

/// Outcome of a property check. A failing verdict normally carries a
/// shortest witness string, optionally followed by the offending event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Word>,
    pub witness_event: Option<Event>,
    pub detail: String,
}

impl Verdict {
    pub fn holds(detail: impl Into<String>) -> Self {
        Verdict {
            holds: true,
            witness: None,
            witness_event: None,
            detail: detail.into(),
        }
    }

    pub fn fails(witness: Word, event: Option<Event>, detail: impl Into<String>) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
            witness_event: event,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            write!(f, "holds: {}", self.detail)
        } else {
            write!(f, "violated: {}", self.detail)?;
            if let Some(w) = &self.witness {
                write!(f, "; witness \"{w}\"")?;
            }
            if let Some(e) = &self.witness_event {
                write!(f, " then {e}")?;
            }
            Ok(())
        }
    }
}

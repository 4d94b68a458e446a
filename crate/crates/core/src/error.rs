use alloc::boxed::Box;
use alloc::string::String;

use crate::alphabet::Event;
use crate::attack::TransitionKey;
use crate::verdict::Verdict;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("event `{0}` is not in the alphabet")]
    UnknownEvent(Event),
    #[error("state `{0}` does not exist")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("automaton `{0}` has no initial state")]
    MissingInitial(String),
    #[error("event `{0}` is sensor-attackable but unobservable")]
    SensorAttackUnobservable(Event),
    #[error("event `{0}` is actuator-attackable but uncontrollable")]
    ActuatorAttackUncontrollable(Event),
    #[error("event `{0}` has conflicting attributes in the composed alphabets")]
    AttributeConflict(Event),
    #[error("automaton `{0}` must be deterministic and ε-free")]
    NotDeterministic(String),
    #[error("initial state `{0}` is not safe")]
    UnsafeInitial(String),
    #[error("transition {key} does not exist in `{plant}`")]
    MissingTransition { key: TransitionKey, plant: String },
    #[error("transition {0} carries an event that is not sensor-attackable")]
    NotSensorAttackable(TransitionKey),
    #[error("attack automaton for {key} is invalid: {reason}")]
    InvalidAttackAutomaton { key: TransitionKey, reason: String },
    #[error("string `{word}` leaves the language at position {position}")]
    NotInLanguage { word: String, position: usize },
    #[error("precondition failed: {0}")]
    Precondition(Box<Verdict>),
    #[error("attack on local transition {0} depends on non-local context")]
    AttackNotLocal(TransitionKey),
    #[error("attacked event `{event}` of {key} has no counterpart in the local plant")]
    NoLocalTransition { key: TransitionKey, event: Event },
    #[error("{0}")]
    Invalid(String),
}

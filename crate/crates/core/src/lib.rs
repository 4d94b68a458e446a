//! Synthesis and verification of coordination supervisors for discrete event
//! systems under sensor and actuator attacks.
//!
//! The crate is `no_std` and only needs `alloc`. Automata are immutable
//! values; every operation is a pure function of its inputs.
//!
//! * [`ops`]: synchronous product, projection, subset construction, language
//!   comparison and enumeration.
//! * [`attack`]: attacked automata, attacked observations and actuator
//!   pattern bounds.
//! * [`observer`], [`tracker`], [`synthesis`]: state estimates under attack,
//!   the CA-controllability and CA-observability checks and the
//!   estimate-based supervisor.
//! * [`coordination`]: conditional decomposability, coordinator events, local
//!   plants and attacks, and the two-supervisor synthesis pipeline.
//! * [`verify`] and [`sim`]: exact large languages, bounded oracles and a
//!   seeded closed-loop simulator.
#![no_std]

extern crate alloc;

pub mod alphabet;
pub mod attack;
pub mod automaton;
pub mod coordination;
pub mod error;
pub mod fixtures;
pub mod observer;
pub mod ops;
pub mod sim;
pub mod synthesis;
pub mod tracker;
pub mod verdict;
pub mod verify;
pub mod word;

pub use alphabet::{Alphabet, Event, EventAttrs};
pub use attack::{AttackSpec, PatternBounds, TransitionKey};
pub use automaton::{Automaton, AutomatonBuilder, Label, StateId, StateTag, Which};
pub use error::{Error, Result};
pub use observer::{ObserverAutomaton, StateEstimate};
pub use ops::CompareMode;
pub use synthesis::{ControlPattern, SupervisorRealization};
pub use verdict::Verdict;
pub use word::Word;

//! CA-observers: the determinized attacked-observation automaton of a safe
//! sub-automaton, each state carrying its plant state estimate.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Event;
use crate::attack::{build_attacked_automaton, erase_unobservable, AttackSpec};
use crate::automaton::{Automaton, StateId, StateTag};
use crate::error::{Error, Result};
use crate::ops::determinize_with_subsets;
use crate::word::Word;

/// Set of plant states, by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateEstimate(pub BTreeSet<String>);

impl StateEstimate {
    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl fmt::Display for StateEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(q)?;
        }
        f.write_str("}")
    }
}

/// Outcome of an estimate query: observations outside the attacked
/// observation language of the safe behaviour are reported, not rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EstimateResult {
    Estimate(StateEstimate),
    OffDomain,
}

/// Deterministic observer over the locally observable events.
///
/// Invariant: a state is marked iff its estimate is nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObserverAutomaton {
    automaton: Automaton,
    estimates: Vec<StateEstimate>,
}

impl ObserverAutomaton {
    /// Reassembles an observer, e.g. after reading it from a file.
    pub fn from_parts(automaton: Automaton, estimates: Vec<StateEstimate>) -> Result<Self> {
        automaton.require_deterministic()?;
        if estimates.len() != automaton.state_count() {
            return Err(Error::Invalid(format!(
                "observer `{}` has {} states but {} estimates",
                automaton.name(),
                automaton.state_count(),
                estimates.len()
            )));
        }
        for q in automaton.state_ids() {
            if automaton.is_marked(q) == estimates[q.0].is_empty() {
                return Err(Error::Invalid(format!(
                    "observer state `{}` must be marked iff its estimate is nonempty",
                    automaton.state_name(q)
                )));
            }
        }
        Ok(ObserverAutomaton {
            automaton,
            estimates,
        })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn initial(&self) -> StateId {
        self.automaton.initial()
    }

    pub fn estimate_of(&self, x: StateId) -> &StateEstimate {
        &self.estimates[x.0]
    }

    pub fn estimates(&self) -> &[StateEstimate] {
        &self.estimates
    }

    pub fn observes(&self, e: &Event) -> bool {
        self.automaton.alphabet().contains(e)
    }

    /// `ξ(x, e)`; `None` when undefined or `e` is not observed.
    pub fn step(&self, x: StateId, e: &Event) -> Option<StateId> {
        if self.observes(e) {
            self.automaton.step(x, e)
        } else {
            None
        }
    }

    pub fn run(&self, w: &Word) -> Option<StateId> {
        let mut x = self.initial();
        for e in w.iter() {
            x = self.step(x, e)?;
        }
        Some(x)
    }

    /// Whether the observation lies in the attacked observation language of
    /// the safe behaviour (the run exists and ends in a marked state).
    pub fn in_domain(&self, w: &Word) -> Option<StateId> {
        self.run(w).filter(|x| self.automaton.is_marked(*x))
    }
}

/// Splices the attacks into `h`, erases unobservable events and determinizes,
/// keeping `x ∩ Q_H` as the estimate of each subset state `x`. Attack entries
/// on transitions that `h` lacks are ignored.
pub fn build_ca_observer(
    h: &Automaton,
    atk: &AttackSpec,
    observable: &BTreeSet<Event>,
) -> Result<ObserverAutomaton> {
    let atk_h = atk.restrict_to(h);
    let ha = build_attacked_automaton(h, &atk_h)?;
    let eps = erase_unobservable(&ha, observable);
    let det = determinize_with_subsets(&eps);
    let estimates = det
        .subsets
        .iter()
        .map(|x| {
            StateEstimate(
                x.iter()
                    .filter(|q| eps.tag(**q) == StateTag::Plant)
                    .map(|q| String::from(eps.state_name(*q)))
                    .collect(),
            )
        })
        .collect();
    let automaton = det.automaton.renamed(format!("{}_obs", h.name()));
    ObserverAutomaton::from_parts(automaton, estimates)
}

/// `ξ(x0, w) ∩ Q_H`, or [`EstimateResult::OffDomain`].
pub fn state_estimate(obs: &ObserverAutomaton, w: &Word) -> EstimateResult {
    match obs.in_domain(w) {
        Some(x) => EstimateResult::Estimate(obs.estimate_of(x).clone()),
        None => EstimateResult::OffDomain,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::ops::{restrict_to_safe_states, state_set};

    fn est(names: &[&str]) -> EstimateResult {
        EstimateResult::Estimate(StateEstimate(names.iter().map(|s| String::from(*s)).collect()))
    }
    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn safe_del() -> (Automaton, AttackSpec) {
        let (g, atk) = fix_del();
        let h = restrict_to_safe_states(&g, &state_set(&g, &["q0", "q1"]).unwrap()).unwrap();
        (h, atk)
    }

    #[test]
    fn deletion_observer_single_state() {
        let (h, atk) = safe_del();
        let obs = build_ca_observer(&h, &atk, &h.alphabet().observable()).unwrap();
        assert_eq!(obs.automaton().state_count(), 1);
        assert_eq!(obs.automaton().transition_count(), 0);
        assert_eq!(state_estimate(&obs, &w("")), est(&["q0", "q1"]));
        assert_eq!(state_estimate(&obs, &w("b")), EstimateResult::OffDomain);
    }

    #[test]
    fn classical_observer_chain() {
        let h = fix_safe();
        let obs = build_ca_observer(&h, &AttackSpec::none("H"), &h.alphabet().observable()).unwrap();
        assert_eq!(state_estimate(&obs, &w("")), est(&["q0"]));
        assert_eq!(state_estimate(&obs, &w("a")), est(&["q1"]));
    }

    #[test]
    fn confusing_replacement() {
        let (g, atk) = fix_conf();
        let h = restrict_to_safe_states(&g, &state_set(&g, &fix_conf_safe_names()).unwrap()).unwrap();
        let obs = build_ca_observer(&h, &atk, &g.alphabet().observable()).unwrap();
        assert_eq!(state_estimate(&obs, &w("")), est(&["q0"]));
        assert_eq!(state_estimate(&obs, &w("x")), est(&["q1", "q2"]));
        assert_eq!(state_estimate(&obs, &w("x c")), est(&["q3"]));
        assert_eq!(state_estimate(&obs, &w("a")), EstimateResult::OffDomain);
    }

    #[test]
    fn from_parts_checks_marking() {
        let h = fix_safe();
        let obs = build_ca_observer(&h, &AttackSpec::none("H"), &h.alphabet().observable()).unwrap();
        let mut bad = obs.estimates().to_vec();
        bad[0] = StateEstimate::default();
        assert!(ObserverAutomaton::from_parts(obs.automaton().clone(), bad).is_err());
    }
}

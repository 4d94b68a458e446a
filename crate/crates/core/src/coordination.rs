//! Two-component coordination control: conditional decomposability,
//! coordinator events, local plants, local attacks and the synthesis
//! pipeline producing one CA-supervisor per component.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::Event;
use crate::attack::{theta_automaton, AttackSpec, TransitionKey};
use crate::automaton::{Automaton, StateId, Which};
use crate::error::{Error, Result};
use crate::ops::{
    compare_languages, compare_marked_languages, compose_parallel, determinize_with_subsets,
    enumerate_language, erase_events, project, refine_with_spec, restrict_to_safe_states, CompareMode,
};
use crate::synthesis::{
    check_ca_controllability, check_ca_observability, synthesize_ca_supervisor, SupervisorRealization,
};
use crate::verdict::Verdict;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub decomposable: bool,
    /// A string of `P1(K) ∥ P2(K)` outside `K`.
    pub counterexample: Option<Word>,
    pub coordinator_used: BTreeSet<Event>,
}

fn within(a: &Automaton, s: &BTreeSet<Event>) -> BTreeSet<Event> {
    s.iter().filter(|e| a.alphabet().contains(e)).cloned().collect()
}

/// Whether `K = P1(K) ∥ P2(K)` for the projections onto `s1` and `s2`.
pub fn check_conditional_decomposability(
    k: &Automaton,
    s1: &BTreeSet<Event>,
    s2: &BTreeSet<Event>,
) -> Result<DecompositionReport> {
    if let Some(e) = k.alphabet().events().find(|e| !s1.contains(e) && !s2.contains(e)) {
        return Err(Error::Invalid(format!(
            "specification event `{e}` belongs to neither local alphabet"
        )));
    }
    let p1 = project(k, &within(k, s1))?;
    let p2 = project(k, &within(k, s2))?;
    let both = compose_parallel(&p1, &p2)?;
    let v = compare_languages(&both, k, CompareMode::Inclusion)?;
    Ok(DecompositionReport {
        decomposable: v.holds,
        counterexample: v.witness,
        coordinator_used: s1.intersection(s2).cloned().collect(),
    })
}

/// Greedy coordinator extension starting from `s1 ∩ s2`.
pub fn extend_coordinator_alphabet(
    k: &Automaton,
    s1: &BTreeSet<Event>,
    s2: &BTreeSet<Event>,
) -> Result<BTreeSet<Event>> {
    let start = s1.intersection(s2).cloned().collect();
    extend_coordinator_from(k, s1, s2, start)
}

/// Adds events to `sk` until `K` decomposes over `s1 ∪ sk` and `s2 ∪ sk`:
/// each round takes the least event of the counterexample not yet in `sk`,
/// or the least remaining event when the counterexample offers none.
pub fn extend_coordinator_from(
    k: &Automaton,
    s1: &BTreeSet<Event>,
    s2: &BTreeSet<Event>,
    mut sk: BTreeSet<Event>,
) -> Result<BTreeSet<Event>> {
    sk.extend(s1.intersection(s2).cloned());
    let all: BTreeSet<Event> = s1.union(s2).cloned().collect();
    loop {
        let e1: BTreeSet<Event> = s1.union(&sk).cloned().collect();
        let e2: BTreeSet<Event> = s2.union(&sk).cloned().collect();
        let report = check_conditional_decomposability(k, &e1, &e2)?;
        if report.decomposable {
            return Ok(sk);
        }
        let cex = report.counterexample.unwrap_or_default();
        let next = cex
            .iter()
            .filter(|e| !sk.contains(*e))
            .min()
            .or_else(|| all.iter().find(|e| !sk.contains(*e)))
            .cloned();
        match next {
            Some(e) => {
                sk.insert(e);
            }
            None => return Ok(sk),
        }
    }
}

/// `gi ∥ P_k(gj)`.
pub fn build_local_plant(gi: &Automaton, gj: &Automaton, sk: &BTreeSet<Event>) -> Result<Automaton> {
    let shared: BTreeSet<Event> = gi
        .alphabet()
        .events()
        .filter(|e| gj.alphabet().contains(e))
        .cloned()
        .collect();
    if let Some(e) = shared.iter().find(|e| !sk.contains(*e)) {
        return Err(Error::Invalid(format!(
            "shared event `{e}` is missing from the coordinator alphabet"
        )));
    }
    let pj = project(gj, &within(gj, sk))?;
    let local = compose_parallel(gi, &pj)?;
    Ok(local.renamed(format!("{}+k", gi.name())))
}

/// Observer property of the projection onto `sk` with respect to `L(l)`:
/// after any string, every coordinator event the projection allows next can
/// be reached through events outside `sk`.
pub fn check_observer_property(l: &Automaton, sk: &BTreeSet<Event>) -> Result<Verdict> {
    l.require_deterministic()?;
    let keep = within(l, sk);
    let det = determinize_with_subsets(&erase_events(l, &keep)).automaton;
    // Coordinator events reachable from each state through local moves.
    let mut reach_k: Vec<BTreeSet<Event>> = Vec::with_capacity(l.state_count());
    for q in l.state_ids() {
        let mut seen = BTreeSet::from([q]);
        let mut queue = VecDeque::from([q]);
        let mut found = BTreeSet::new();
        while let Some(p) = queue.pop_front() {
            for (lab, t) in l.transitions_from(p) {
                let e = lab.event().expect("deterministic");
                if keep.contains(e) {
                    found.insert(e.clone());
                } else if seen.insert(*t) {
                    queue.push_back(*t);
                }
            }
        }
        reach_k.push(found);
    }
    let start = (l.initial(), det.initial());
    let mut parent: BTreeMap<(StateId, StateId), Option<((StateId, StateId), Event)>> = BTreeMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some((q, x)) = queue.pop_front() {
        for e in det.enabled(x) {
            if !reach_k[q.0].contains(e) {
                let mut rev = Vec::new();
                let mut n = (q, x);
                while let Some(Some((p, a))) = parent.get(&n) {
                    rev.push(a.clone());
                    n = *p;
                }
                rev.reverse();
                return Ok(Verdict::fails(
                    Word::from(rev),
                    Some(e.clone()),
                    format!(
                        "`{e}` continues the projected string but cannot follow from `{}` without another coordinator event",
                        l.state_name(q)
                    ),
                ));
            }
        }
        for (lab, t) in l.transitions_from(q) {
            let e = lab.event().expect("deterministic");
            let nx = if keep.contains(e) {
                det.step(x, e).expect("projection contains the image")
            } else {
                x
            };
            if !parent.contains_key(&(*t, nx)) {
                parent.insert((*t, nx), Some(((q, x), e.clone())));
                queue.push_back((*t, nx));
            }
        }
    }
    Ok(Verdict::holds(format!(
        "the projection of {} onto the coordinator events has the observer property",
        l.name()
    )))
}

/// Local attack specification of `local` induced by an attack on the global
/// plant `global`. Attack automata are projected onto the local alphabet and
/// attacks on non-local events are dropped.
pub fn derive_local_attack(global_atk: &AttackSpec, global: &Automaton, local: &Automaton) -> Result<AttackSpec> {
    derive_traced(global_atk, global, local)?.map_err(|(_, key)| Error::AttackNotLocal(key))
}

/// As [`derive_local_attack`], reporting a non-local attack as the global
/// string whose last step disagrees with an earlier visit of the same local
/// transition.
fn derive_traced(
    global_atk: &AttackSpec,
    global: &Automaton,
    local: &Automaton,
) -> Result<core::result::Result<AttackSpec, (Word, TransitionKey)>> {
    global_atk.validate(global)?;
    local.require_deterministic()?;
    let resolved = global_atk.resolve(global)?;
    let local_events = local.alphabet().event_set();
    let mut decided: BTreeMap<TransitionKey, Option<Automaton>> = BTreeMap::new();
    let start = (global.initial(), local.initial());
    let mut parent: BTreeMap<(StateId, StateId), Option<((StateId, StateId), Event)>> = BTreeMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some((q, r)) = queue.pop_front() {
        for (lab, t) in global.transitions_from(q) {
            let e = lab.event().expect("deterministic");
            let attack = resolved.get(&(q, e.clone()));
            let nr = if local_events.contains(e) {
                let Some(nr) = local.step(r, e) else {
                    let key = TransitionKey::of(global, q, e, *t);
                    return Err(match attack {
                        Some(_) => Error::NoLocalTransition { key, event: e.clone() },
                        None => Error::Invalid(format!(
                            "`{}` cannot follow `{e}` from `{}`",
                            local.name(),
                            local.state_name(r)
                        )),
                    });
                };
                let key = TransitionKey::of(local, r, e, nr);
                let projected = match attack {
                    Some(f) => {
                        let keep = within(f, &local_events);
                        Some(project(f, &keep)?.renamed(f.name()))
                    }
                    None => None,
                };
                match decided.get(&key) {
                    None => {
                        decided.insert(key, projected);
                    }
                    Some(prev) => {
                        let same = match (prev, &projected) {
                            (None, None) => true,
                            (Some(a), Some(b)) => compare_marked_languages(a, b, CompareMode::Equality)?.holds,
                            _ => false,
                        };
                        if !same {
                            let mut rev = alloc::vec![e.clone()];
                            let mut n = (q, r);
                            while let Some(Some((p, a))) = parent.get(&n) {
                                rev.push(a.clone());
                                n = *p;
                            }
                            rev.reverse();
                            return Ok(Err((Word::from(rev), key)));
                        }
                    }
                }
                nr
            } else {
                r
            };
            if !parent.contains_key(&(*t, nr)) {
                parent.insert((*t, nr), Some(((q, r), e.clone())));
                queue.push_back((*t, nr));
            }
        }
    }
    let mut out = AttackSpec::none(local.name());
    for (key, f) in decided {
        if let Some(f) = f {
            out.insert(key, f);
        }
    }
    Ok(Ok(out))
}

/// Bounded check of `Φ_i(P_i(s)) = Φ_i(s)` for every `s` of the global plant
/// up to length `depth`, where `Φ_i` observes the local observable events.
pub fn check_local_attack_consistency(
    global: &Automaton,
    global_atk: &AttackSpec,
    local: &Automaton,
    local_atk: &AttackSpec,
    depth: usize,
) -> Result<Verdict> {
    let observed = local.alphabet().observable();
    let local_events = local.alphabet().event_set();
    for s in enumerate_language(global, depth, Which::Generated) {
        let ps = s.project(|e| local_events.contains(e));
        let lhs = theta_automaton(local, local_atk, &ps)?;
        let rhs = theta_automaton(global, global_atk, &s)?;
        let lhs = project(&lhs, &within(&lhs, &observed))?;
        let rhs = project(&rhs, &within(&rhs, &observed))?;
        let v = compare_marked_languages(&lhs, &rhs, CompareMode::Equality)?;
        if !v.holds {
            return Ok(Verdict::fails(
                s,
                None,
                format!(
                    "local and global attacked observations differ for {}: {}",
                    local.name(),
                    v.detail
                ),
            ));
        }
    }
    Ok(Verdict::holds(format!(
        "local attacked observations of {} agree with the global ones (bounded, depth {depth})",
        local.name()
    )))
}

#[derive(Clone, Debug)]
pub enum SpecSource {
    /// `K` is `L(spec) ∩ L(G1 ∥ G2)`; events outside the spec alphabet are
    /// unconstrained.
    Language(Automaton),
    /// `K` is generated by the listed states of `G1 ∥ G2`, named `(p,r)`.
    SafeStates(BTreeSet<String>),
}

#[derive(Clone, Debug)]
pub enum ProblemAttacks {
    /// Keyed by transitions of `G1 ∥ G2`.
    Global(AttackSpec),
    /// Keyed by transitions of `G1` and `G2`; lifted to the composition.
    Components(AttackSpec, AttackSpec),
}

#[derive(Clone, Debug)]
pub struct CoordinationProblem {
    pub g1: Automaton,
    pub g2: Automaton,
    pub spec: SpecSource,
    /// Initial coordinator alphabet; shared events are always added.
    pub coordinator: BTreeSet<Event>,
    pub extend: bool,
    pub attacks: ProblemAttacks,
    pub consistency_depth: usize,
    /// Synthesize even when a local CA condition fails; the report still
    /// records the failure.
    pub force: bool,
}

impl CoordinationProblem {
    pub fn new(g1: Automaton, g2: Automaton, spec: SpecSource) -> Self {
        let attacks = ProblemAttacks::Components(AttackSpec::none(g1.name()), AttackSpec::none(g2.name()));
        CoordinationProblem {
            g1,
            g2,
            spec,
            coordinator: BTreeSet::new(),
            extend: false,
            attacks,
            consistency_depth: 6,
            force: false,
        }
    }

    pub fn with_coordinator(mut self, sk: BTreeSet<Event>) -> Self {
        self.coordinator = sk;
        self
    }

    pub fn with_extension(mut self, extend: bool) -> Self {
        self.extend = extend;
        self
    }

    pub fn forced(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    pub fn with_attacks(mut self, attacks: ProblemAttacks) -> Self {
        self.attacks = attacks;
        self
    }

    /// The composed plant and its attack specification.
    pub fn global(&self) -> Result<(Automaton, AttackSpec)> {
        let g = compose_parallel(&self.g1, &self.g2)?.renamed(format!("{}||{}", self.g1.name(), self.g2.name()));
        let atk = match &self.attacks {
            ProblemAttacks::Global(a) => {
                let a = a.for_plant(g.name());
                a.validate(&g)?;
                a
            }
            ProblemAttacks::Components(a1, a2) => lift_component_attacks(&g, &self.g1, a1, &self.g2, a2)?,
        };
        Ok((g, atk))
    }
}

fn lift_component_attacks(
    g: &Automaton,
    g1: &Automaton,
    a1: &AttackSpec,
    g2: &Automaton,
    a2: &AttackSpec,
) -> Result<AttackSpec> {
    a1.validate(g1)?;
    a2.validate(g2)?;
    let r1 = a1.resolve(g1)?;
    let r2 = a2.resolve(g2)?;
    // The composed states are named `(p,r)` after the BFS that built them;
    // replay it to recover the components.
    let mut comp: BTreeMap<StateId, (StateId, StateId)> = BTreeMap::new();
    comp.insert(g.initial(), (g1.initial(), g2.initial()));
    let mut queue = VecDeque::from([g.initial()]);
    let mut out = AttackSpec::none(g.name());
    while let Some(q) = queue.pop_front() {
        let (p, r) = comp[&q];
        for (lab, t) in g.transitions_from(q) {
            let e = lab.event().expect("deterministic");
            let in1 = g1.alphabet().contains(e);
            let in2 = g2.alphabet().contains(e);
            let np = if in1 { g1.step(p, e).expect("product move") } else { p };
            let nr = if in2 { g2.step(r, e).expect("product move") } else { r };
            let f1 = if in1 { r1.get(&(p, e.clone())) } else { None };
            let f2 = if in2 { r2.get(&(r, e.clone())) } else { None };
            let f = match (f1, f2) {
                (Some(x), Some(y)) => {
                    if !compare_marked_languages(x, y, CompareMode::Equality)?.holds {
                        return Err(Error::Invalid(format!(
                            "shared event `{e}` is attacked differently in the two components"
                        )));
                    }
                    Some(*x)
                }
                (x, y) => x.or(y).copied(),
            };
            if let Some(f) = f {
                out.insert(TransitionKey::of(g, q, e, *t), f.clone());
            }
            if !comp.contains_key(t) {
                comp.insert(*t, (np, nr));
                queue.push_back(*t);
            }
        }
    }
    Ok(out)
}

/// Everything checked for one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub original_alphabet: BTreeSet<Event>,
    pub extended_alphabet: BTreeSet<Event>,
    pub plant_states: usize,
    pub spec_states: usize,
    pub attacked_transitions: usize,
    pub consistency: Verdict,
    pub controllability: Verdict,
    pub observability: Verdict,
    /// Projection of the other component onto the coordinator events;
    /// advisory only.
    pub observer_property: Verdict,
    /// States of the other component and of its projection.
    pub projection_sizes: (usize, usize),
}

impl LocalReport {
    pub fn passed(&self) -> bool {
        self.consistency.holds && self.controllability.holds && self.observability.holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinationReport {
    pub coordinator_requested: BTreeSet<Event>,
    pub coordinator_extended: bool,
    pub decomposition: DecompositionReport,
    pub local: Vec<LocalReport>,
    pub success: bool,
}

/// One component of a synthesized system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    pub plant: Automaton,
    pub spec: Automaton,
    pub attack: AttackSpec,
    pub supervisor: SupervisorRealization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinatedSystem {
    pub plant: Automaton,
    pub attack: AttackSpec,
    /// Generates `K`.
    pub spec: Automaton,
    pub local: [LocalSystem; 2],
}

#[derive(Clone, Debug)]
pub struct CoordinationOutcome {
    pub report: CoordinationReport,
    pub system: Option<CoordinatedSystem>,
}

/// Runs the whole pipeline; a failed condition yields a report with
/// `success == false` and, unless forced, no system.
pub fn coordination_synthesize(p: &CoordinationProblem) -> Result<CoordinationOutcome> {
    let (g, atk) = p.global()?;
    let k = match &p.spec {
        SpecSource::Language(spec) => refine_with_spec(&g, spec)?.safe_automaton()?,
        SpecSource::SafeStates(names) => {
            let ids = names
                .iter()
                .map(|n| g.state_id(n).ok_or_else(|| Error::UnknownState(n.clone())))
                .collect::<Result<BTreeSet<_>>>()?;
            restrict_to_safe_states(&g, &ids)?
        }
    }
    .renamed("K");
    let s1 = p.g1.alphabet().event_set();
    let s2 = p.g2.alphabet().event_set();
    let mut sk: BTreeSet<Event> = p.coordinator.union(&s1.intersection(&s2).cloned().collect()).cloned().collect();
    let requested = sk.clone();
    if let Some(e) = sk.iter().find(|e| !g.alphabet().contains(e)) {
        return Err(Error::UnknownEvent((*e).clone()));
    }
    if p.extend {
        sk = extend_coordinator_from(&k, &s1, &s2, sk)?;
    }
    let e1: BTreeSet<Event> = s1.union(&sk).cloned().collect();
    let e2: BTreeSet<Event> = s2.union(&sk).cloned().collect();
    let mut decomposition = check_conditional_decomposability(&k, &e1, &e2)?;
    decomposition.coordinator_used = sk.clone();
    let mut report = CoordinationReport {
        coordinator_extended: sk != requested,
        coordinator_requested: requested,
        decomposition,
        local: Vec::new(),
        success: false,
    };
    if !report.decomposition.decomposable {
        return Ok(CoordinationOutcome { report, system: None });
    }
    let comps = [(&p.g1, &p.g2, &s1, &e1), (&p.g2, &p.g1, &s2, &e2)];
    let mut prepared = Vec::new();
    for (gi, gj, si, ei) in comps {
        let local = build_local_plant(gi, gj, &sk)?;
        let pk = project(&k, ei)?;
        let refined = refine_with_spec(&local, &pk)?;
        let plant = refined.plant.clone();
        let h = refined.safe_automaton()?.renamed(format!("{}_spec", gi.name()));
        let (local_atk, consistency) = match derive_traced(&atk, &g, &plant)? {
            Ok(la) => {
                let v = check_local_attack_consistency(&g, &atk, &plant, &la, p.consistency_depth)?;
                (la, v)
            }
            Err((witness, key)) => {
                let detail = format!("the attack seen on local transition {key} depends on the other component");
                (AttackSpec::none(plant.name()), Verdict::fails(witness, None, detail))
            }
        };
        let controllability = check_ca_controllability(&plant, &h, plant.alphabet())?;
        let observability = check_ca_observability(&plant, &h, &local_atk, plant.alphabet())?;
        let sk_j = within(gj, &sk);
        let observer_property = check_observer_property(gj, &sk_j)?;
        let pj_states = project(gj, &sk_j)?.state_count();
        report.local.push(LocalReport {
            original_alphabet: si.clone(),
            extended_alphabet: ei.clone(),
            plant_states: plant.state_count(),
            spec_states: h.state_count(),
            attacked_transitions: local_atk.len(),
            consistency,
            controllability,
            observability,
            observer_property,
            projection_sizes: (gj.state_count(), pj_states),
        });
        prepared.push((plant, h, local_atk));
    }
    let passed = report.local.iter().all(LocalReport::passed);
    let consistent = report.local.iter().all(|l| l.consistency.holds);
    if !(passed || p.force && consistent) {
        return Ok(CoordinationOutcome { report, system: None });
    }
    let mut locals = Vec::new();
    for (plant, h, local_atk) in prepared {
        let mut sup = synthesize_ca_supervisor(&plant, &h, &local_atk, plant.alphabet(), p.force)?;
        sup.name = format!("S_{}", locals.len() + 1);
        locals.push(LocalSystem {
            plant,
            spec: h,
            attack: local_atk,
            supervisor: sup,
        });
    }
    report.success = passed;
    let [l1, l2]: [LocalSystem; 2] = locals.try_into().map_err(|_| Error::Invalid(String::from("two components expected")))?;
    Ok(CoordinationOutcome {
        report,
        system: Some(CoordinatedSystem {
            plant: g,
            attack: atk,
            spec: k,
            local: [l1, l2],
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::ops::prefix_closure_automaton;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn closure(words: &[&str], events: &[&str]) -> Automaton {
        let ws: Vec<Word> = words.iter().map(|s| w(s)).collect();
        prefix_closure_automaton("K", &sigma(events), &ws).unwrap()
    }

    #[test]
    fn shuffle_is_not_decomposable() {
        let k = closure(&["a b"], &["a", "b"]);
        let r = check_conditional_decomposability(&k, &set(&["a"]), &set(&["b"])).unwrap();
        assert!(!r.decomposable);
        assert_eq!(r.counterexample, Some(w("b")));
        assert!(check_conditional_decomposability(&k, &set(&["a", "b"]), &set(&["b"]))
            .unwrap()
            .decomposable);
        let sk = extend_coordinator_alphabet(&k, &set(&["a"]), &set(&["b"])).unwrap();
        assert_eq!(sk, set(&["b"]));
    }

    #[test]
    fn coord_fixture_decomposes() {
        let (_, _, k) = fix_coord();
        let r = check_conditional_decomposability(&k, &set(&["a", "c"]), &set(&["b", "c"])).unwrap();
        assert!(r.decomposable);
        assert_eq!(extend_coordinator_alphabet(&k, &set(&["a", "c"]), &set(&["b", "c"])).unwrap(), set(&["c"]));
    }

    #[test]
    fn local_plant_of_coord() {
        let (g1, g2, _) = fix_coord();
        let l = build_local_plant(&g1, &g2, &set(&["c"])).unwrap();
        let lang = enumerate_language(&l, 4, Which::Generated);
        assert_eq!(lang, ["", "a", "a c"].iter().map(|s| w(s)).collect());
    }

    #[test]
    fn observer_property_examples() {
        let l = closure(&["a b"], &["a", "b"]);
        assert!(check_observer_property(&l, &set(&["a"])).unwrap().holds);
        let l = closure(&["a b", "c d"], &["a", "b", "c", "d"]);
        let v = check_observer_property(&l, &set(&["b", "d"])).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(w("a")));
        assert_eq!(v.witness_event, Some(ev("d")));
        assert!(check_observer_property(&l, &set(&["a", "b", "c", "d"])).unwrap().holds);
    }

    #[test]
    fn coord_pipeline_without_attacks() {
        let (g1, g2, k) = fix_coord();
        let out = coordination_synthesize(&CoordinationProblem::new(g1, g2, SpecSource::Language(k))).unwrap();
        assert!(out.report.success, "{:?}", out.report);
        let sys = out.system.unwrap();
        assert_eq!(enumerate_language(&sys.spec, 5, Which::Generated).len(), 3);
    }

    #[test]
    fn shared_deletion_is_local_in_both() {
        let mut alphabet = sigma(&["a", "b"]);
        alphabet
            .insert(ev("c"), crate::alphabet::EventAttrs::default().sensor_attack())
            .unwrap();
        let g1 = chain("G1", alphabet.restrict(&set(&["a", "c"])), &["p0", "p1", "p2"], &[("p0", "a", "p1"), ("p1", "c", "p2")]);
        let g2 = chain("G2", alphabet.restrict(&set(&["b", "c"])), &["r0", "r1", "r2"], &[("r0", "c", "r1"), ("r1", "b", "r2")]);
        let del1 = attack_language_automaton("D", g1.alphabet(), &[Word::empty()]);
        let del2 = attack_language_automaton("D", g2.alphabet(), &[Word::empty()]);
        let a1 = AttackSpec::none("G1").with(TransitionKey::new("p1", ev("c"), "p2"), del1);
        let a2 = AttackSpec::none("G2").with(TransitionKey::new("r0", ev("c"), "r1"), del2);
        let p = CoordinationProblem::new(g1.clone(), g2.clone(), SpecSource::Language(fix_coord().2))
            .with_attacks(ProblemAttacks::Components(a1, a2));
        let (g, atk) = p.global().unwrap();
        assert_eq!(atk.len(), 1);
        for (gi, gj) in [(&g1, &g2), (&g2, &g1)] {
            let local = build_local_plant(gi, gj, &set(&["c"])).unwrap();
            let la = derive_local_attack(&atk, &g, &local).unwrap();
            assert_eq!(la.len(), 1);
            assert!(check_local_attack_consistency(&g, &atk, &local, &la, 4).unwrap().holds);
        }
    }
}

//! Regular-language operations on [`Automaton`] values: synchronous product,
//! natural projection, subset construction, comparison, enumeration and
//! safe-state restriction. Every operation returns a new value.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, Event};
use crate::automaton::{Automaton, Label, StateId, StateTag, Which};
use crate::error::{Error, Result};
use crate::verdict::Verdict;
use crate::word::Word;

/// Synchronous product `a ∥ b` over the union alphabet. Shared events move
/// both components, private events move one. Only accessible states are
/// built; a state is marked when both components are.
pub fn compose_parallel(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    a.require_deterministic()?;
    b.require_deterministic()?;
    let alphabet = a.alphabet().merge(b.alphabet())?;
    let events: Vec<Event> = alphabet.events().cloned().collect();
    let name = format!("{}||{}", a.name(), b.name());
    let mut builder = Automaton::builder(name, alphabet);
    let mut index: BTreeMap<(StateId, StateId), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();

    let pair_name = |p: StateId, q: StateId| format!("({},{})", a.state_name(p), b.state_name(q));
    let start = (a.initial(), b.initial());
    let i = builder.add_state(
        &pair_name(start.0, start.1),
        a.is_marked(start.0) && b.is_marked(start.1),
        StateTag::Plant,
    )?;
    builder.set_initial(i);
    index.insert(start, i);
    queue.push_back(start);

    while let Some((p, q)) = queue.pop_front() {
        let src = index[&(p, q)];
        for e in &events {
            let in_a = a.alphabet().contains(e);
            let in_b = b.alphabet().contains(e);
            let np = if in_a { a.step(p, e) } else { Some(p) };
            let nq = if in_b { b.step(q, e) } else { Some(q) };
            let (Some(np), Some(nq)) = (np, nq) else {
                continue;
            };
            let dst = match index.get(&(np, nq)) {
                Some(d) => *d,
                None => {
                    let d = builder.add_state(
                        &pair_name(np, nq),
                        a.is_marked(np) && b.is_marked(nq),
                        StateTag::Plant,
                    )?;
                    index.insert((np, nq), d);
                    queue.push_back((np, nq));
                    d
                }
            };
            builder.add_transition(src, Label::Event(e.clone()), dst)?;
        }
    }
    builder.build()
}

/// Natural projection onto `target`: events outside `target` become ε and the
/// result is determinized. Generated and marked languages are both projected.
pub fn project(a: &Automaton, target: &BTreeSet<Event>) -> Result<Automaton> {
    for e in target {
        if !a.alphabet().contains(e) {
            return Err(Error::UnknownEvent(e.clone()));
        }
    }
    let relabeled = erase_events(a, target);
    Ok(determinize(&relabeled).renamed(format!("P({})", a.name())))
}

/// Relabels every transition whose event lies outside `keep` to ε and
/// restricts the alphabet to `keep`.
pub(crate) fn erase_events(a: &Automaton, keep: &BTreeSet<Event>) -> Automaton {
    let alphabet = a.alphabet().restrict(keep);
    a.relabel(alphabet, |l| match l {
        Label::Event(e) if keep.contains(e) => l.clone(),
        _ => Label::Epsilon,
    })
}

/// Result of the subset construction: the deterministic automaton plus the
/// set of source states behind each of its states.
#[derive(Clone, Debug)]
pub struct Determinized {
    pub automaton: Automaton,
    pub subsets: Vec<BTreeSet<StateId>>,
}

pub(crate) fn subset_name(a: &Automaton, set: &BTreeSet<StateId>) -> String {
    let mut s = String::from("{");
    for (i, q) in set.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(a.state_name(*q));
    }
    s.push('}');
    s
}

/// Subset construction with ε-closure (the unobservable reach).
///
/// The initial subset is the closure of the initial state, a successor
/// subset is the closure of the one-step successors, and a subset is marked
/// iff it contains a marked state. Subsets are named by their sorted member
/// names, e.g. `{q0,q1}`.
pub fn determinize_with_subsets(a: &Automaton) -> Determinized {
    let events: Vec<Event> = a.alphabet().events().cloned().collect();
    let mut builder = Automaton::builder(a.name().to_string(), a.alphabet().clone());
    let mut index: BTreeMap<BTreeSet<StateId>, usize> = BTreeMap::new();
    let mut found: Vec<BTreeSet<StateId>> = Vec::new();
    let mut queue = VecDeque::new();

    let add = |builder: &mut crate::automaton::AutomatonBuilder,
                   set: BTreeSet<StateId>,
                   found: &mut Vec<BTreeSet<StateId>>,
                   index: &mut BTreeMap<BTreeSet<StateId>, usize>,
                   queue: &mut VecDeque<BTreeSet<StateId>>|
     -> usize {
        if let Some(i) = index.get(&set) {
            return *i;
        }
        let marked = set.iter().any(|q| a.is_marked(*q));
        let i = builder
            .add_state(&subset_name(a, &set), marked, StateTag::Plant)
            .expect("subset names are unique");
        index.insert(set.clone(), i);
        found.push(set.clone());
        queue.push_back(set);
        i
    };

    let init = a.epsilon_closure(&[a.initial()].into_iter().collect());
    let i0 = add(&mut builder, init, &mut found, &mut index, &mut queue);
    builder.set_initial(i0);

    while let Some(set) = queue.pop_front() {
        let src = index[&set];
        for e in &events {
            let label = Label::Event(e.clone());
            let step: BTreeSet<StateId> = set
                .iter()
                .flat_map(|q| a.successors(*q, &label))
                .collect();
            if step.is_empty() {
                continue;
            }
            let next = a.epsilon_closure(&step);
            let dst = add(&mut builder, next, &mut found, &mut index, &mut queue);
            builder
                .add_transition(src, label, dst)
                .expect("event drawn from alphabet");
        }
    }

    let automaton = builder.build().expect("initial state set");
    // Re-key the subsets by the canonical ids of the built automaton.
    let mut subsets = alloc::vec![BTreeSet::new(); automaton.state_count()];
    for set in found {
        let id = automaton
            .state_id(&subset_name(a, &set))
            .expect("state was added");
        subsets[id.0] = set;
    }
    Determinized { automaton, subsets }
}

pub fn determinize(a: &Automaton) -> Automaton {
    determinize_with_subsets(a).automaton
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMode {
    Equality,
    Inclusion,
}

/// Compares the generated languages of two deterministic automata over the
/// union of their alphabets. On failure the witness is the shortest (then
/// lexicographically least) string in the symmetric difference, or in
/// `L(a) - L(b)` for inclusion.
pub fn compare_languages(a: &Automaton, b: &Automaton, mode: CompareMode) -> Result<Verdict> {
    compare_impl(a, b, mode, Which::Generated)
}

/// As [`compare_languages`] but on marked languages.
pub fn compare_marked_languages(
    a: &Automaton,
    b: &Automaton,
    mode: CompareMode,
) -> Result<Verdict> {
    compare_impl(a, b, mode, Which::Marked)
}

fn compare_impl(a: &Automaton, b: &Automaton, mode: CompareMode, which: Which) -> Result<Verdict> {
    a.require_deterministic()?;
    b.require_deterministic()?;
    let events: BTreeSet<Event> = a.alphabet().events().chain(b.alphabet().events()).cloned().collect();
    type Node = (Option<StateId>, Option<StateId>);

    let accepting = |n: &Node| -> (bool, bool) {
        let fa = n.0.is_some_and(|q| which == Which::Generated || a.is_marked(q));
        let fb = n.1.is_some_and(|q| which == Which::Generated || b.is_marked(q));
        (fa, fb)
    };
    let bad = |n: &Node| -> bool {
        let (fa, fb) = accepting(n);
        match mode {
            CompareMode::Equality => fa != fb,
            CompareMode::Inclusion => fa && !fb,
        }
    };

    let start: Node = (Some(a.initial()), Some(b.initial()));
    let mut parent: BTreeMap<Node, Option<(Node, Event)>> = BTreeMap::new();
    parent.insert(start, None);
    let rebuild = |parent: &BTreeMap<Node, Option<(Node, Event)>>, mut n: Node| -> Word {
        let mut rev = Vec::new();
        while let Some(Some((p, e))) = parent.get(&n) {
            rev.push(e.clone());
            n = *p;
        }
        rev.reverse();
        Word::from(rev)
    };
    let describe = |w: &Word| -> String {
        let (ia, ib) = (
            accepts_det(a, w, which),
            accepts_det(b, w, which),
        );
        format!(
            "\"{w}\" is {} by {} but {} by {}",
            if ia { "accepted" } else { "rejected" },
            a.name(),
            if ib { "accepted" } else { "rejected" },
            b.name()
        )
    };

    if bad(&start) {
        let w = Word::empty();
        let d = describe(&w);
        return Ok(Verdict::fails(w, None, d));
    }
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        for e in &events {
            let na = node.0.and_then(|q| {
                if a.alphabet().contains(e) {
                    a.step(q, e)
                } else {
                    None
                }
            });
            let nb = node.1.and_then(|q| {
                if b.alphabet().contains(e) {
                    b.step(q, e)
                } else {
                    None
                }
            });
            let next: Node = (na, nb);
            if next == (None, None) || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((node, e.clone())));
            if bad(&next) {
                let w = rebuild(&parent, next);
                let d = describe(&w);
                return Ok(Verdict::fails(w, None, d));
            }
            queue.push_back(next);
        }
    }
    Ok(Verdict::holds(match mode {
        CompareMode::Equality => format!("languages of {} and {} are equal", a.name(), b.name()),
        CompareMode::Inclusion => format!("language of {} is included in {}", a.name(), b.name()),
    }))
}

fn accepts_det(a: &Automaton, w: &Word, which: Which) -> bool {
    match a.run(a.initial(), w.iter()) {
        Some(q) => which == Which::Generated || a.is_marked(q),
        None => false,
    }
}

/// All strings of length at most `max_len` in the chosen language, in
/// shortest-first lexicographic order. Works on nondeterministic input.
pub fn enumerate_language(a: &Automaton, max_len: usize, which: Which) -> BTreeSet<Word> {
    let events: Vec<Event> = a.alphabet().events().cloned().collect();
    let mut out = BTreeSet::new();
    let init = a.epsilon_closure(&[a.initial()].into_iter().collect());
    let mut frontier: Vec<(Word, BTreeSet<StateId>)> = alloc::vec![(Word::empty(), init)];
    for depth in 0..=max_len {
        let mut next = Vec::new();
        for (w, set) in frontier {
            let keep = match which {
                Which::Generated => true,
                Which::Marked => set.iter().any(|q| a.is_marked(*q)),
            };
            if keep {
                out.insert(w.clone());
            }
            if depth == max_len {
                continue;
            }
            for e in &events {
                let label = Label::Event(e.clone());
                let step: BTreeSet<StateId> =
                    set.iter().flat_map(|q| a.successors(*q, &label)).collect();
                if !step.is_empty() {
                    next.push((w.pushed(e.clone()), a.epsilon_closure(&step)));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Membership test respecting ε moves. Events outside the alphabet are
/// rejected by name.
pub fn accepts(a: &Automaton, s: &Word, which: Which) -> Result<bool> {
    for e in s.iter() {
        if !a.alphabet().contains(e) {
            return Err(Error::UnknownEvent(e.clone()));
        }
    }
    let mut set = a.epsilon_closure(&[a.initial()].into_iter().collect());
    for e in s.iter() {
        let label = Label::Event(e.clone());
        let step: BTreeSet<StateId> = set.iter().flat_map(|q| a.successors(*q, &label)).collect();
        if step.is_empty() {
            return Ok(false);
        }
        set = a.epsilon_closure(&step);
    }
    Ok(match which {
        Which::Generated => true,
        Which::Marked => set.iter().any(|q| a.is_marked(*q)),
    })
}

/// Resolves state names to ids.
pub fn state_set(g: &Automaton, names: &[&str]) -> Result<BTreeSet<StateId>> {
    names
        .iter()
        .map(|n| g.state_id(n).ok_or_else(|| Error::UnknownState(n.to_string())))
        .collect()
}

/// The sub-automaton on `safe`: safe states and the transitions between them.
pub fn restrict_to_safe_states(g: &Automaton, safe: &BTreeSet<StateId>) -> Result<Automaton> {
    if let Some(q) = safe.iter().find(|q| q.0 >= g.state_count()) {
        return Err(Error::UnknownState(format!("#{}", q.0)));
    }
    if !safe.contains(&g.initial()) {
        return Err(Error::UnsafeInitial(g.state_name(g.initial()).to_string()));
    }
    let mut builder = Automaton::builder(format!("{}_H", g.name()), g.alphabet().clone());
    let mut map = BTreeMap::new();
    for q in safe {
        let s = g.state(*q);
        map.insert(*q, builder.add_state(&s.name, s.marked, s.tag)?);
    }
    builder.set_initial(map[&g.initial()]);
    for (q, l, t) in g.transitions() {
        if let (Some(s), Some(d)) = (map.get(&q), map.get(&t)) {
            builder.add_transition(*s, l.clone(), *d)?;
        }
    }
    builder.build()
}

/// A plant refined by a specification automaton so that the specification
/// becomes a safe-state set.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub plant: Automaton,
    pub safe: BTreeSet<StateId>,
    /// Original plant state behind each refined state.
    pub origin: Vec<StateId>,
}

impl Refinement {
    /// The trivial refinement of a plant that already carries a safe set.
    pub fn identity(g: &Automaton, safe: BTreeSet<StateId>) -> Refinement {
        Refinement {
            plant: g.clone(),
            safe,
            origin: g.state_ids().collect(),
        }
    }

    pub fn safe_automaton(&self) -> Result<Automaton> {
        restrict_to_safe_states(&self.plant, &self.safe)
    }
}

/// Product of a deterministic plant with a deterministic specification,
/// completed by a sink. States whose specification component is not the sink
/// are safe, so the safe sub-automaton generates `L(spec) ∩ L(g)`. Events
/// outside the specification alphabet are unconstrained.
pub fn refine_with_spec(g: &Automaton, spec: &Automaton) -> Result<Refinement> {
    g.require_deterministic()?;
    spec.require_deterministic()?;
    let events: Vec<Event> = g.alphabet().events().cloned().collect();
    let mut builder = Automaton::builder(g.name().to_string(), g.alphabet().clone());
    let mut index: BTreeMap<(StateId, Option<StateId>), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let name = |q: StateId, s: Option<StateId>| match s {
        Some(s) => format!("({},{})", g.state_name(q), spec.state_name(s)),
        None => format!("({},⊥)", g.state_name(q)),
    };
    let start = (g.initial(), Some(spec.initial()));
    let i = builder.add_state(&name(start.0, start.1), g.is_marked(start.0), g.tag(start.0))?;
    builder.set_initial(i);
    index.insert(start, i);
    queue.push_back(start);
    while let Some((q, s)) = queue.pop_front() {
        let src = index[&(q, s)];
        for e in &events {
            let Some(nq) = g.step(q, e) else { continue };
            let ns = match s {
                Some(x) if spec.alphabet().contains(e) => spec.step(x, e),
                other => other,
            };
            let dst = match index.get(&(nq, ns)) {
                Some(d) => *d,
                None => {
                    let d = builder.add_state(&name(nq, ns), g.is_marked(nq), g.tag(nq))?;
                    index.insert((nq, ns), d);
                    queue.push_back((nq, ns));
                    d
                }
            };
            builder.add_transition(src, Label::Event(e.clone()), dst)?;
        }
    }
    let plant = builder.build()?;
    let mut origin = alloc::vec![StateId(0); plant.state_count()];
    let mut safe = BTreeSet::new();
    for ((q, s), _) in index {
        let id = plant.state_id(&name(q, s)).expect("state was added");
        origin[id.0] = q;
        if s.is_some() {
            safe.insert(id);
        }
    }
    Ok(Refinement { plant, safe, origin })
}

/// An automaton generating exactly the prefix closure of `words`, over
/// `alphabet`. Convenient for building specifications in code.
pub fn prefix_closure_automaton(
    name: &str,
    alphabet: &Alphabet,
    words: &[Word],
) -> Result<Automaton> {
    let mut builder = Automaton::builder(name.to_string(), alphabet.clone());
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    let root = builder.add_state("n0", true, StateTag::Plant)?;
    builder.set_initial(root);
    index.insert(Word::empty(), root);
    for w in words {
        let mut cur = Word::empty();
        for e in w.iter() {
            let next = cur.pushed(e.clone());
            if !index.contains_key(&next) {
                let id = builder.add_state(&format!("n{}", index.len()), true, StateTag::Plant)?;
                builder.add_transition(index[&cur], Label::Event(e.clone()), id)?;
                index.insert(next.clone(), id);
            }
            cur = next;
        }
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn words(list: &[&str]) -> BTreeSet<Word> {
        list.iter().map(|s| Word::parse(s).unwrap()).collect()
    }

    fn ab_closure() -> Automaton {
        prefix_closure_automaton("K", &sigma_ab(), &[Word::parse("a b").unwrap()]).unwrap()
    }

    #[test]
    fn compose_disjoint_is_shuffle() {
        let a = prefix_closure_automaton("A", &sigma(&["a"]), &[Word::parse("a").unwrap()]).unwrap();
        let b = prefix_closure_automaton("B", &sigma(&["b"]), &[Word::parse("b").unwrap()]).unwrap();
        let ab = compose_parallel(&a, &b).unwrap();
        assert_eq!(
            enumerate_language(&ab, 4, Which::Generated),
            words(&["", "a", "b", "a b", "b a"])
        );
    }

    #[test]
    fn compose_idempotent() {
        let g = fix_lin();
        let gg = compose_parallel(&g, &g).unwrap();
        assert!(compare_languages(&g, &gg, CompareMode::Equality).unwrap().holds);
    }

    #[test]
    fn compose_fix_coord() {
        let (g1, g2, _) = fix_coord();
        let g = compose_parallel(&g1, &g2).unwrap();
        assert_eq!(
            enumerate_language(&g, 5, Which::Generated),
            words(&["", "a", "a c", "a c b"])
        );
    }

    #[test]
    fn compose_attribute_conflict() {
        let a = prefix_closure_automaton("A", &sigma(&["c"]), &[]).unwrap();
        let unc = Alphabet::new()
            .with(ev("c"), crate::alphabet::EventAttrs::default().uncontrollable())
            .unwrap();
        let b = prefix_closure_automaton("B", &unc, &[]).unwrap();
        assert_eq!(
            compose_parallel(&a, &b).unwrap_err(),
            Error::AttributeConflict(ev("c"))
        );
    }

    #[test]
    fn project_examples() {
        let g = fix_lin();
        let pa = project(&g, &set(&["a"])).unwrap();
        assert_eq!(enumerate_language(&pa, 3, Which::Generated), words(&["", "a"]));
        let pe = project(&g, &BTreeSet::new()).unwrap();
        assert_eq!(enumerate_language(&pe, 3, Which::Generated), words(&[""]));
        let pab = project(&g, &set(&["a", "b"])).unwrap();
        assert!(compare_languages(&g, &pab, CompareMode::Equality).unwrap().holds);
        assert!(project(&g, &set(&["z"])).is_err());
    }

    #[test]
    fn determinize_epsilon_chain() {
        let mut b = Automaton::builder("e", sigma(&["a"]));
        let q0 = b.add_state("q0", true, StateTag::Plant).unwrap();
        let q1 = b.add_state("q1", true, StateTag::Plant).unwrap();
        let q2 = b.add_state("q2", true, StateTag::Plant).unwrap();
        b.set_initial(q0);
        b.add_transition(q0, Label::Epsilon, q1).unwrap();
        b.add_transition(q1, Label::Event(ev("a")), q2).unwrap();
        let d = determinize_with_subsets(&b.build().unwrap());
        let init = d.automaton.initial();
        assert_eq!(d.automaton.state_name(init), "{q0,q1}");
        assert_eq!(d.subsets[init.0].len(), 2);
        let next = d.automaton.step(init, &ev("a")).unwrap();
        assert_eq!(d.automaton.state_name(next), "{q2}");
        assert_eq!(d.automaton.transition_count(), 1);
    }

    #[test]
    fn determinize_deterministic_is_isomorphic() {
        let g = fix_lin();
        let d = determinize(&g);
        assert_eq!(d.state_count(), 3);
        assert_eq!(d.transition_count(), 2);
        assert!(compare_marked_languages(&g, &d, CompareMode::Equality).unwrap().holds);
    }

    #[test]
    fn compare_examples() {
        let k = ab_closure();
        let a = prefix_closure_automaton("A", &sigma(&["a"]), &[Word::parse("a").unwrap()]).unwrap();
        let b = prefix_closure_automaton("B", &sigma(&["b"]), &[Word::parse("b").unwrap()]).unwrap();
        let shuffle = compose_parallel(&a, &b).unwrap();
        assert!(compare_languages(&k, &k, CompareMode::Equality).unwrap().holds);
        let v = compare_languages(&k, &shuffle, CompareMode::Equality).unwrap();
        assert!(!v.holds);
        // "b" is the shortest string of the shuffle outside K.
        assert_eq!(v.witness.unwrap().to_string(), "b");
        assert!(compare_languages(&k, &shuffle, CompareMode::Inclusion).unwrap().holds);
        let back = compare_languages(&shuffle, &k, CompareMode::Inclusion).unwrap();
        assert_eq!(back.witness.unwrap().to_string(), "b");
    }

    #[test]
    fn compare_prefers_lexicographic_among_shortest() {
        // L1 = {ε, a, b}, L2 = {ε}: both a and b distinguish; a wins.
        let l1 = prefix_closure_automaton(
            "L1",
            &sigma_ab(),
            &[Word::parse("a").unwrap(), Word::parse("b").unwrap()],
        )
        .unwrap();
        let l2 = prefix_closure_automaton("L2", &sigma_ab(), &[]).unwrap();
        let v = compare_languages(&l2, &l1, CompareMode::Equality).unwrap();
        assert_eq!(v.witness.unwrap().to_string(), "a");
    }

    #[test]
    fn enumerate_examples() {
        let g = fix_lin();
        assert_eq!(enumerate_language(&g, 1, Which::Generated), words(&["", "a"]));
        assert_eq!(enumerate_language(&g, 5, Which::Generated), words(&["", "a", "a b"]));
        let f = attack_language_automaton("F", &sigma_ab(), &[Word::empty()]);
        assert_eq!(enumerate_language(&f, 3, Which::Marked), words(&[""]));
    }

    #[test]
    fn accepts_examples() {
        let g = fix_lin();
        let w = |s: &str| Word::parse(s).unwrap();
        assert!(accepts(&g, &w("a b"), Which::Generated).unwrap());
        assert!(!accepts(&g, &w("b a"), Which::Generated).unwrap());
        let h = fix_safe();
        assert!(!accepts(&h, &w("a b"), Which::Generated).unwrap());
        assert_eq!(
            accepts(&g, &w("a z"), Which::Generated),
            Err(Error::UnknownEvent(ev("z")))
        );
    }

    #[test]
    fn restrict_examples() {
        let g = fix_lin();
        let h = restrict_to_safe_states(&g, &state_set(&g, &["q0", "q1"]).unwrap()).unwrap();
        assert_eq!(enumerate_language(&h, 4, Which::Generated), words(&["", "a"]));
        let all = restrict_to_safe_states(&g, &g.state_ids().collect()).unwrap();
        assert!(compare_languages(&g, &all, CompareMode::Equality).unwrap().holds);
        let (conf, _) = fix_conf();
        let hc = restrict_to_safe_states(&conf, &state_set(&conf, &["q0", "q1", "q2", "q3"]).unwrap())
            .unwrap();
        assert_eq!(
            enumerate_language(&hc, 4, Which::Generated),
            words(&["", "a", "b", "a c"])
        );
        assert_eq!(
            restrict_to_safe_states(&g, &state_set(&g, &["q1"]).unwrap()),
            Err(Error::UnsafeInitial("q0".into()))
        );
    }

    #[test]
    fn refinement_realizes_spec() {
        let g = fix_lin();
        let spec = prefix_closure_automaton("K", &sigma_ab(), &[Word::parse("a").unwrap()]).unwrap();
        let r = refine_with_spec(&g, &spec).unwrap();
        assert!(compare_languages(&g, &r.plant, CompareMode::Equality).unwrap().holds);
        let h = r.safe_automaton().unwrap();
        assert_eq!(enumerate_language(&h, 4, Which::Generated), words(&["", "a"]));
        for q in r.plant.state_ids() {
            let name = r.plant.state_name(q);
            assert!(name.starts_with(&format!("({},", g.state_name(r.origin[q.0]))));
        }
    }
}

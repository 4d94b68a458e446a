//! Seeded closed-loop simulation of supervised plants against a sampling
//! attacker.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Event;
use crate::attack::{actuator_pattern_bounds, AttackSpec};
use crate::automaton::{Automaton, Label, StateId};
use crate::error::{Error, Result};
use crate::synthesis::{ControlPattern, SupervisorRealization};
use crate::tracker::ObsPoint;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackerMode {
    /// Attack strings and tampered patterns drawn uniformly.
    Random,
    /// Patterns tampered to their upper bound; among several sampled attack
    /// strings, the one leaving the most events enabled is used.
    Maximal,
}

impl fmt::Display for AttackerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackerMode::Random => "random",
            AttackerMode::Maximal => "maximal",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub runs: usize,
    pub depth: usize,
    pub seed: u64,
    pub attacker: AttackerMode,
    /// Probability of stopping at each marked state of an attack automaton.
    pub damping: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            runs: 1000,
            depth: 20,
            seed: 0,
            attacker: AttackerMode::Random,
            damping: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub run: usize,
    /// Executed string, ending with the first event leaving the specification.
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub event: Event,
    /// Per supervisor, the observation it received for this step.
    pub observed: Vec<Word>,
    /// Per supervisor, the commanded and the tampered pattern before the step.
    pub patterns: Vec<(ControlPattern, ControlPattern)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunTrace {
    pub steps: Vec<TraceStep>,
}

impl RunTrace {
    pub fn word(&self) -> Word {
        self.steps.iter().map(|s| s.event.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub config: SimConfig,
    pub violations: Vec<Violation>,
    /// Distinct executed strings, counting every prefix.
    pub coverage: usize,
    pub longest: usize,
}

impl fmt::Display for SimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "runs: {}", self.config.runs)?;
        writeln!(f, "depth: {}", self.config.depth)?;
        writeln!(f, "seed: {}", self.config.seed)?;
        writeln!(f, "attacker: {}", self.config.attacker)?;
        writeln!(f, "coverage: {}", self.coverage)?;
        writeln!(f, "longest: {}", self.longest)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "violation: run {} \"{}\"", v.run, v.word)?;
        }
        Ok(())
    }
}

struct Sampler<'a> {
    f: &'a Automaton,
    live: BTreeSet<StateId>,
}

impl<'a> Sampler<'a> {
    fn new(f: &'a Automaton) -> Self {
        Sampler {
            f,
            live: f.coaccessible(),
        }
    }

    fn shortest_finish(&self, from: StateId) -> Word {
        let mut parent: BTreeMap<StateId, Option<(StateId, Event)>> = BTreeMap::new();
        parent.insert(from, None);
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            if self.f.is_marked(s) {
                let mut rev = Vec::new();
                let mut n = s;
                while let Some(Some((p, e))) = parent.get(&n) {
                    rev.push(e.clone());
                    n = *p;
                }
                rev.reverse();
                return Word::from(rev);
            }
            for (l, t) in self.f.transitions_from(s) {
                if let Label::Event(e) = l {
                    if !parent.contains_key(t) {
                        parent.insert(*t, Some((s, e.clone())));
                        queue.push_back(*t);
                    }
                }
            }
        }
        Word::empty()
    }

    fn sample(&self, rng: &mut ChaCha8Rng, damping: f64) -> Word {
        const CAP: usize = 64;
        let mut s = self.f.initial();
        let mut out = Word::empty();
        loop {
            let options: Vec<(&Event, StateId)> = self
                .f
                .transitions_from(s)
                .iter()
                .filter(|(_, t)| self.live.contains(t))
                .filter_map(|(l, t)| l.event().map(|e| (e, *t)))
                .collect();
            if self.f.is_marked(s) && (options.is_empty() || rng.random_bool(damping)) {
                return out;
            }
            if out.len() >= CAP {
                return out.concat(&self.shortest_finish(s));
            }
            let (e, t) = options[rng.random_range(0..options.len())];
            out.push(e.clone());
            s = t;
        }
    }
}

fn advance(sup: &SupervisorRealization, p: ObsPoint, w: &Word) -> ObsPoint {
    w.iter().fold(p, |p, e| match p {
        ObsPoint::State(x) if sup.observer().observes(e) => {
            sup.observer().step(x, e).map_or(ObsPoint::Off, ObsPoint::State)
        }
        other => other,
    })
}

fn seen_by(sup: &SupervisorRealization, w: &Word) -> Word {
    w.project(|e| sup.observer().observes(e))
}

/// Runs `cfg.runs` independent episodes of the plant `g` under the
/// conjunction of `sups`, attacked by `atk`, checking each executed string
/// against the language generated by `spec`.
pub fn simulate_closed_loop(
    g: &Automaton,
    sups: &[&SupervisorRealization],
    atk: &AttackSpec,
    spec: &Automaton,
    cfg: &SimConfig,
) -> Result<SimReport> {
    simulate_with_traces(g, sups, atk, spec, cfg, 0).map(|(r, _)| r)
}

/// As [`simulate_closed_loop`], also returning the traces of the first
/// `keep` runs.
pub fn simulate_with_traces(
    g: &Automaton,
    sups: &[&SupervisorRealization],
    atk: &AttackSpec,
    spec: &Automaton,
    cfg: &SimConfig,
    keep: usize,
) -> Result<(SimReport, Vec<RunTrace>)> {
    g.require_deterministic()?;
    spec.require_deterministic()?;
    if !(0.0..=1.0).contains(&cfg.damping) {
        return Err(Error::Invalid(String::from("damping must lie in [0, 1]")));
    }
    atk.validate(g)?;
    let resolved = atk.resolve(g)?;
    let samplers: BTreeMap<(StateId, Event), Sampler> =
        resolved.iter().map(|(k, f)| (k.clone(), Sampler::new(f))).collect();
    let mut executed: BTreeSet<Word> = BTreeSet::new();
    let mut violations = Vec::new();
    let mut traces = Vec::new();
    let mut longest = 0;
    for run in 0..cfg.runs {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(run as u64);
        let mut q = g.initial();
        let mut k = Some(spec.initial());
        let mut points: Vec<ObsPoint> = sups.iter().map(|s| ObsPoint::State(s.observer().initial())).collect();
        let mut trace = RunTrace::default();
        let mut word = Word::empty();
        for _ in 0..cfg.depth {
            let mut patterns = Vec::with_capacity(sups.len());
            for (s, p) in sups.iter().zip(&points) {
                let commanded = s.pattern_at(*p).clone();
                let bounds = actuator_pattern_bounds(commanded.events(), s.alphabet())?;
                let tampered = match cfg.attacker {
                    AttackerMode::Maximal => bounds.upper.clone(),
                    AttackerMode::Random => {
                        let mut t = bounds.lower.clone();
                        for e in bounds.upper.difference(&bounds.lower) {
                            if rng.random_bool(0.5) {
                                t.insert(e.clone());
                            }
                        }
                        t
                    }
                };
                patterns.push((commanded, ControlPattern(tampered)));
            }
            let enabled: Vec<(Event, StateId)> = g
                .transitions_from(q)
                .iter()
                .filter_map(|(l, t)| l.event().map(|e| (e.clone(), *t)))
                .filter(|(e, _)| {
                    sups.iter().zip(&patterns).all(|(s, (_, tampered))| match s.alphabet().attrs(e) {
                        None => true,
                        Some(a) => !a.controllable || tampered.contains(e),
                    })
                })
                .collect();
            if enabled.is_empty() {
                break;
            }
            let (e, t) = enabled[rng.random_range(0..enabled.len())].clone();
            let observation = match samplers.get(&(q, e.clone())) {
                None => Word::from(alloc::vec![e.clone()]),
                Some(sampler) => match cfg.attacker {
                    AttackerMode::Random => sampler.sample(&mut rng, cfg.damping),
                    AttackerMode::Maximal => {
                        let mut best: Option<(usize, Word)> = None;
                        for _ in 0..8 {
                            let cand = sampler.sample(&mut rng, cfg.damping);
                            let score: usize = sups
                                .iter()
                                .zip(&points)
                                .map(|(s, p)| s.pattern_at(advance(s, *p, &cand)).events().len())
                                .sum();
                            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                                best = Some((score, cand));
                            }
                        }
                        best.expect("sampled").1
                    }
                },
            };
            for (s, p) in sups.iter().zip(points.iter_mut()) {
                *p = advance(s, *p, &observation);
            }
            word.push(e.clone());
            executed.insert(word.clone());
            trace.steps.push(TraceStep {
                event: e.clone(),
                observed: sups.iter().map(|s| seen_by(s, &observation)).collect(),
                patterns,
            });
            k = k.and_then(|s| if spec.alphabet().contains(&e) { spec.step(s, &e) } else { Some(s) });
            q = t;
            if k.is_none() {
                violations.push(Violation {
                    run,
                    word: word.clone(),
                });
                break;
            }
        }
        longest = longest.max(word.len());
        if run < keep {
            traces.push(trace);
        }
    }
    Ok((
        SimReport {
            config: cfg.clone(),
            violations,
            coverage: executed.len(),
            longest,
        },
        traces,
    ))
}

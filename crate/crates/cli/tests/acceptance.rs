//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use desguard::{parse_model, serialize_model};
use desguard_core::attack::{build_attacked_automaton, erase_unobservable};
use desguard_core::coordination::*;
use desguard_core::fixtures::*;
use desguard_core::observer::{build_ca_observer, state_estimate, EstimateResult};
use desguard_core::ops::{compare_languages, enumerate_language, prefix_closure_automaton, restrict_to_safe_states, state_set};
use desguard_core::sim::{simulate_closed_loop, AttackerMode, SimConfig};
use desguard_core::synthesis::{check_ca_controllability, check_ca_observability, synthesize_ca_supervisor};
use desguard_core::verify::{large_language, large_language_bounded, verify_theorems};
use desguard_core::{AttackSpec, Automaton, CompareMode, Event, SupervisorRealization, TransitionKey, Which, Word};
use desguard_testkit::{gen, oracle, rng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn safe_part(g: &Automaton, names: &[&str]) -> Automaton {
    restrict_to_safe_states(g, &state_set(g, names).unwrap()).unwrap()
}

fn short(set: BTreeSet<Word>, n: usize) -> BTreeSet<Word> {
    set.into_iter().filter(|w| w.len() <= n).collect()
}

/// FIX-LIN, FIX-SAFE, FIX-DEL, FIX-CONF and FIX-LIN with `A = {a, aa}`.
fn attacked_fixtures() -> Vec<(&'static str, Automaton, AttackSpec)> {
    let (gd, del) = fix_del();
    let (gc, conf) = fix_conf();
    let gs = fix_lin_sensor();
    let f = attack_language_automaton("F", gs.alphabet(), &[w("a"), w("a a")]);
    let ins = AttackSpec::none("G").with(TransitionKey::new("q0", ev("a"), "q1"), f);
    vec![
        ("FIX-LIN", fix_lin(), AttackSpec::none("G")),
        ("FIX-SAFE", fix_safe(), AttackSpec::none("H")),
        ("FIX-DEL", gd, del),
        ("FIX-CONF", gc, conf),
        ("FIX-LIN+{a,aa}", gs, ins),
    ]
}

fn random_instances(n: u64) -> Vec<gen::Instance> {
    (0..n)
        .map(|seed| gen::random_instance(&mut rng(seed), 8, &["a", "b", "c", "d"]))
        .collect()
}

const DEPTH: usize = 6;

fn attacked_language_identity() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(String, Automaton, AttackSpec)> =
        attacked_fixtures().into_iter().map(|(n, g, a)| (n.to_string(), g, a)).collect();
    cases.extend(random_instances(100).into_iter().enumerate().map(|(i, x)| (format!("seed {i}"), x.g, x.atk)));
    for (name, g, atk) in &cases {
        let ga = build_attacked_automaton(g, atk).unwrap();
        let direct = short(oracle::attacked_language(g, atk, g.state_count()), DEPTH);
        ensure(enumerate_language(&ga, DEPTH, Which::Marked) == direct, || format!("{name}: L_m(G^a) differs"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("{} instances, {:.2}s", cases.len(), t.as_secs_f64()))
}

fn observation_identity() -> Outcome {
    let mut cases: Vec<(String, Automaton, AttackSpec)> =
        attacked_fixtures().into_iter().map(|(n, g, a)| (n.to_string(), g, a)).collect();
    cases.extend(random_instances(100).into_iter().enumerate().map(|(i, x)| (format!("seed {i}"), x.g, x.atk)));
    for (name, g, atk) in &cases {
        let observable = g.alphabet().observable();
        let eps = erase_unobservable(&build_attacked_automaton(g, atk).unwrap(), &observable);
        let direct = short(oracle::observed_language(g, atk, g.state_count(), &observable), DEPTH);
        ensure(enumerate_language(&eps, DEPTH, Which::Marked) == direct, || format!("{name}: L_m(G^a_eps) differs"))?;
    }
    Ok(format!("{} instances", cases.len()))
}

fn observable_words(events: &BTreeSet<Event>, depth: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut level = vec![Word::empty()];
    for _ in 0..depth {
        level = level.iter().flat_map(|w| events.iter().map(move |e| w.pushed(e.clone()))).collect();
        out.extend(level.iter().cloned());
    }
    out
}

fn estimate_formula() -> Outcome {
    let (gd, del) = fix_del();
    let (gc, conf) = fix_conf();
    let mut cases = vec![
        ("FIX-SAFE+FIX-DEL".to_string(), safe_part(&gd, &fix_lin_safe_names()), del),
        ("FIX-CONF".to_string(), safe_part(&gc, &fix_conf_safe_names()), conf),
    ];
    cases.extend(random_instances(100).into_iter().enumerate().map(|(i, x)| (format!("seed {i}"), x.h, x.atk)));
    let mut checked = 0;
    for (name, h, atk) in &cases {
        let observable = h.alphabet().observable();
        let atk_h = atk.restrict_to(h);
        let obs = build_ca_observer(h, &atk_h, &observable).unwrap();
        for wd in observable_words(&observable, 4) {
            let expected = oracle::estimate(h, &atk_h, &observable, &wd, h.state_count());
            let got = match state_estimate(&obs, &wd) {
                EstimateResult::Estimate(e) => e.0,
                EstimateResult::OffDomain => BTreeSet::new(),
            };
            ensure(got == expected, || format!("{name}: estimate after \"{wd}\" is {got:?}, expected {expected:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{} instances, {checked} observed strings", cases.len()))
}

fn reduction_laws() -> Outcome {
    let examples = gen::classical_examples();
    let expected = [(true, true), (false, true), (true, false), (true, true), (true, true), (true, true), (false, false)];
    ensure(examples.len() == expected.len(), || format!("{} examples", examples.len()))?;
    for (i, ((g, h), want)) in examples.iter().zip(expected).enumerate() {
        let none = AttackSpec::none(g.name());
        let cc = check_ca_controllability(g, h, g.alphabet()).unwrap();
        let co = check_ca_observability(g, h, &none, g.alphabet()).unwrap();
        let ccl = oracle::controllability_violation(g, h, &g.alphabet().uncontrollable(), 8);
        let col = oracle::classical_observability_violation(g, h, &g.alphabet().observable(), 8);
        ensure(cc.holds == ccl.is_none(), || format!("example {i}: controllability {cc}"))?;
        ensure(co.holds == col.is_none(), || format!("example {i}: observability {co}"))?;
        ensure((cc.holds, co.holds) == want, || format!("example {i}: got ({}, {}), expected {want:?}", cc.holds, co.holds))?;
    }
    let failing = examples.iter().filter(|(g, h)| !check_ca_controllability(g, h, g.alphabet()).unwrap().holds).count();
    Ok(format!("{} examples, {failing} not controllable", examples.len()))
}

fn supervisor_achieves_spec() -> Outcome {
    let (gd, del) = fix_del();
    let (gc, conf) = fix_conf();
    let mut cases = vec![
        ("FIX-SAFE+FIX-DEL".to_string(), gd.clone(), safe_part(&gd, &fix_lin_safe_names()), del),
        ("FIX-CONF".to_string(), gc.clone(), safe_part(&gc, &fix_conf_safe_names()), conf),
    ];
    cases.extend(random_instances(100).into_iter().enumerate().map(|(i, x)| (format!("seed {i}"), x.g, x.h, x.atk)));
    let mut passing = 0;
    for (name, g, h, atk) in &cases {
        let cc = check_ca_controllability(g, h, g.alphabet()).unwrap();
        let co = check_ca_observability(g, h, atk, g.alphabet()).unwrap();
        if !(cc.holds && co.holds) {
            continue;
        }
        passing += 1;
        let sup = synthesize_ca_supervisor(g, h, atk, g.alphabet(), false).unwrap();
        let la = large_language(g, &sup, atk).unwrap();
        let v = compare_languages(&la, h, CompareMode::Equality).unwrap();
        ensure(v.holds, || format!("{name}: {v}"))?;
        let bounded = large_language_bounded(g, &sup, atk, DEPTH).unwrap();
        ensure(bounded == enumerate_language(h, DEPTH, Which::Generated), || format!("{name}: bounded oracle differs"))?;
    }
    ensure(passing >= 10, || format!("only {passing} instances pass both checks"))?;
    Ok(format!("{passing} of {} instances pass both checks", cases.len()))
}

fn coordination_equality() -> Outcome {
    let (g1, g2, k) = fix_coord();
    let mut problems = vec![("FIX-COORD".to_string(), CoordinationProblem::new(g1, g2, SpecSource::Language(k)))];
    for seed in 0..30 {
        problems.push((format!("seed {seed}"), gen::random_coordination(&mut rng(seed), true).forced(true)));
    }
    let mut checked = 0;
    for (name, p) in &problems {
        let out = coordination_synthesize(p).unwrap();
        ensure(out.report.local.iter().all(|l| l.consistency.holds), || format!("{name}: local attacks are not consistent with the global attack"))?;
        let sys = out.system.ok_or_else(|| format!("{name}: no supervisors"))?;
        let t = verify_theorems(&sys).unwrap();
        ensure(t.conjunction.holds, || format!("{name}: {}", t.conjunction))?;
        checked += 1;
    }
    ensure(checked >= 21, || format!("only {checked} instances"))?;
    Ok(format!("FIX-COORD and {} random instances", checked - 1))
}

fn fix_coord_system() -> CoordinatedSystem {
    let (g1, g2, k) = fix_coord();
    coordination_synthesize(&CoordinationProblem::new(g1, g2, SpecSource::Language(k)))
        .unwrap()
        .system
        .unwrap()
}

fn end_to_end() -> Outcome {
    let sys = fix_coord_system();
    let t = verify_theorems(&sys).unwrap();
    ensure(t.all_hold(), || format!("{t:?}"))?;
    let mut weak = sys.clone();
    weak.local[1].supervisor = weak.local[1].supervisor.with_enabled(&ev("b")).unwrap();
    let t = verify_theorems(&weak).unwrap();
    ensure(!t.global.holds, || "weakened supervisor still achieves K".into())?;
    let witness = t.global.witness.clone().unwrap_or_default();
    ensure(witness == w("a c b"), || format!("witness {witness}"))?;
    Ok(format!("L_a = K; weakened witness \"{witness}\""))
}

fn decomposability() -> Outcome {
    let k = prefix_closure_automaton("K", &sigma(&["a", "b"]), &[w("a b")]).unwrap();
    let (s1, s2) = (set(&["a"]), set(&["b"]));
    let d = check_conditional_decomposability(&k, &s1, &s2).unwrap();
    ensure(!d.decomposable, || "closure{ab} accepted".into())?;
    let cx = d.counterexample.ok_or("no counterexample")?;
    let sk = extend_coordinator_alphabet(&k, &s1, &s2).unwrap();
    let e1 = s1.union(&sk).cloned().collect();
    let e2 = s2.union(&sk).cloned().collect();
    let d = check_conditional_decomposability(&k, &e1, &e2).unwrap();
    ensure(d.decomposable, || format!("extension {sk:?} still fails"))?;
    let names: Vec<String> = sk.iter().map(|e| e.to_string()).collect();
    Ok(format!("counterexample \"{cx}\", extended coordinator {{{}}}", names.join(",")))
}

fn discriminating_pair() -> Outcome {
    let (gd, del) = fix_del();
    let (gc, conf) = fix_conf();
    let hd = safe_part(&gd, &fix_lin_safe_names());
    let hc = safe_part(&gc, &fix_conf_safe_names());
    let vd = check_ca_observability(&gd, &hd, &del, gd.alphabet()).unwrap();
    let vc = check_ca_observability(&gc, &hc, &conf, gc.alphabet()).unwrap();
    ensure(vd.holds, || format!("FIX-SAFE+FIX-DEL: {vd}"))?;
    ensure(!vc.holds && vc.witness == Some(w("a")) && vc.witness_event == Some(ev("c")), || format!("FIX-CONF: {vc}"))?;
    let od = oracle::ca_observability_violation(&gd, &hd, &del, &gd.alphabet().observable(), DEPTH);
    let oc = oracle::ca_observability_violation(&gc, &hc, &conf, &gc.alphabet().observable(), DEPTH);
    ensure(od.is_none(), || format!("oracle rejects FIX-SAFE+FIX-DEL: {od:?}"))?;
    ensure(oc == Some((w("a"), ev("c"))), || format!("oracle on FIX-CONF: {oc:?}"))?;
    Ok("FIX-CONF witness (\"a\", c)".into())
}

fn simulation_safety() -> Outcome {
    let (gd, del) = fix_del();
    let hd = safe_part(&gd, &fix_lin_safe_names());
    let sup = synthesize_ca_supervisor(&gd, &hd, &del, gd.alphabet(), false).unwrap();
    let sys = fix_coord_system();
    let loose_del = SupervisorRealization::permissive("S", &gd).unwrap();
    let loose = [
        SupervisorRealization::permissive("S_1", &sys.local[0].plant).unwrap(),
        SupervisorRealization::permissive("S_2", &sys.local[1].plant).unwrap(),
    ];
    let coord = [&sys.local[0].supervisor, &sys.local[1].supervisor];
    let mut runs = 0;
    for attacker in [AttackerMode::Random, AttackerMode::Maximal] {
        let cfg = SimConfig { runs: 1000, depth: 20, seed: 2024, attacker, ..SimConfig::default() };
        for (name, g, sups, atk, spec) in [
            ("FIX-SAFE+FIX-DEL", &gd, vec![&sup], &del, &hd),
            ("FIX-COORD", &sys.plant, coord.to_vec(), &sys.attack, &sys.spec),
        ] {
            let a = simulate_closed_loop(g, &sups, atk, spec, &cfg).unwrap();
            ensure(a.violations.is_empty(), || format!("{name} ({attacker}): {} violations", a.violations.len()))?;
            let b = simulate_closed_loop(g, &sups, atk, spec, &cfg).unwrap();
            ensure(a.to_string() == b.to_string(), || format!("{name}: reports differ between identical seeds"))?;
            runs += cfg.runs;
        }
        let u = simulate_closed_loop(&gd, &[&loose_del], &del, &hd, &cfg).unwrap();
        ensure(!u.violations.is_empty(), || "unsupervised FIX-DEL run has no violation".into())?;
        let u = simulate_closed_loop(&sys.plant, &[&loose[0], &loose[1]], &sys.attack, &sys.spec, &cfg).unwrap();
        ensure(!u.violations.is_empty(), || "unsupervised FIX-COORD run has no violation".into())?;
    }
    Ok(format!("{runs} supervised runs without violation"))
}

fn serialization() -> Outcome {
    let fixtures = common::fixture_models();
    for (name, model) in &fixtures {
        let text = serialize_model(model);
        let path = common::golden(name);
        let on_disk = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(text == on_disk, || format!("{name}: differs from golden file"))?;
        let parsed = parse_model(&on_disk).map_err(|e| format!("{name}: {e}"))?;
        ensure(&parsed == model, || format!("{name}: parse differs from fixture"))?;
        ensure(serialize_model(&parsed) == on_disk, || format!("{name}: not stable"))?;
    }
    Ok(format!("{} golden files", fixtures.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("attacked-language identity", attacked_language_identity),
        ("observation identity", observation_identity),
        ("state estimate formula", estimate_formula),
        ("reduction to classical properties", reduction_laws),
        ("supervisor achieves the specification", supervisor_achieves_spec),
        ("conjunction equals composition of local large languages", coordination_equality),
        ("coordination end to end", end_to_end),
        ("conditional decomposability", decomposability),
        ("CA-observability discriminating pair", discriminating_pair),
        ("simulation safety", simulation_safety),
        ("golden serialization", serialization),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2}: PASS  {title} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {title}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

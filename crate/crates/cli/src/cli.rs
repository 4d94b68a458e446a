use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use desguard_core::attack::build_attacked_automaton;
use desguard_core::coordination::{
    check_conditional_decomposability, check_observer_property, coordination_synthesize,
    extend_coordinator_alphabet, CoordinatedSystem, CoordinationProblem, LocalSystem,
    ProblemAttacks, SpecSource,
};
use desguard_core::observer::{build_ca_observer, state_estimate, EstimateResult};
use desguard_core::ops::{
    compose_parallel, enumerate_language, project, refine_with_spec, restrict_to_safe_states,
    state_set,
};
use desguard_core::sim::{simulate_closed_loop, AttackerMode, SimConfig};
use desguard_core::synthesis::{
    check_ca_controllability, check_ca_observability, synthesize_ca_supervisor,
};
use desguard_core::verify::{large_language, large_language_bounded, verify_theorems};
use desguard_core::{AttackSpec, Automaton, Event, SupervisorRealization, Verdict, Which, Word};

use crate::format::{parse_model_with, serialize_model, Item, Model, ParseError};
use crate::report::{names, verdict_value, words, Report};

#[derive(Debug, Parser)]
#[command(
    name = "desguard",
    version,
    about = "Supervisors for discrete event systems under sensor and actuator attacks"
)]
pub struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SafeArgs {
    /// Safe plant states, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "spec",
        conflicts_with = "spec"
    )]
    pub safe: Vec<String>,
    /// Specification automaton; the plant is refined by it.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Attacker {
    Random,
    Maximal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a model file and list its contents.
    Validate {
        file: PathBuf,
        /// Files whose definitions may be referenced.
        #[arg(long)]
        context: Vec<PathBuf>,
    },
    /// Synchronous product of two plants.
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Natural projection onto an event set.
    Project {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        alphabet: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The attacked automaton G^a.
    AttackExpand {
        plant: PathBuf,
        attack: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The CA-observer of the safe part of a plant.
    Observer {
        plant: PathBuf,
        attack: PathBuf,
        #[command(flatten)]
        safe: SafeArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// State estimate after an observed string.
    Estimate {
        observer: PathBuf,
        /// Space separated observed events.
        #[arg(long, allow_hyphen_values = true)]
        trace: String,
    },
    /// CA-controllability of the safe part.
    CheckCc {
        plant: PathBuf,
        #[command(flatten)]
        safe: SafeArgs,
    },
    /// CA-observability of the safe part.
    CheckCo {
        plant: PathBuf,
        /// Attack file; defaults to the attack in the plant file, if any.
        attack: Option<PathBuf>,
        #[command(flatten)]
        safe: SafeArgs,
    },
    /// Conditional decomposability of a specification.
    CheckCd {
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        s1: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        s2: Vec<String>,
        /// Add coordinator events until the specification decomposes.
        #[arg(long)]
        extend: bool,
    },
    /// Observer property of the projection onto coordinator events.
    CheckOp {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        sk: Vec<String>,
    },
    /// Build the CA-supervisor of the safe part.
    Synthesize {
        plant: PathBuf,
        attack: PathBuf,
        #[command(flatten)]
        safe: SafeArgs,
        /// Build the supervisor even if a CA condition fails.
        #[arg(long)]
        force: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Large language of a supervised plant under attack.
    LargeLang {
        plant: PathBuf,
        supervisor: PathBuf,
        attack: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Compare with the string-by-string evaluation up to `--depth`.
        #[arg(long)]
        oracle: bool,
    },
    /// Coordination supervisors for two components.
    Coordinate {
        g1: PathBuf,
        g2: PathBuf,
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        coordinator: Vec<String>,
        #[arg(long)]
        extend: bool,
        /// Attack on the composed plant instead of the component attacks.
        #[arg(long)]
        attack: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the language equalities of a coordinated system.
    VerifyCoord { dir: PathBuf },
    /// Seeded closed-loop simulation of a coordinated system.
    Simulate {
        dir: PathBuf,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Attacker::Random)]
        attacker: Attacker,
        #[arg(long, default_value_t = 0.5)]
        damping: f64,
    },
    /// List the strings of a plant up to a length.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        marked: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] desguard_core::Error),
    #[error("{0}")]
    Input(String),
}

type CResult<T> = Result<T, CliError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line; exit code 0 when the checked property holds, 1 when
/// it is violated and 2 on usage or input errors.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.exit_code() {
                0 => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli.command) {
        Ok(r) => Outcome {
            code: r.status,
            stdout: if cli.json { r.to_json() } else { r.to_plain() },
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn read(path: &Path) -> CResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path, context: &[&Model]) -> CResult<Model> {
    parse_model_with(&read(path)?, context).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// The plant of a file: the target of its attack block if that is defined
/// in the file, otherwise its first automaton.
pub fn plant_of(m: &Model, path: &Path) -> CResult<Automaton> {
    m.attacks()
        .find_map(|a| m.automaton(a.plant_name()))
        .or_else(|| m.automata().next())
        .cloned()
        .ok_or_else(|| CliError::Input(format!("{}: no automaton", path.display())))
}

fn attack_in(m: &Model, g: &Automaton, path: &Path) -> CResult<AttackSpec> {
    m.attack_on(g.name())
        .cloned()
        .ok_or_else(|| CliError::Input(format!("{}: no attack on `{}`", path.display(), g.name())))
}

fn load_plant_and_attack(plant: &Path, attack: Option<&Path>) -> CResult<(Automaton, AttackSpec)> {
    let pm = load(plant, &[])?;
    let g = plant_of(&pm, plant)?;
    let atk = match attack {
        Some(p) => attack_in(&load(p, &[&pm])?, &g, p)?,
        None => pm
            .attack_on(g.name())
            .cloned()
            .unwrap_or_else(|| AttackSpec::none(g.name())),
    };
    Ok((g, atk))
}

fn events(names: &[String]) -> CResult<BTreeSet<Event>> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| Event::new(n).map_err(CliError::from))
        .collect()
}

fn emit(output: Option<&Path>, items: Vec<Item>, r: &mut Report) -> CResult<()> {
    if let Some(p) = output {
        write(p, &serialize_model(&Model::new(items)))?;
        r.set("output", p.display().to_string());
    }
    Ok(())
}

fn size(a: &Automaton) -> Value {
    json!({"name": a.name(), "states": a.state_count(), "transitions": a.transition_count()})
}

/// A plant with its safe sub-automaton and the attack carried over to it.
struct Target {
    plant: Automaton,
    h: Automaton,
    atk: AttackSpec,
}

fn target(g: &Automaton, atk: &AttackSpec, safe: &SafeArgs) -> CResult<Target> {
    match &safe.spec {
        Some(p) => {
            let spec = plant_of(&load(p, &[])?, p)?;
            let r = refine_with_spec(g, &spec)?;
            Ok(Target {
                h: r.safe_automaton()?,
                atk: atk.lift(g, &r),
                plant: r.plant,
            })
        }
        None => {
            let names: Vec<&str> = safe
                .safe
                .iter()
                .map(String::as_str)
                .filter(|s| !s.is_empty())
                .collect();
            let ids = state_set(g, &names)?;
            Ok(Target {
                h: restrict_to_safe_states(g, &ids)?,
                atk: atk.clone(),
                plant: g.clone(),
            })
        }
    }
}

fn first_difference(a: &BTreeSet<Word>, b: &BTreeSet<Word>) -> Option<Word> {
    a.symmetric_difference(b)
        .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
        .cloned()
}

const PROBLEM: &str = "problem.desa";

fn local_file(i: usize) -> String {
    format!("local{}.desa", i + 1)
}

/// Reads a directory written by `coordinate`.
pub fn load_system(dir: &Path) -> CResult<CoordinatedSystem> {
    let path = dir.join(PROBLEM);
    let pm = load(&path, &[])?;
    let atk = pm
        .attacks()
        .next()
        .cloned()
        .ok_or_else(|| CliError::Input(format!("{}: no attack block", path.display())))?;
    let plant = plant_of(&pm, &path)?;
    let spec = pm
        .automaton("K")
        .cloned()
        .ok_or_else(|| CliError::Input(format!("{}: no automaton `K`", path.display())))?;
    let mut local = Vec::new();
    for i in 0..2 {
        let path = dir.join(local_file(i));
        if !path.exists() {
            return Err(CliError::Input(format!(
                "{}: missing; coordination did not produce supervisors",
                path.display()
            )));
        }
        let m = load(&path, &[])?;
        let attack = m
            .attacks()
            .next()
            .cloned()
            .ok_or_else(|| CliError::Input(format!("{}: no attack block", path.display())))?;
        let lp = plant_of(&m, &path)?;
        let ls = m.automata().nth(1).cloned().ok_or_else(|| {
            CliError::Input(format!("{}: no local specification", path.display()))
        })?;
        let supervisor = m
            .supervisors()
            .next()
            .cloned()
            .ok_or_else(|| CliError::Input(format!("{}: no supervisor", path.display())))?;
        local.push(LocalSystem {
            plant: lp,
            spec: ls,
            attack,
            supervisor,
        });
    }
    let [l1, l2]: [LocalSystem; 2] = local.try_into().expect("two components");
    Ok(CoordinatedSystem {
        plant,
        attack: atk,
        spec,
        local: [l1, l2],
    })
}

fn write_system(dir: &Path, sys: &CoordinatedSystem) -> CResult<()> {
    for (i, l) in sys.local.iter().enumerate() {
        let items = vec![
            Item::Automaton(l.plant.clone()),
            Item::Automaton(l.spec.clone()),
            Item::Attack(l.attack.clone()),
            Item::Supervisor(l.supervisor.clone()),
        ];
        write(
            &dir.join(local_file(i)),
            &serialize_model(&Model::new(items)),
        )?;
    }
    Ok(())
}

pub fn execute(cmd: &Command) -> CResult<Report> {
    match cmd {
        Command::Validate { file, context } => {
            let ctx = context
                .iter()
                .map(|p| load(p, &[]))
                .collect::<CResult<Vec<_>>>()?;
            let refs: Vec<&Model> = ctx.iter().collect();
            let m = load(file, &refs)?;
            let mut r = Report::new("validate");
            let items: Vec<Value> = m
                .items
                .iter()
                .map(|i| match i {
                    Item::Automaton(a) => json!({"kind": "automaton", "name": a.name(), "states": a.state_count(), "transitions": a.transition_count()}),
                    Item::Attack(s) => json!({"kind": "attack", "plant": s.plant_name(), "targets": s.len()}),
                    Item::Observer(o) => json!({"kind": "observer", "name": o.automaton().name(), "states": o.automaton().state_count()}),
                    Item::Supervisor(s) => json!({"kind": "supervisor", "name": s.name, "states": s.observer().automaton().state_count()}),
                })
                .collect();
            r.set("items", Value::Array(items));
            Ok(r)
        }
        Command::Compose { a, b, output } => {
            let ga = plant_of(&load(a, &[])?, a)?;
            let gb = plant_of(&load(b, &[])?, b)?;
            let g = compose_parallel(&ga, &gb)?;
            let mut r = Report::new("compose");
            r.set("result", size(&g));
            emit(output.as_deref(), vec![Item::Automaton(g)], &mut r)?;
            Ok(r)
        }
        Command::Project {
            file,
            alphabet,
            output,
        } => {
            let g = plant_of(&load(file, &[])?, file)?;
            let p = project(&g, &events(alphabet)?)?;
            let mut r = Report::new("project");
            r.set("result", size(&p));
            emit(output.as_deref(), vec![Item::Automaton(p)], &mut r)?;
            Ok(r)
        }
        Command::AttackExpand {
            plant,
            attack,
            output,
        } => {
            let (g, atk) = load_plant_and_attack(plant, Some(attack))?;
            let ga = build_attacked_automaton(&g, &atk)?;
            let mut r = Report::new("attack-expand");
            r.set("result", size(&ga));
            r.set("attacked_transitions", atk.len());
            emit(output.as_deref(), vec![Item::Automaton(ga)], &mut r)?;
            Ok(r)
        }
        Command::Observer {
            plant,
            attack,
            safe,
            output,
        } => {
            let (g, atk) = load_plant_and_attack(plant, Some(attack))?;
            let t = target(&g, &atk, safe)?;
            let obs = build_ca_observer(&t.h, &t.atk, &t.plant.alphabet().observable())?;
            let mut r = Report::new("observer");
            r.set("result", size(obs.automaton()));
            r.set(
                "initial_estimate",
                obs.estimate_of(obs.initial()).to_string(),
            );
            emit(output.as_deref(), vec![Item::Observer(obs)], &mut r)?;
            Ok(r)
        }
        Command::Estimate { observer, trace } => {
            let m = load(observer, &[])?;
            let obs = m
                .observers()
                .next()
                .or_else(|| m.supervisors().next().map(SupervisorRealization::observer))
                .cloned()
                .ok_or_else(|| CliError::Input(format!("{}: no observer", observer.display())))?;
            let w = Word::parse(trace)?;
            let mut r = Report::new("estimate");
            r.set("trace", w.to_string());
            r.set(
                "estimate",
                match state_estimate(&obs, &w) {
                    EstimateResult::Estimate(e) => e.to_string(),
                    EstimateResult::OffDomain => "off-domain".to_string(),
                },
            );
            Ok(r)
        }
        Command::CheckCc { plant, safe } => {
            let (g, atk) = load_plant_and_attack(plant, None)?;
            let t = target(&g, &atk, safe)?;
            let mut r = Report::new("check-cc");
            r.verdict(
                "ca_controllability",
                &check_ca_controllability(&t.plant, &t.h, t.plant.alphabet())?,
            );
            Ok(r)
        }
        Command::CheckCo {
            plant,
            attack,
            safe,
        } => {
            let (g, atk) = load_plant_and_attack(plant, attack.as_deref())?;
            let t = target(&g, &atk, safe)?;
            let mut r = Report::new("check-co");
            r.verdict(
                "ca_observability",
                &check_ca_observability(&t.plant, &t.h, &t.atk, t.plant.alphabet())?,
            );
            Ok(r)
        }
        Command::CheckCd {
            spec,
            s1,
            s2,
            extend,
        } => {
            let k = plant_of(&load(spec, &[])?, spec)?;
            let (s1, s2) = (events(s1)?, events(s2)?);
            let mut r = Report::new("check-cd");
            let d = check_conditional_decomposability(&k, &s1, &s2)?;
            r.verdict(
                "decomposability",
                &decomposition_verdict(d.decomposable, d.counterexample),
            );
            if *extend && r.status != 0 {
                let sk = extend_coordinator_alphabet(&k, &s1, &s2)?;
                let e1 = s1.union(&sk).cloned().collect();
                let e2 = s2.union(&sk).cloned().collect();
                let d = check_conditional_decomposability(&k, &e1, &e2)?;
                r.status = 0;
                r.set("coordinator", names(&sk));
                r.verdict(
                    "extended",
                    &decomposition_verdict(d.decomposable, d.counterexample),
                );
            }
            Ok(r)
        }
        Command::CheckOp { file, sk } => {
            let g = plant_of(&load(file, &[])?, file)?;
            let mut r = Report::new("check-op");
            r.verdict(
                "observer_property",
                &check_observer_property(&g, &events(sk)?)?,
            );
            Ok(r)
        }
        Command::Synthesize {
            plant,
            attack,
            safe,
            force,
            output,
        } => {
            let (g, atk) = load_plant_and_attack(plant, Some(attack))?;
            let t = target(&g, &atk, safe)?;
            let mut r = Report::new("synthesize");
            let cc = check_ca_controllability(&t.plant, &t.h, t.plant.alphabet())?;
            let co = check_ca_observability(&t.plant, &t.h, &t.atk, t.plant.alphabet())?;
            r.verdict("ca_controllability", &cc);
            r.verdict("ca_observability", &co);
            r.set("forced", *force);
            if r.status == 0 || *force {
                let sup =
                    synthesize_ca_supervisor(&t.plant, &t.h, &t.atk, t.plant.alphabet(), true)?;
                r.set(
                    "supervisor",
                    json!({"name": sup.name, "observer_states": sup.observer().automaton().state_count()}),
                );
                emit(output.as_deref(), vec![Item::Supervisor(sup)], &mut r)?;
            }
            Ok(r)
        }
        Command::LargeLang {
            plant,
            supervisor,
            attack,
            output,
            depth,
            oracle,
        } => {
            let (g, atk) = load_plant_and_attack(plant, Some(attack))?;
            let sm = load(supervisor, &[])?;
            let sup = sm.supervisors().next().cloned().ok_or_else(|| {
                CliError::Input(format!("{}: no supervisor", supervisor.display()))
            })?;
            let la = large_language(&g, &sup, &atk)?;
            let mut r = Report::new("large-lang");
            r.set("result", size(&la));
            if *oracle {
                let exact = enumerate_language(&la, *depth, Which::Generated);
                let bounded = large_language_bounded(&g, &sup, &atk, *depth)?;
                let v = match first_difference(&exact, &bounded) {
                    None => Verdict::holds(format!(
                        "tracker and string-by-string evaluation agree up to length {depth}"
                    )),
                    Some(w) => Verdict::fails(
                        w,
                        None,
                        "string in exactly one of the tracker and string-by-string results",
                    ),
                };
                r.set("strings", exact.len());
                r.verdict("oracle", &v);
            }
            emit(output.as_deref(), vec![Item::Automaton(la)], &mut r)?;
            Ok(r)
        }
        Command::Coordinate {
            g1,
            g2,
            spec,
            coordinator,
            extend,
            attack,
            force,
            output,
        } => {
            let m1 = load(g1, &[])?;
            let m2 = load(g2, &[])?;
            let p1 = plant_of(&m1, g1)?;
            let p2 = plant_of(&m2, g2)?;
            let k = plant_of(&load(spec, &[])?, spec)?;
            let attacks = match attack {
                Some(p) => {
                    let g = Model::new(vec![Item::Automaton(
                        compose_parallel(&p1, &p2)?.renamed(format!(
                            "{}||{}",
                            p1.name(),
                            p2.name()
                        )),
                    )]);
                    let gname = format!("{}||{}", p1.name(), p2.name());
                    let am = load(p, &[&g])?;
                    ProblemAttacks::Global(am.attack_on(&gname).cloned().ok_or_else(|| {
                        CliError::Input(format!("{}: no attack on `{gname}`", p.display()))
                    })?)
                }
                None => ProblemAttacks::Components(
                    m1.attack_on(p1.name())
                        .cloned()
                        .unwrap_or_else(|| AttackSpec::none(p1.name())),
                    m2.attack_on(p2.name())
                        .cloned()
                        .unwrap_or_else(|| AttackSpec::none(p2.name())),
                ),
            };
            let problem = CoordinationProblem::new(p1, p2, SpecSource::Language(k))
                .with_coordinator(events(coordinator)?)
                .with_extension(*extend)
                .with_attacks(attacks)
                .forced(*force);
            let (g, gatk) = problem.global()?;
            let out = coordination_synthesize(&problem)?;
            fs::create_dir_all(output).map_err(|source| CliError::Io {
                path: output.clone(),
                source,
            })?;
            let rep = &out.report;
            let mut r = Report::new("coordinate");
            r.set("coordinator_requested", names(&rep.coordinator_requested));
            r.set("coordinator", names(&rep.decomposition.coordinator_used));
            r.set("coordinator_extended", rep.coordinator_extended);
            r.set(
                "decomposability",
                verdict_value(&decomposition_verdict(
                    rep.decomposition.decomposable,
                    rep.decomposition.counterexample.clone(),
                )),
            );
            let locals: Vec<Value> = rep
                .local
                .iter()
                .map(|l| {
                    json!({
                        "alphabet": names(&l.extended_alphabet),
                        "plant_states": l.plant_states,
                        "spec_states": l.spec_states,
                        "attacked_transitions": l.attacked_transitions,
                        "consistency": verdict_value(&l.consistency),
                        "ca_controllability": verdict_value(&l.controllability),
                        "ca_observability": verdict_value(&l.observability),
                        "observer_property": verdict_value(&l.observer_property),
                    })
                })
                .collect();
            r.set("local", Value::Array(locals));
            r.set("success", rep.success);
            if !rep.success {
                r.fail();
            }
            let spec_k = match &out.system {
                Some(sys) => sys.spec.clone(),
                None => match &problem.spec {
                    SpecSource::Language(s) => {
                        refine_with_spec(&g, s)?.safe_automaton()?.renamed("K")
                    }
                    SpecSource::SafeStates(_) => {
                        unreachable!("the command reads a specification automaton")
                    }
                },
            };
            let items = vec![
                Item::Automaton(g),
                Item::Automaton(spec_k),
                Item::Attack(gatk),
            ];
            write(&output.join(PROBLEM), &serialize_model(&Model::new(items)))?;
            if let Some(sys) = &out.system {
                write_system(output, sys)?;
            }
            r.set("written", out.system.is_some());
            r.set("output", output.display().to_string());
            Ok(r)
        }
        Command::VerifyCoord { dir } => {
            let sys = load_system(dir)?;
            let t = verify_theorems(&sys)?;
            let mut r = Report::new("verify-coord");
            r.verdict("conjunction", &t.conjunction);
            r.verdict("local1", &t.local[0]);
            r.verdict("local2", &t.local[1]);
            r.verdict("global", &t.global);
            Ok(r)
        }
        Command::Simulate {
            dir,
            runs,
            depth,
            seed,
            attacker,
            damping,
        } => {
            let sys = load_system(dir)?;
            let cfg = SimConfig {
                runs: *runs,
                depth: *depth,
                seed: *seed,
                attacker: match attacker {
                    Attacker::Random => AttackerMode::Random,
                    Attacker::Maximal => AttackerMode::Maximal,
                },
                damping: *damping,
            };
            let sups = [&sys.local[0].supervisor, &sys.local[1].supervisor];
            let rep = simulate_closed_loop(&sys.plant, &sups, &sys.attack, &sys.spec, &cfg)?;
            let mut r = Report::new("simulate");
            r.set("runs", rep.config.runs);
            r.set("depth", rep.config.depth);
            r.set("seed", rep.config.seed);
            r.set("attacker", rep.config.attacker.to_string());
            r.set("coverage", rep.coverage);
            r.set("longest", rep.longest);
            r.set("violation_count", rep.violations.len());
            let vs: Vec<Value> = rep
                .violations
                .iter()
                .map(|v| json!({"run": v.run, "word": v.word.to_string()}))
                .collect();
            r.set("violations", Value::Array(vs));
            if !rep.violations.is_empty() {
                r.fail();
            }
            Ok(r)
        }
        Command::Enumerate {
            file,
            max_len,
            marked,
        } => {
            let g = plant_of(&load(file, &[])?, file)?;
            let which = if *marked {
                Which::Marked
            } else {
                Which::Generated
            };
            let ws = enumerate_language(&g, *max_len, which);
            let mut r = Report::new("enumerate");
            r.set("count", ws.len());
            r.set("words", words(&ws));
            Ok(r)
        }
    }
}

fn decomposition_verdict(decomposable: bool, counterexample: Option<Word>) -> Verdict {
    match (decomposable, counterexample) {
        (true, _) => Verdict::holds("the specification equals the composition of its projections"),
        (false, w) => Verdict::fails(
            w.unwrap_or_default(),
            None,
            "string of the composed projections outside the specification",
        ),
    }
}

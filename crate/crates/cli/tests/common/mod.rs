#![allow(dead_code)]

use std::path::{Path, PathBuf};

use desguard::{Item, Model};
use desguard_core::attack::build_attacked_automaton;
use desguard_core::fixtures::*;
use desguard_core::observer::build_ca_observer;
use desguard_core::ops::{restrict_to_safe_states, state_set};
use desguard_core::synthesis::synthesize_ca_supervisor;
use desguard_core::{AttackSpec, Automaton};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn golden(name: &str) -> PathBuf {
    golden_dir().join(format!("{name}.desa"))
}

fn with_attack(g: Automaton, atk: AttackSpec) -> Model {
    let mut items = vec![Item::Automaton(g)];
    let mut seen = Vec::new();
    for f in atk.entries().values() {
        if !seen.contains(&f.name().to_string()) {
            seen.push(f.name().to_string());
            items.push(Item::Automaton(f.clone()));
        }
    }
    items.push(Item::Attack(atk));
    Model::new(items)
}

fn safe_part(g: &Automaton, names: &[&str]) -> Automaton {
    restrict_to_safe_states(g, &state_set(g, names).unwrap()).unwrap()
}

/// Every fixture as a model, keyed by its golden file name.
pub fn fixture_models() -> Vec<(&'static str, Model)> {
    let one = |a: Automaton| Model::new(vec![Item::Automaton(a)]);
    let (gd, del) = fix_del();
    let (gc, conf) = fix_conf();
    let (g1, g2, k) = fix_coord();
    let hd = safe_part(&gd, &fix_lin_safe_names());
    let hc = safe_part(&gc, &fix_conf_safe_names());
    let obs_del = build_ca_observer(&hd, &del, &gd.alphabet().observable()).unwrap();
    let obs_conf = build_ca_observer(&hc, &conf, &gc.alphabet().observable()).unwrap();
    let sup_del = synthesize_ca_supervisor(&gd, &hd, &del, gd.alphabet(), false).unwrap();
    let sup_conf = synthesize_ca_supervisor(&gc, &hc, &conf, gc.alphabet(), true).unwrap();
    vec![
        ("fix_lin", one(fix_lin())),
        ("fix_lin_sensor", one(fix_lin_sensor())),
        ("fix_safe", one(fix_safe())),
        ("fix_del", with_attack(gd.clone(), del.clone())),
        ("fix_conf", with_attack(gc.clone(), conf.clone())),
        ("fix_coord_g1", one(g1)),
        ("fix_coord_g2", one(g2)),
        ("fix_coord_k", one(k)),
        (
            "fix_del_attacked",
            one(build_attacked_automaton(&gd, &del).unwrap()),
        ),
        (
            "fix_conf_attacked",
            one(build_attacked_automaton(&gc, &conf).unwrap()),
        ),
        (
            "fix_del_observer",
            Model::new(vec![Item::Observer(obs_del)]),
        ),
        (
            "fix_conf_observer",
            Model::new(vec![Item::Observer(obs_conf)]),
        ),
        (
            "fix_del_supervisor",
            Model::new(vec![Item::Supervisor(sup_del)]),
        ),
        (
            "fix_conf_supervisor_forced",
            Model::new(vec![Item::Supervisor(sup_conf)]),
        ),
    ]
}

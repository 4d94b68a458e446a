//! Line-oriented model files.
//!
//! ```text
//! automaton G
//! alphabet:
//!   a : obs ctrl sen-attack
//!   b : obs ctrl
//! states: q0 q1 q2
//! initial: q0
//! trans:
//!   q0 a q1
//!   q1 b q2
//! end
//!
//! attack on G
//!   target: q0 a q1 with F
//! end
//! ```
//!
//! Observers are an automaton block followed by `estimate of NAME`, and
//! supervisors add a `supervisor NAME on OBSERVER` block. `#` starts a
//! comment. Names are resolved in the current file first, then in the
//! context models, and must be defined before use.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use desguard_core::attack::TransitionKey;
use desguard_core::observer::StateEstimate;
use desguard_core::synthesis::ControlPattern;
use desguard_core::{
    Alphabet, AttackSpec, Automaton, Event, EventAttrs, Label, ObserverAutomaton, StateTag,
    SupervisorRealization,
};

/// Label used for ε moves; not a legal event name in files.
pub const EPSILON: &str = "eps";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Automaton(Automaton),
    Attack(AttackSpec),
    Observer(ObserverAutomaton),
    Supervisor(SupervisorRealization),
}

impl Item {
    /// Name under which the item can be referenced; attacks are anonymous.
    pub fn name(&self) -> Option<&str> {
        match self {
            Item::Automaton(a) => Some(a.name()),
            Item::Observer(o) => Some(o.automaton().name()),
            Item::Supervisor(s) => Some(&s.name),
            Item::Attack(_) => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub items: Vec<Item>,
}

impl Model {
    pub fn new(items: Vec<Item>) -> Self {
        Model { items }
    }

    pub fn automata(&self) -> impl Iterator<Item = &Automaton> {
        self.items.iter().filter_map(|i| match i {
            Item::Automaton(a) => Some(a),
            _ => None,
        })
    }

    pub fn attacks(&self) -> impl Iterator<Item = &AttackSpec> {
        self.items.iter().filter_map(|i| match i {
            Item::Attack(a) => Some(a),
            _ => None,
        })
    }

    pub fn automaton(&self, name: &str) -> Option<&Automaton> {
        self.automata().find(|a| a.name() == name)
    }

    pub fn attack_on(&self, plant: &str) -> Option<&AttackSpec> {
        self.attacks().find(|a| a.plant_name() == plant)
    }

    pub fn observers(&self) -> impl Iterator<Item = &ObserverAutomaton> {
        self.items.iter().filter_map(|i| match i {
            Item::Observer(o) => Some(o),
            _ => None,
        })
    }

    pub fn supervisors(&self) -> impl Iterator<Item = &SupervisorRealization> {
        self.items.iter().filter_map(|i| match i {
            Item::Supervisor(s) => Some(s),
            _ => None,
        })
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    /// Characters of the physical line before `text`.
    offset: usize,
}

impl<'a> Line<'a> {
    /// Whitespace-separated tokens with their 1-based columns.
    fn tokens(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push((s, &self.text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, &self.text[s..]));
        }
        out.into_iter()
            .map(|(b, t)| (self.offset + self.text[..b].chars().count() + 1, t))
            .collect()
    }

    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    /// Splits `left : right` at the first colon.
    fn split_colon(&self) -> Option<(Line<'a>, Line<'a>, usize)> {
        let i = self.text.find(':')?;
        let col = self.offset + self.text[..i].chars().count() + 1;
        Some((
            Line {
                number: self.number,
                text: &self.text[..i],
                offset: self.offset,
            },
            Line {
                number: self.number,
                text: &self.text[i + 1..],
                offset: col,
            },
            col,
        ))
    }
}

fn event(line: &Line<'_>, col: usize, name: &str) -> PResult<Event> {
    if name == EPSILON {
        return Err(line.err(col, format!("`{EPSILON}` is reserved for ε moves")));
    }
    Event::new(name).map_err(|_| line.err(col, format!("invalid event name `{name}`")))
}

fn attrs(line: &Line<'_>, flags: &[(usize, &str)]) -> PResult<EventAttrs> {
    let mut a = EventAttrs::default();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (col, f) in flags {
        let group = match *f {
            "obs" | "unobs" => "observability",
            "ctrl" | "unctrl" => "controllability",
            "sen-attack" => "sen-attack",
            "act-attack" => "act-attack",
            other => return Err(line.err(*col, format!("unknown event attribute `{other}`"))),
        };
        if seen.insert(group, *col).is_some() {
            return Err(line.err(*col, format!("{group} given twice")));
        }
        match *f {
            "unobs" => a.observable = false,
            "unctrl" => a.controllable = false,
            "sen-attack" => a.sensor_attackable = true,
            "act-attack" => a.actuator_attackable = true,
            _ => {}
        }
    }
    Ok(a)
}

fn alphabet_line(line: &Line<'_>, alphabet: &mut Alphabet) -> PResult<()> {
    let Some((left, right, colon)) = line.split_colon() else {
        return Err(line.err(1, "expected `EVENT : attributes`"));
    };
    let name = left.tokens();
    let [(col, name)] = name.as_slice() else {
        return Err(line.err(1, "expected a single event name before `:`"));
    };
    let e = event(line, *col, name)?;
    if alphabet.contains(&e) {
        return Err(line.err(*col, format!("event `{e}` declared twice")));
    }
    let a = attrs(line, &right.tokens())?;
    alphabet
        .insert(e, a)
        .map_err(|err| line.err(colon + 1, err.to_string()))
}

struct Block<'a> {
    header: Line<'a>,
    body: Vec<Line<'a>>,
}

fn split_blocks(text: &str) -> PResult<Vec<Block<'_>>> {
    let mut blocks = Vec::new();
    let mut current: Option<Block<'_>> = None;
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let line = Line {
            number: i + 1,
            text: content,
            offset: 0,
        };
        let toks = line.tokens();
        let Some((col, first)) = toks.first().copied() else {
            continue;
        };
        match current.as_mut() {
            None => {
                if !matches!(first, "automaton" | "attack" | "estimate" | "supervisor") {
                    return Err(line.err(col, format!("unknown keyword `{first}`")));
                }
                current = Some(Block {
                    header: line,
                    body: Vec::new(),
                });
            }
            Some(b) => {
                if first == "end" {
                    if toks.len() > 1 {
                        return Err(line.err(toks[1].0, "unexpected text after `end`"));
                    }
                    blocks.push(current.take().expect("open block"));
                } else {
                    b.body.push(line);
                }
            }
        }
    }
    if let Some(b) = current {
        return Err(b.header.err(1, "block is not closed by `end`"));
    }
    Ok(blocks)
}

/// Splits a block body into sections introduced by `key:` lines. Lines
/// before any key are rejected, and so are unknown `word:` lines outside
/// the sections whose entries contain a colon.
fn sections<'a>(
    block: &'a Block<'a>,
    keys: &[&str],
    entry_sections: &[&str],
) -> PResult<BTreeMap<String, (Line<'a>, Vec<Line<'a>>)>> {
    let mut out: BTreeMap<String, (Line<'a>, Vec<Line<'a>>)> = BTreeMap::new();
    let mut current: Option<String> = None;
    for line in &block.body {
        let toks = line.tokens();
        let (col, first) = toks[0];
        let key = first.strip_suffix(':').filter(|k| keys.contains(k));
        if let Some(key) = key {
            if out.contains_key(key) {
                return Err(line.err(col, format!("section `{key}:` given twice")));
            }
            let colon = line.text.find(':').expect("colon");
            let rest = Line {
                number: line.number,
                text: &line.text[colon + 1..],
                offset: line.offset + line.text[..colon].chars().count() + 1,
            };
            out.insert(key.to_string(), (rest, Vec::new()));
            current = Some(key.to_string());
            continue;
        }
        match &current {
            Some(_)
                if first.ends_with(':')
                    && !entry_sections.contains(&current.as_deref().unwrap_or("")) =>
            {
                return Err(line.err(col, format!("unknown section `{first}`")));
            }
            Some(k) => out.get_mut(k).expect("section").1.push(Line {
                number: line.number,
                text: line.text,
                offset: line.offset,
            }),
            None => {
                if first.ends_with(':') {
                    return Err(line.err(col, format!("unknown section `{first}`")));
                }
                return Err(line.err(col, "expected a section header"));
            }
        }
    }
    Ok(out)
}

/// Tokens of a section: inline ones after the key plus continuation lines.
fn section_tokens<'a>(sec: &'a (Line<'a>, Vec<Line<'a>>)) -> Vec<(usize, usize, &'a str)> {
    let mut out = Vec::new();
    for (c, t) in sec.0.tokens() {
        out.push((sec.0.number, c, t));
    }
    for l in &sec.1 {
        for (c, t) in l.tokens() {
            out.push((l.number, c, t));
        }
    }
    out
}

fn at(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_automaton(block: &Block<'_>) -> PResult<Automaton> {
    let toks = block.header.tokens();
    let [_, (col, name)] = toks.as_slice() else {
        return Err(block.header.err(1, "expected `automaton NAME`"));
    };
    if name.contains(':') {
        return Err(block
            .header
            .err(*col, format!("invalid automaton name `{name}`")));
    }
    let secs = sections(
        block,
        &[
            "alphabet", "states", "initial", "marked", "inserted", "trans",
        ],
        &["alphabet"],
    )?;
    let mut alphabet = Alphabet::new();
    if let Some((first, lines)) = secs.get("alphabet") {
        if let Some((c, _)) = first.tokens().first() {
            return Err(first.err(*c, "alphabet entries go on their own lines"));
        }
        for l in lines {
            alphabet_line(l, &mut alphabet)?;
        }
    }
    let mut b = Automaton::builder(*name, alphabet.clone());
    let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
    if let Some(sec) = secs.get("states") {
        for (ln, c, s) in section_tokens(sec) {
            if ids.contains_key(s) {
                return Err(at(ln, c, format!("state `{s}` declared twice")));
            }
            let id = b
                .add_state(s, true, StateTag::Plant)
                .map_err(|e| at(ln, c, e.to_string()))?;
            ids.insert(s, id);
        }
    }
    let lookup = |ln: usize, c: usize, s: &str| -> PResult<usize> {
        ids.get(s)
            .copied()
            .ok_or_else(|| at(ln, c, format!("state `{s}` is not declared")))
    };
    match secs.get("initial").map(section_tokens).as_deref() {
        Some([(ln, c, s)]) => b.set_initial(lookup(*ln, *c, s)?),
        Some(_) => {
            let l = &secs["initial"].0;
            return Err(l.err(1, "expected exactly one initial state"));
        }
        None => {
            return Err(block
                .header
                .err(1, format!("automaton `{name}` has no `initial:` section")))
        }
    }
    if let Some(sec) = secs.get("marked") {
        for id in ids.values() {
            b.set_marked(*id, false);
        }
        for (ln, c, s) in section_tokens(sec) {
            b.set_marked(lookup(ln, c, s)?, true);
        }
    }
    let mut inserted = BTreeSet::new();
    if let Some(sec) = secs.get("inserted") {
        for (ln, c, s) in section_tokens(sec) {
            inserted.insert(lookup(ln, c, s)?);
        }
    }
    if let Some((first, lines)) = secs.get("trans") {
        if let Some((c, _)) = first.tokens().first() {
            return Err(first.err(*c, "transitions go on their own lines"));
        }
        for l in lines {
            let t = l.tokens();
            let [(c1, src), (c2, ev), (c3, dst)] = t.as_slice() else {
                return Err(l.err(1, "expected `SOURCE EVENT TARGET`"));
            };
            let src = lookup(l.number, *c1, src)?;
            let dst = lookup(l.number, *c3, dst)?;
            let label = if *ev == EPSILON {
                Label::Epsilon
            } else {
                let e = event(l, *c2, ev)?;
                if !alphabet.contains(&e) {
                    return Err(l.err(*c2, format!("event `{e}` is not in the alphabet")));
                }
                Label::Event(e)
            };
            b.add_transition(src, label, dst)
                .map_err(|e| l.err(*c2, e.to_string()))?;
        }
    }
    let a = b.build().map_err(|e| block.header.err(1, e.to_string()))?;
    if inserted.is_empty() {
        return Ok(a);
    }
    // Tags are not part of the builder's name-based API; rebuild with them.
    let names: BTreeSet<&str> = ids
        .iter()
        .filter(|(_, id)| inserted.contains(*id))
        .map(|(n, _)| *n)
        .collect();
    retag(&a, &names).map_err(|e| block.header.err(1, e.to_string()))
}

fn retag(a: &Automaton, inserted: &BTreeSet<&str>) -> desguard_core::Result<Automaton> {
    let mut b = Automaton::builder(a.name(), a.alphabet().clone());
    for q in a.state_ids() {
        let tag = if inserted.contains(a.state_name(q)) {
            StateTag::Inserted
        } else {
            StateTag::Plant
        };
        b.add_state(a.state_name(q), a.is_marked(q), tag)?;
    }
    b.set_initial(a.initial().0);
    for (q, l, t) in a.transitions() {
        b.add_transition(q.0, l.clone(), t.0)?;
    }
    b.build()
}

struct Scope<'a> {
    items: &'a [Item],
    context: &'a [&'a Model],
}

impl Scope<'_> {
    fn automaton(&self, name: &str) -> Option<&Automaton> {
        let local = self.items.iter().rev().find_map(|i| match i {
            Item::Automaton(a) if a.name() == name => Some(a),
            _ => None,
        });
        local.or_else(|| self.context.iter().find_map(|m| m.automaton(name)))
    }
}

fn parse_attack(block: &Block<'_>, scope: &Scope<'_>) -> PResult<AttackSpec> {
    let toks = block.header.tokens();
    let [_, (c_on, on), (col, plant)] = toks.as_slice() else {
        return Err(block.header.err(1, "expected `attack on PLANT`"));
    };
    if *on != "on" {
        return Err(block.header.err(*c_on, "expected `on`"));
    }
    let g = scope
        .automaton(plant)
        .ok_or_else(|| block.header.err(*col, format!("unknown plant `{plant}`")))?;
    let mut spec = AttackSpec::none(g.name());
    for l in &block.body {
        let t = l.tokens();
        let (kind, rest) = (t[0], &t[1..]);
        let (keys, f_tok) = match (kind.1, rest) {
            ("target:", [(cs, s), (ce, e), (cd, d), (_, "with"), f]) => {
                let ev = event(l, *ce, e)?;
                let key = TransitionKey::new(s, ev, d);
                let exists = match (g.state_id(s), g.state_id(d)) {
                    (Some(q), Some(t)) => g.step(q, &key.event) == Some(t),
                    _ => false,
                };
                if !exists {
                    let c = if g.state_id(s).is_none() { *cs } else { *cd };
                    return Err(l.err(c, format!("transition {key} does not exist in `{plant}`")));
                }
                (vec![key], *f)
            }
            ("target-event:", [(ce, e), (_, "with"), f]) => {
                let ev = event(l, *ce, e)?;
                let keys: Vec<TransitionKey> = g
                    .transitions()
                    .filter(|(_, lab, _)| lab.event() == Some(&ev))
                    .map(|(q, _, t)| TransitionKey::of(g, q, &ev, t))
                    .collect();
                if keys.is_empty() {
                    return Err(l.err(*ce, format!("no transition of `{plant}` carries `{ev}`")));
                }
                (keys, *f)
            }
            _ => {
                return Err(l.err(
                    kind.0,
                    "expected `target: SOURCE EVENT TARGET with F` or `target-event: EVENT with F`",
                ))
            }
        };
        let (cf, fname) = f_tok;
        let f = scope
            .automaton(fname)
            .ok_or_else(|| l.err(cf, format!("unknown attack automaton `{fname}`")))?;
        for key in keys {
            if spec.get(&key).is_some() {
                return Err(l.err(kind.0, format!("transition {key} is attacked twice")));
            }
            AttackSpec::none(g.name())
                .with(key.clone(), f.clone())
                .validate(g)
                .map_err(|e| l.err(kind.0, e.to_string()))?;
            spec.insert(key, f.clone());
        }
    }
    Ok(spec)
}

fn take_local<'a>(items: &'a mut [Item], name: &str) -> Option<&'a mut Item> {
    items.iter_mut().rev().find(|i| i.name() == Some(name))
}

fn parse_estimate(block: &Block<'_>, items: &mut [Item]) -> PResult<()> {
    let toks = block.header.tokens();
    let [_, (c_of, of), (col, name)] = toks.as_slice() else {
        return Err(block.header.err(1, "expected `estimate of OBSERVER`"));
    };
    if *of != "of" {
        return Err(block.header.err(*c_of, "expected `of`"));
    }
    let slot = take_local(items, name).ok_or_else(|| {
        block
            .header
            .err(*col, format!("unknown automaton `{name}`"))
    })?;
    let Item::Automaton(a) = slot else {
        return Err(block
            .header
            .err(*col, format!("`{name}` is not a plain automaton")));
    };
    let mut estimates: Vec<Option<StateEstimate>> = vec![None; a.state_count()];
    for l in &block.body {
        let Some((left, right, _)) = l.split_colon() else {
            return Err(l.err(1, "expected `STATE : plant states`"));
        };
        let lt = left.tokens();
        let [(c, s)] = lt.as_slice() else {
            return Err(l.err(1, "expected a single observer state before `:`"));
        };
        let q = a
            .state_id(s)
            .ok_or_else(|| l.err(*c, format!("`{name}` has no state `{s}`")))?;
        if estimates[q.0].is_some() {
            return Err(l.err(*c, format!("estimate of `{s}` given twice")));
        }
        let set = right
            .tokens()
            .into_iter()
            .map(|(_, t)| t.to_string())
            .collect();
        estimates[q.0] = Some(StateEstimate(set));
    }
    let estimates = estimates
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            e.ok_or_else(|| {
                block.header.err(
                    1,
                    format!(
                        "no estimate for `{}`",
                        a.state_name(desguard_core::StateId(i))
                    ),
                )
            })
        })
        .collect::<PResult<Vec<_>>>()?;
    let obs = ObserverAutomaton::from_parts(a.clone(), estimates)
        .map_err(|e| block.header.err(1, e.to_string()))?;
    *slot = Item::Observer(obs);
    Ok(())
}

fn pattern(
    line: &Line<'_>,
    tokens: &[(usize, &str)],
    alphabet: &Alphabet,
) -> PResult<ControlPattern> {
    let mut out = BTreeSet::new();
    for (c, t) in tokens {
        let e = event(line, *c, t)?;
        if !alphabet.contains(&e) {
            return Err(line.err(*c, format!("event `{e}` is not in the supervisor alphabet")));
        }
        out.insert(e);
    }
    Ok(ControlPattern(out))
}

fn parse_supervisor(block: &Block<'_>, items: &mut [Item]) -> PResult<String> {
    let toks = block.header.tokens();
    let [_, (_, name), (c_on, on), (col, obs_name)] = toks.as_slice() else {
        return Err(block
            .header
            .err(1, "expected `supervisor NAME on OBSERVER`"));
    };
    if *on != "on" {
        return Err(block.header.err(*c_on, "expected `on`"));
    }
    let secs = sections(
        block,
        &["alphabet", "patterns", "otherwise"],
        &["alphabet", "patterns"],
    )?;
    let mut alphabet = Alphabet::new();
    if let Some((_, lines)) = secs.get("alphabet") {
        for l in lines {
            alphabet_line(l, &mut alphabet)?;
        }
    }
    let slot = take_local(items, obs_name).ok_or_else(|| {
        block
            .header
            .err(*col, format!("unknown observer `{obs_name}`"))
    })?;
    let Item::Observer(obs) = slot else {
        return Err(block
            .header
            .err(*col, format!("`{obs_name}` is not an observer")));
    };
    let a = obs.automaton();
    let mut patterns: Vec<Option<ControlPattern>> = vec![None; a.state_count()];
    if let Some((_, lines)) = secs.get("patterns") {
        for l in lines {
            let Some((left, right, _)) = l.split_colon() else {
                return Err(l.err(1, "expected `STATE : events`"));
            };
            let lt = left.tokens();
            let [(c, s)] = lt.as_slice() else {
                return Err(l.err(1, "expected a single observer state before `:`"));
            };
            let q = a
                .state_id(s)
                .ok_or_else(|| l.err(*c, format!("`{obs_name}` has no state `{s}`")))?;
            if patterns[q.0].is_some() {
                return Err(l.err(*c, format!("pattern of `{s}` given twice")));
            }
            patterns[q.0] = Some(pattern(l, &right.tokens(), &alphabet)?);
        }
    }
    let off = match secs.get("otherwise") {
        Some((first, more)) => {
            if let Some(l) = more.first() {
                return Err(l.err(1, "`otherwise:` takes its events on the same line"));
            }
            pattern(
                first,
                &first
                    .tokens()
                    .iter()
                    .map(|(c, t)| (*c, *t))
                    .collect::<Vec<_>>(),
                &alphabet,
            )?
        }
        None => return Err(block.header.err(1, "missing `otherwise:` pattern")),
    };
    let patterns = patterns
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| {
                block.header.err(
                    1,
                    format!(
                        "no pattern for `{}`",
                        a.state_name(desguard_core::StateId(i))
                    ),
                )
            })
        })
        .collect::<PResult<Vec<_>>>()?;
    let sup = SupervisorRealization::from_parts(*name, obs.clone(), patterns, off, alphabet)
        .map_err(|e| block.header.err(1, e.to_string()))?;
    *slot = Item::Supervisor(sup);
    Ok(name.to_string())
}

pub fn parse_model(text: &str) -> PResult<Model> {
    parse_model_with(text, &[])
}

/// Parses `text`, resolving references that are not defined in it against
/// `context`.
pub fn parse_model_with(text: &str, context: &[&Model]) -> PResult<Model> {
    let mut items: Vec<Item> = Vec::new();
    let mut names: BTreeSet<String> = BTreeSet::new();
    for block in split_blocks(text)? {
        let (col, kw) = block.header.tokens()[0];
        match kw {
            "automaton" => {
                let a = parse_automaton(&block)?;
                if !names.insert(a.name().to_string()) {
                    return Err(block
                        .header
                        .err(col, format!("`{}` is defined twice", a.name())));
                }
                items.push(Item::Automaton(a));
            }
            "attack" => {
                let spec = parse_attack(
                    &block,
                    &Scope {
                        items: &items,
                        context,
                    },
                )?;
                items.push(Item::Attack(spec));
            }
            "estimate" => parse_estimate(&block, &mut items)?,
            "supervisor" => {
                let name = parse_supervisor(&block, &mut items)?;
                if !names.insert(name.clone()) {
                    return Err(block.header.err(col, format!("`{name}` is defined twice")));
                }
            }
            _ => unreachable!("checked when splitting blocks"),
        }
    }
    Ok(Model { items })
}

fn write_attrs(out: &mut String, a: &EventAttrs) {
    out.push_str(if a.observable { "obs" } else { "unobs" });
    out.push_str(if a.controllable { " ctrl" } else { " unctrl" });
    if a.sensor_attackable {
        out.push_str(" sen-attack");
    }
    if a.actuator_attackable {
        out.push_str(" act-attack");
    }
}

fn write_alphabet(out: &mut String, alphabet: &Alphabet) {
    out.push_str("alphabet:\n");
    for (e, a) in alphabet.iter() {
        let _ = write!(out, "  {e} : ");
        write_attrs(out, a);
        out.push('\n');
    }
}

fn write_list<'a>(out: &mut String, key: &str, items: impl Iterator<Item = &'a str>) {
    out.push_str(key);
    out.push(':');
    for s in items {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
}

pub fn write_automaton(out: &mut String, a: &Automaton) {
    let _ = writeln!(out, "automaton {}", a.name());
    write_alphabet(out, a.alphabet());
    write_list(out, "states", a.state_ids().map(|q| a.state_name(q)));
    let _ = writeln!(out, "initial: {}", a.state_name(a.initial()));
    write_list(out, "marked", a.marked_states().map(|q| a.state_name(q)));
    if a.state_ids().any(|q| a.tag(q) == StateTag::Inserted) {
        write_list(
            out,
            "inserted",
            a.state_ids()
                .filter(|q| a.tag(*q) == StateTag::Inserted)
                .map(|q| a.state_name(q)),
        );
    }
    out.push_str("trans:\n");
    for (q, l, t) in a.transitions() {
        let label = match l {
            Label::Epsilon => EPSILON,
            Label::Event(e) => e.as_str(),
        };
        let _ = writeln!(out, "  {} {label} {}", a.state_name(q), a.state_name(t));
    }
    out.push_str("end\n");
}

fn write_observer(out: &mut String, o: &ObserverAutomaton) {
    let a = o.automaton();
    write_automaton(out, a);
    out.push('\n');
    let _ = writeln!(out, "estimate of {}", a.name());
    for q in a.state_ids() {
        let _ = write!(out, "  {} :", a.state_name(q));
        for s in o.estimate_of(q).iter() {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
    }
    out.push_str("end\n");
}

fn write_pattern(out: &mut String, p: &ControlPattern) {
    for e in p.events() {
        let _ = write!(out, " {e}");
    }
    out.push('\n');
}

fn write_supervisor(out: &mut String, s: &SupervisorRealization) {
    write_observer(out, s.observer());
    out.push('\n');
    let a = s.observer().automaton();
    let _ = writeln!(out, "supervisor {} on {}", s.name, a.name());
    write_alphabet(out, s.alphabet());
    out.push_str("patterns:\n");
    for q in a.state_ids() {
        let _ = write!(out, "  {} :", a.state_name(q));
        write_pattern(out, &s.patterns()[q.0]);
    }
    out.push_str("otherwise:");
    write_pattern(out, s.off_domain());
    out.push_str("end\n");
}

/// Canonical text of a model. Attack automata that do not already precede
/// their attack block are emitted just before it, renamed apart when two
/// different automata share a name.
pub fn serialize_model(model: &Model) -> String {
    let mut out = String::new();
    let mut emitted: BTreeMap<String, Automaton> = BTreeMap::new();
    let mut first = true;
    let mut sep = |out: &mut String| {
        if !first {
            out.push('\n');
        }
        first = false;
    };
    for item in &model.items {
        match item {
            Item::Automaton(a) => {
                sep(&mut out);
                write_automaton(&mut out, a);
                emitted.insert(a.name().to_string(), a.clone());
            }
            Item::Observer(o) => {
                sep(&mut out);
                write_observer(&mut out, o);
                emitted.insert(o.automaton().name().to_string(), o.automaton().clone());
            }
            Item::Supervisor(s) => {
                sep(&mut out);
                write_supervisor(&mut out, s);
                emitted.insert(
                    s.observer().automaton().name().to_string(),
                    s.observer().automaton().clone(),
                );
            }
            Item::Attack(spec) => {
                let mut refs = Vec::new();
                for (key, f) in spec.entries() {
                    let name = match emitted.get(f.name()) {
                        Some(prev) if prev == f => f.name().to_string(),
                        Some(_) => {
                            let mut n = 1;
                            loop {
                                let cand = format!("{}_{n}", f.name());
                                match emitted.get(&cand) {
                                    Some(prev) if *prev == f.renamed(cand.clone()) => break cand,
                                    Some(_) => n += 1,
                                    None => {
                                        let g = f.renamed(cand.clone());
                                        sep(&mut out);
                                        write_automaton(&mut out, &g);
                                        emitted.insert(cand.clone(), g);
                                        break cand;
                                    }
                                }
                            }
                        }
                        None => {
                            sep(&mut out);
                            write_automaton(&mut out, f);
                            emitted.insert(f.name().to_string(), f.clone());
                            f.name().to_string()
                        }
                    };
                    refs.push((key, name));
                }
                sep(&mut out);
                let _ = writeln!(out, "attack on {}", spec.plant_name());
                for (key, name) in refs {
                    let _ = writeln!(
                        out,
                        "  target: {} {} {} with {name}",
                        key.source, key.event, key.target
                    );
                }
                out.push_str("end\n");
            }
        }
    }
    out
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_model(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use desguard_core::fixtures::*;

    const LIN: &str = "\
automaton G   # the linear plant
alphabet:
  a : obs ctrl
  b : obs ctrl
states: q0 q1
  q2
initial: q0
trans:
  q0 a q1
  q1 b q2
end
";

    #[test]
    fn parses_lin() {
        let m = parse_model(LIN).unwrap();
        let g = m.automaton("G").unwrap();
        assert_eq!(g, &fix_lin());
        assert_eq!(g.state_count(), 3);
        assert_eq!(g.transition_count(), 2);
    }

    #[test]
    fn round_trip_is_identity() {
        let m = parse_model(LIN).unwrap();
        let text = serialize_model(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
        assert_eq!(serialize_model(&parse_model(&text).unwrap()), text);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_model("automaton G\nalphabet:\n  a : obs sideways\nend\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 11));
        let e = parse_model("plant G\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_model(
            "automaton G\nalphabet:\n  a : unobs sen-attack\nstates: q\ninitial: q\nend\n",
        )
        .unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("unobservable"), "{e}");
    }

    #[test]
    fn attack_on_missing_transition() {
        let text = format!("{LIN}\nautomaton F\nalphabet:\nstates: f0\ninitial: f0\nend\nattack on G\n  target: q0 b q1 with F\nend\n");
        let e = parse_model(&text).unwrap_err();
        assert!(e.message.contains("(q0, b, q1)"), "{e}");
    }

    #[test]
    fn deletion_attack_from_text() {
        let text = "\
automaton G
alphabet:
  a : obs ctrl sen-attack
  b : obs ctrl
states: q0 q1 q2
initial: q0
trans:
  q0 a q1
  q1 b q2
end

automaton F_del
alphabet:
states: f0
initial: f0
end

attack on G
  target-event: a with F_del
end
";
        let m = parse_model(text).unwrap();
        let (g, atk) = fix_del();
        assert_eq!(m.automaton("G").unwrap(), &g);
        let parsed = m.attack_on("G").unwrap();
        assert_eq!(parsed.len(), 1);
        let f = parsed.entries().values().next().unwrap();
        assert_eq!(
            desguard_core::ops::enumerate_language(f, 3, desguard_core::Which::Marked),
            [desguard_core::Word::empty()].into_iter().collect()
        );
        assert_eq!(
            parsed.entries().keys().collect::<Vec<_>>(),
            atk.entries().keys().collect::<Vec<_>>()
        );
    }

    #[test]
    fn context_resolves_plant() {
        let plant = parse_model(LIN).unwrap();
        let text = "automaton F\nalphabet:\nstates: f0\ninitial: f0\nend\nattack on G\nend\n";
        assert!(parse_model(text).is_err());
        let m = parse_model_with(text, &[&plant]).unwrap();
        assert!(m.attack_on("G").unwrap().is_empty());
    }

    #[test]
    fn epsilon_is_reserved() {
        let e = parse_model("automaton G\nalphabet:\n  eps : obs\nstates: q\ninitial: q\nend\n")
            .unwrap_err();
        assert_eq!(e.line, 3);
    }
}

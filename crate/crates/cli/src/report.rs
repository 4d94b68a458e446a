//! Command reports. A report is a JSON object; the plain rendering prints
//! one `key: value` line per leaf, so both carry the same content.

use desguard_core::{Verdict, Word};
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub fields: Map<String, Value>,
    /// 0 when every checked property holds, 1 otherwise.
    pub status: u8,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::from(command));
        Report { fields, status: 0 }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    /// Records a verdict; a failing one makes the report fail.
    pub fn verdict(&mut self, key: &str, v: &Verdict) -> &mut Self {
        if !v.holds {
            self.status = 1;
        }
        self.set(key, verdict_value(v))
    }

    pub fn fail(&mut self) -> &mut Self {
        self.status = 1;
        self
    }

    pub fn to_json(&self) -> String {
        let mut v = self.fields.clone();
        v.insert("status".into(), Value::from(self.status));
        serde_json::to_string_pretty(&Value::Object(v)).expect("report serializes") + "\n"
    }

    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            flatten(k, v, &mut out);
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

pub fn verdict_value(v: &Verdict) -> Value {
    json!({
        "holds": v.holds,
        "detail": v.detail,
        "witness": v.witness.as_ref().map(Word::to_string),
        "event": v.witness_event.as_ref().map(|e| e.to_string()),
    })
}

pub fn words<'a>(ws: impl IntoIterator<Item = &'a Word>) -> Value {
    Value::Array(ws.into_iter().map(|w| Value::from(w.to_string())).collect())
}

pub fn names<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(
        items
            .into_iter()
            .map(|x| Value::from(x.to_string()))
            .collect(),
    )
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(key: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{key}.{k}"), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{key}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{key}.{i}"), x, out);
            }
        }
        other => out.push_str(&format!("{key}: {}\n", scalar(other))),
    }
}

/// Inverse of the plain rendering for leaves: `key -> value text`. Used to
/// compare the two output modes.
pub fn plain_leaves(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// The leaves a JSON report renders to in plain mode.
pub fn json_leaves(v: &Value) -> Vec<(String, String)> {
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, x) in m {
            flatten(k, x, &mut out);
        }
    }
    plain_leaves(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use desguard_core::fixtures::ev;

    #[test]
    fn plain_lines() {
        let mut r = Report::new("check-co");
        r.verdict(
            "verdict",
            &Verdict::fails(Word::parse("a").unwrap(), Some(ev("c")), "no"),
        );
        r.set("events", names(["a", "b"]));
        let text = r.to_plain();
        assert!(text.contains("verdict.holds: false\n"));
        assert!(text.contains("verdict.witness: a\n"));
        assert!(text.contains("verdict.event: c\n"));
        assert!(text.contains("events: [a, b]\n"));
        assert!(text.ends_with("status: 1\n"));
    }

    #[test]
    fn json_and_plain_agree() {
        let mut r = Report::new("x");
        r.verdict("v", &Verdict::holds("fine"));
        r.set(
            "items",
            Value::Array(vec![json!({"kind": "automaton", "states": 3})]),
        );
        let parsed: Value = serde_json::from_str(&r.to_json()).unwrap();
        let mut a = json_leaves(&parsed);
        let mut b = plain_leaves(&r.to_plain());
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

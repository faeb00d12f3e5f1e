//! Report records and their byte-stable serialisation.

use std::fmt::Write as _;

use serde_json::{Map, Value};

pub const SCHEMA: &str = "hypres-report/1";

/// What a check measured.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// An exact identity; `true` when the difference is identically zero.
    Exact(bool),
    /// A floating residual compared against `tolerance` (pass iff `<`).
    Residual { value: f64, tolerance: f64 },
    /// A floating quantity that must be at least `bound`.
    AtLeast { value: f64, bound: f64 },
    /// A structural property (counts, table shape).
    Holds(bool),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: Option<String>,
    pub runtime: Option<f64>,
}

impl Check {
    pub fn exact(name: impl Into<String>, zero: bool) -> Self {
        Self::with(name, Outcome::Exact(zero))
    }

    pub fn residual(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::with(name, Outcome::Residual { value, tolerance })
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::with(name, Outcome::AtLeast { value, bound })
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::with(name, Outcome::Holds(ok))
    }

    fn with(name: impl Into<String>, outcome: Outcome) -> Self {
        Check { name: name.into(), outcome, detail: None, runtime: None }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        match self.outcome {
            Outcome::Exact(z) | Outcome::Holds(z) => z,
            Outcome::Residual { value, tolerance } => value < tolerance,
            Outcome::AtLeast { value, bound } => value >= bound,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), self.name.clone().into());
        m.insert("status".into(), status(self.passed()).into());
        match &self.outcome {
            Outcome::Exact(z) => {
                m.insert("exact-zero".into(), (*z).into());
            }
            Outcome::Residual { value, tolerance } => {
                m.insert("residual".into(), num(*value));
                m.insert("tolerance".into(), num(*tolerance));
            }
            Outcome::AtLeast { value, bound } => {
                m.insert("value".into(), num(*value));
                m.insert("bound".into(), num(*bound));
            }
            Outcome::Holds(_) => {}
        }
        if let Some(d) = &self.detail {
            m.insert("detail".into(), d.clone().into());
        }
        if let Some(t) = self.runtime {
            m.insert("runtime_s".into(), num(t));
        }
        Value::Object(m)
    }
}

pub fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// Non-finite floats become strings, since JSON has no spelling for them.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub data: Value,
    /// Preformatted CSV body for commands with a tabular result.
    pub table: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), checks: Vec::new(), data: Value::Object(Map::new()), table: None }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.into(), v.into());
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), self.command.clone().into());
        m.insert("status".into(), status(self.passed()).into());
        m.insert("checks".into(), Value::Array(self.checks.iter().map(Check::to_json).collect()));
        m.insert("data".into(), self.data.clone());
        Value::Object(m)
    }

    pub fn render_json(&self) -> String {
        let mut s = canonical_json(&self.to_json());
        s.push('\n');
        s
    }

    /// The command's own table if it has one, otherwise one row per check.
    pub fn render_csv(&self) -> String {
        if let Some(t) = &self.table {
            return t.clone();
        }
        let mut out = String::from("name,status,exact_zero,value,bound\n");
        for c in &self.checks {
            let (z, v, b) = match &c.outcome {
                Outcome::Exact(z) => (z.to_string(), String::new(), String::new()),
                Outcome::Holds(_) => (String::new(), String::new(), String::new()),
                Outcome::Residual { value, tolerance } => (String::new(), float(*value), float(*tolerance)),
                Outcome::AtLeast { value, bound } => (String::new(), float(*value), float(*bound)),
            };
            let _ = writeln!(out, "{},{},{z},{v},{b}", csv_field(&c.name), status(c.passed()));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// 17 significant digits in scientific notation.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Pretty JSON with sorted keys and every float printed by [`float`].
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => out.push_str(&i.to_string()),
            (_, Some(u)) => out.push_str(&u.to_string()),
            _ => out.push_str(&float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &m[*k], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let v = json!({"b": 0.1, "a": [1, 0.375], "c": {"z": true, "y": null}});
        let s = canonical_json(&v);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("3.7500000000000000e-1"));
        assert!(s.find("\"y\"").unwrap() < s.find("\"z\"").unwrap());
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"], json!(0.1));
    }

    #[test]
    fn exact_checks_never_carry_floats() {
        let mut r = Report::new("hypres test");
        r.checks.push(Check::exact("id", true));
        r.checks.push(Check::residual("fd", 2e-7, 1e-6));
        let j = r.to_json();
        assert_eq!(j["checks"][0]["exact-zero"], json!(true));
        assert!(j["checks"][0].get("residual").is_none());
        assert_eq!(j["status"], json!("pass"));
        r.checks.push(Check::at_least("snr", 5.0, 10.0));
        assert!(!r.passed());
        assert!(r.render_csv().starts_with("name,status,"));
    }
}

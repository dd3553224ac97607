use ngit_core::exactnum::{ExactRational, TruncSeries};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value as Json};

use crate::run::{Failure, Outcome, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Latex => "tex",
        }
    }
}

/// Integers plainly, otherwise `p/q`.
pub fn plain_rational(q: &ExactRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn latex_rational(q: &ExactRational) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", q.numer().abs(), q.denom())
}

pub fn latex_series(s: &TruncSeries) -> String {
    let mut out = String::new();
    for (i, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        if i == 0 || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        match i {
            0 => {}
            1 => out.push('t'),
            _ => out.push_str(&format!("t^{{{i}}}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Number(q) => plain_rational(q),
        Value::Series(s) => s.to_string(),
    }
}

fn value_latex(v: &Value) -> String {
    match v {
        Value::Number(q) => latex_rational(q),
        Value::Series(s) => latex_series(s),
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn text(o: &Outcome) -> String {
    let mut lines = vec![value_text(&o.value)];
    for c in &o.checks {
        lines.push(format!("check {}: {} ({})", c.name, pass(c.ok), c.detail));
    }
    lines.join("\n")
}

pub fn latex(o: &Outcome) -> String {
    let mut lines = vec![format!("${}$", value_latex(&o.value))];
    for c in &o.checks {
        lines.push(format!("% check {}: {}", c.name, pass(c.ok)));
    }
    lines.join("\n")
}

pub fn json_outcome(file: &str, o: &Outcome) -> Json {
    let checks: Vec<Json> =
        o.checks.iter().map(|c| json!({ "name": c.name, "ok": c.ok, "detail": c.detail })).collect();
    json!({
        "file": file,
        "mode": o.mode.to_string(),
        "result": o.result_json(),
        "checks": checks,
        "diagnostics": o.warnings,
    })
}

pub fn json_failure(file: &str, f: &Failure) -> Json {
    let (kind, message) = match f {
        Failure::Invalid(i) => ("validation", i.to_string()),
        Failure::Compute(m) => ("computation", m.clone()),
    };
    json!({ "file": file, "error": { "kind": kind, "message": message } })
}

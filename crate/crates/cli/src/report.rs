use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Core(runkey::Error),
    Io { path: PathBuf, message: String },
    Usage(String),
}

impl From<runkey::Error> for CliError {
    fn from(e: runkey::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), message: err.to_string() }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "io_error",
            CliError::Usage(_) => "usage_error",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => EXIT_BUDGET,
            _ => EXIT_VALIDATION,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io { path, message } => format!("{}: {message}", path.display()),
            CliError::Usage(m) => m.clone(),
        }
    }

    pub fn record(&self) -> Value {
        json!({
            "tool": "runkey",
            "version": env!("CARGO_PKG_VERSION"),
            "error": { "code": self.code(), "message": self.message() },
            "exit_status": self.exit_status(),
        })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Result of one command: the report body and whether every checked verdict held.
pub struct Outcome {
    pub body: Value,
    pub verified: bool,
}

impl Outcome {
    pub fn ok(body: impl Serialize) -> Self {
        Self { body: to_value(body), verified: true }
    }

    pub fn checked(body: impl Serialize, verified: bool) -> Self {
        Self { body: to_value(body), verified }
    }

    pub fn exit_status(&self) -> i32 {
        if self.verified {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        }
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values are plain data")
}

/// Full report: a header echoing the configuration, then the command output.
pub fn document(cli: &Cli, outcome: &Outcome) -> Value {
    let command = match to_value(&cli.command) {
        Value::Object(map) => map.keys().next().cloned().unwrap_or_default(),
        Value::String(s) => s,
        _ => String::new(),
    };
    json!({
        "header": {
            "tool": "runkey",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "seed": cli.global.seed,
            "config": to_value(cli),
        },
        "verified": outcome.verified,
        "exit_status": outcome.exit_status(),
        "result": outcome.body,
    })
}

pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Report => {
            let mut s = serde_json::to_string_pretty(doc).expect("serialisable");
            s.push('\n');
            s
        }
        Format::Summary => {
            let mut out = String::new();
            flatten("", doc, &mut out);
            out
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, out);
            }
        }
        Value::Null => {
            let _ = writeln!(out, "{prefix}\t");
        }
        Value::String(s) => {
            let clean: String = s.chars().map(|c| if c == '\t' || c == '\n' { ' ' } else { c }).collect();
            let _ = writeln!(out, "{prefix}\t{clean}");
        }
        other => {
            let _ = writeln!(out, "{prefix}\t{other}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_flattens_nested_values() {
        let v = json!({"a": {"b": [1, 2.5]}, "c": "x\ty", "d": null});
        assert_eq!(render(&v, Format::Summary), "a.b.0\t1\na.b.1\t2.5\nc\tx y\nd\t\n");
    }
}

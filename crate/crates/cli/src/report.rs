//! Run reports: a fixed header, ordered output fields, and optional timing.
//!
//! The machine form is one `key=value` record per line. Values never contain
//! newlines, and parsing then re-emitting a machine report reproduces it byte
//! for byte.

use std::fmt;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

pub const TOOL: &str = "tisparse";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const HEADER: [&str; 4] = ["tool", "version", "subcommand", "input_sha256"];
const TIMING_KEY: &str = "elapsed_us";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub subcommand: String,
    pub version: String,
    /// SHA-256 of the canonical input bytes, lowercase hex.
    pub input_digest: String,
    pub outputs: Vec<(String, String)>,
    /// Present only when timing was requested, so reports stay deterministic by default.
    pub elapsed_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ReportParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "report line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ReportParseError {}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn valid_key(key: &str) -> bool {
    !key.is_empty() && !key.contains(['=', '\n', '\r']) && !HEADER.contains(&key) && key != TIMING_KEY
}

/// Collapses a value onto one line.
fn one_line(value: &str) -> String {
    value.replace(['\n', '\r'], " ")
}

impl RunReport {
    pub fn new(subcommand: &str, canonical_input: &[u8]) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            version: VERSION.to_string(),
            input_digest: digest(canonical_input),
            outputs: Vec::new(),
            elapsed_us: None,
        }
    }

    /// Appends an output field. Keys must be unique and not collide with the header.
    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        let key = key.into();
        assert!(valid_key(&key), "invalid report key `{key}`");
        debug_assert!(self.get(&key).is_none(), "duplicate report key `{key}`");
        self.outputs.push((key, one_line(&value.to_string())));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.outputs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_machine(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tool={TOOL}");
        let _ = writeln!(s, "version={}", self.version);
        let _ = writeln!(s, "subcommand={}", self.subcommand);
        let _ = writeln!(s, "input_sha256={}", self.input_digest);
        for (k, v) in &self.outputs {
            let _ = writeln!(s, "{k}={v}");
        }
        if let Some(us) = self.elapsed_us {
            let _ = writeln!(s, "{TIMING_KEY}={us}");
        }
        s
    }

    pub fn to_text(&self) -> String {
        self.text_summary(false)
    }

    /// Text form; with `skip_indexed`, per-item records such as `check.3`
    /// are left out because a body already lists them.
    pub fn text_summary(&self, skip_indexed: bool) -> String {
        let mut s = format!("{TOOL} {} {}\n", self.version, self.subcommand);
        let _ = writeln!(s, "input sha256: {}", self.input_digest);
        for (k, v) in &self.outputs {
            if skip_indexed && k.contains('.') {
                continue;
            }
            let _ = writeln!(s, "{k}: {v}");
        }
        if let Some(us) = self.elapsed_us {
            let _ = writeln!(s, "elapsed: {:.3} ms", us as f64 / 1000.0);
        }
        s
    }

    /// Strict inverse of [`RunReport::to_machine`].
    pub fn parse_machine(text: &str) -> Result<Self, ReportParseError> {
        let err = |line: usize, message: String| ReportParseError { line, message };
        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| err(text.lines().count().max(1), "missing final newline".into()))?;
        let mut header = Vec::new();
        let mut outputs = Vec::new();
        let mut elapsed_us = None;
        for (idx, line) in body.split('\n').enumerate() {
            let n = idx + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(n, "expected `key=value`".into()))?;
            if line.contains('\r') {
                return Err(err(n, "carriage return in record".into()));
            }
            if elapsed_us.is_some() {
                return Err(err(n, format!("record after `{TIMING_KEY}`")));
            }
            if idx < HEADER.len() {
                if key != HEADER[idx] {
                    return Err(err(n, format!("expected `{}`", HEADER[idx])));
                }
                header.push(value.to_string());
                continue;
            }
            if key == TIMING_KEY {
                let us: u64 = value.parse().map_err(|_| err(n, "elapsed_us is not an integer".into()))?;
                if us.to_string() != value {
                    return Err(err(n, "elapsed_us is not in canonical form".into()));
                }
                elapsed_us = Some(us);
                continue;
            }
            if !valid_key(key) {
                return Err(err(n, format!("invalid key `{key}`")));
            }
            if outputs.iter().any(|(k, _): &(String, String)| k == key) {
                return Err(err(n, format!("duplicate key `{key}`")));
            }
            outputs.push((key.to_string(), value.to_string()));
        }
        if header.len() < HEADER.len() {
            return Err(err(header.len() + 1, "truncated header".into()));
        }
        if header[0] != TOOL {
            return Err(err(1, format!("tool is `{}`, expected `{TOOL}`", header[0])));
        }
        let [_, version, subcommand, input_digest] = <[String; 4]>::try_from(header).expect("four header records");
        Ok(Self {
            subcommand,
            version,
            input_digest,
            outputs,
            elapsed_us,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_form_round_trips() {
        let mut r = RunReport::new("solve", b"model=heisenberg\n");
        r.push("answer", "yes");
        r.push("lambda", -3.0);
        r.push("note", "two\nlines");
        r.elapsed_us = Some(1234);
        let text = r.to_machine();
        let parsed = RunReport::parse_machine(&text).unwrap();
        assert_eq!(parsed, r);
        assert_eq!(parsed.to_machine(), text);
        assert_eq!(r.get("note"), Some("two lines"));
    }

    #[test]
    fn malformed_reports_rejected() {
        let good = RunReport::new("build", b"").to_machine();
        assert!(RunReport::parse_machine(good.trim_end()).is_err());
        assert!(RunReport::parse_machine(&good.replace("tool=", "tol=")).is_err());
        assert!(RunReport::parse_machine(&(good.clone() + "x=1\nx=2\n")).is_err());
        assert!(RunReport::parse_machine(&(good.clone() + "elapsed_us=07\n")).is_err());
        assert!(RunReport::parse_machine(&(good + "elapsed_us=7\ny=1\n")).is_err());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}

//! Line-oriented run reports with input digests and per-check witnesses.
//!
//! The machine-readable section is one `key<TAB>value` record per line. A
//! payload (a model or complex in its text format), when present, follows
//! after one blank line. Timing is kept out of the rendered text so that
//! equal inputs give byte-identical reports.

use std::time::Duration;

use sha2::{Digest, Sha256};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Failures of advisory checks are reported but do not fail the run.
    pub required: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    command: String,
    inputs: Vec<(String, String)>,
    fields: Vec<(String, String)>,
    checks: Vec<Check>,
    payload: Option<String>,
    elapsed: Option<Duration>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Newlines would break the record structure.
fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

/// Witnesses are the last column, so tabs go too.
fn flatten(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport { command: command.into(), ..Default::default() }
    }

    pub fn input(&mut self, label: &str, bytes: &[u8]) -> &mut Self {
        self.inputs.push((label.to_string(), sha256_hex(bytes)));
        self
    }

    /// A record; tabs in `value` separate further columns.
    pub fn field(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        self.fields.push((key.to_string(), one_line(value.as_ref())));
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, witness: Option<String>) -> &mut Self {
        self.push_check(name, passed, true, witness)
    }

    pub fn advisory_check(&mut self, name: &str, passed: bool, witness: Option<String>) -> &mut Self {
        self.push_check(name, passed, false, witness)
    }

    fn push_check(&mut self, name: &str, passed: bool, required: bool, witness: Option<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            required,
            witness: witness.map(|w| flatten(&w)),
        });
        self
    }

    pub fn payload(&mut self, text: String) -> &mut Self {
        self.payload = Some(text);
        self
    }

    pub fn set_elapsed(&mut self, elapsed: Duration) {
        self.elapsed = Some(elapsed);
    }

    pub fn elapsed(&self) -> Option<Duration> {
        self.elapsed
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("command\t{}\n", flatten(&self.command));
        for (label, digest) in &self.inputs {
            out.push_str(&format!("input\t{label}\tsha256:{digest}\n"));
        }
        for (k, v) in &self.fields {
            out.push_str(&format!("{k}\t{v}\n"));
        }
        for c in &self.checks {
            let verdict = match (c.passed, c.required) {
                (true, _) => "pass",
                (false, true) => "fail",
                (false, false) => "fail-advisory",
            };
            out.push_str(&format!("check\t{}\t{verdict}", c.name));
            if let Some(w) = &c.witness {
                out.push('\t');
                out.push_str(w);
            }
            out.push('\n');
        }
        out.push_str(&format!("status\t{}\n", if self.passed() { "pass" } else { "fail" }));
        if let Some(p) = &self.payload {
            out.push('\n');
            out.push_str(p);
        }
        out
    }
}

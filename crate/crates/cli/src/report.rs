//! Line-delimited run reports.
//!
//! ```text
//! colimkit-report 1
//! command <name>
//! input <argument> sha256:<hex>      one line per input file
//! budget <n>
//! seed <n|none>
//! subject <item name>                 when an item was selected
//! outcome <pass|fail|error|budget>
//! tally <key> <value>                 in the order the command records them
//! violation <text>                    newlines escaped as \n
//! end
//! ```
//!
//! Wall time is not part of the report so that reports are byte-stable; the
//! binary prints it on stderr.

use std::fmt::Write as _;

use colimkit::Error;

pub const REPORT_HEADER: &str = "colimkit-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Error,
    Budget,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
            Outcome::Budget => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Error => "error",
            Outcome::Budget => "budget",
        }
    }

    /// Budget exhaustion maps to its own outcome; everything else a
    /// construction rejects is an input error.
    pub fn of_error(e: &Error) -> Outcome {
        match e {
            Error::BudgetExceeded { .. } | Error::SaturationExceeded { .. } => Outcome::Budget,
            _ => Outcome::Error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    /// `(argument as given, sha256 hex of the file bytes)`.
    pub inputs: Vec<(String, String)>,
    pub budget: u64,
    pub seed: Option<u64>,
    pub subject: Option<String>,
    pub outcome: Outcome,
    pub tallies: Vec<(String, u64)>,
    pub violations: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, budget: u64, seed: Option<u64>) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs: Vec::new(),
            budget,
            seed,
            subject: None,
            outcome: Outcome::Pass,
            tallies: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn tally(&mut self, key: impl Into<String>, value: impl TryInto<u64>) {
        self.tallies.push((key.into(), value.try_into().unwrap_or(u64::MAX)));
    }

    pub fn tally_flag(&mut self, key: impl Into<String>, value: bool) {
        self.tally(key, u64::from(value));
    }

    /// Records the violations and fails the run if there are any.
    pub fn fail_with(&mut self, violations: impl IntoIterator<Item = String>) {
        self.violations.extend(violations);
        if !self.violations.is_empty() && self.outcome == Outcome::Pass {
            self.outcome = Outcome::Fail;
        }
    }

    pub fn abort(&mut self, e: &Error) {
        self.outcome = Outcome::of_error(e);
        self.violations.push(e.to_string());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{REPORT_HEADER} {REPORT_VERSION}");
        let _ = writeln!(out, "command {}", self.command);
        for (arg, digest) in &self.inputs {
            let _ = writeln!(out, "input {} sha256:{digest}", escape(arg));
        }
        let _ = writeln!(out, "budget {}", self.budget);
        match self.seed {
            Some(s) => {
                let _ = writeln!(out, "seed {s}");
            }
            None => out.push_str("seed none\n"),
        }
        if let Some(s) = &self.subject {
            let _ = writeln!(out, "subject {}", escape(s));
        }
        let _ = writeln!(out, "outcome {}", self.outcome.as_str());
        for (k, v) in &self.tallies {
            let _ = writeln!(out, "tally {k} {v}");
        }
        for v in &self.violations {
            let _ = writeln!(out, "violation {}", escape(v));
        }
        out.push_str("end\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n")
}

//! Structured text reports: inputs, outputs, checks and failures of one run.

use std::fmt::Write as _;
use std::time::Duration;

use num_complex::Complex64;

use crate::error::Error;

/// One comparison with its tolerance and the oracle it comes from.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub tolerance: f64,
    pub oracle: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub name: String,
    pub value: String,
    pub error_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<Output>,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
    /// Rendered only when set, so reports stay byte-identical by default.
    pub wall_time: Option<Duration>,
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.15e}", z.re)
    } else {
        format!("{:.15e}{:+.15e}i", z.re, z.im)
    }
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) {
        self.inputs.push((name.to_string(), value.to_string()));
    }

    pub fn output(&mut self, name: &str, value: Complex64, error_estimate: Option<f64>) {
        self.outputs.push(Output { name: name.to_string(), value: fmt_complex(value), error_estimate });
    }

    pub fn output_text(&mut self, name: &str, value: impl ToString) {
        self.outputs.push(Output { name: name.to_string(), value: value.to_string(), error_estimate: None });
    }

    /// Passes when `|got - expected| <= tol * max(scale, |expected|)`; `scale = 0` is a relative check.
    pub fn check_close(&mut self, name: &str, expected: Complex64, got: Complex64, tol: f64, scale: f64, oracle: &str) -> bool {
        let abs_dev = (got - expected).norm();
        let denom = expected.norm().max(scale);
        let rel_dev = if denom > 0.0 { abs_dev / denom } else { abs_dev };
        let pass = abs_dev.is_finite() && rel_dev <= tol;
        self.checks.push(Check {
            name: name.to_string(),
            expected: fmt_complex(expected),
            got: fmt_complex(got),
            abs_dev,
            rel_dev,
            tolerance: tol,
            oracle: oracle.to_string(),
            pass,
        });
        pass
    }

    /// Passes when `value <= bound`.
    pub fn check_below(&mut self, name: &str, value: f64, bound: f64, oracle: &str) -> bool {
        let pass = value <= bound;
        self.checks.push(Check {
            name: name.to_string(),
            expected: format!("<= {bound:e}"),
            got: format!("{value:.6e}"),
            abs_dev: value,
            rel_dev: value / bound,
            tolerance: bound,
            oracle: oracle.to_string(),
            pass,
        });
        pass
    }

    pub fn check_true(&mut self, name: &str, cond: bool, detail: &str, oracle: &str) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            expected: "true".into(),
            got: if detail.is_empty() { cond.to_string() } else { format!("{cond} ({detail})") },
            abs_dev: if cond { 0.0 } else { 1.0 },
            rel_dev: if cond { 0.0 } else { 1.0 },
            tolerance: 0.0,
            oracle: oracle.to_string(),
            pass: cond,
        });
        cond
    }

    /// Records an error; a failed computation fails the run.
    pub fn fail(&mut self, context: &str, err: &Error) {
        self.failures.push(format!("{context}: {err}"));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passed and nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn merge(&mut self, other: RunReport) {
        self.inputs.extend(other.inputs);
        self.outputs.extend(other.outputs);
        self.checks.extend(other.checks);
        self.failures.extend(other.failures);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "input {k} = {v}");
        }
        for o in &self.outputs {
            match o.error_estimate {
                Some(e) => {
                    let _ = writeln!(s, "output {} = {} error={:.3e}", o.name, o.value, e);
                }
                None => {
                    let _ = writeln!(s, "output {} = {}", o.name, o.value);
                }
            }
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "check {} status={} expected={} got={} abs={:.3e} rel={:.3e} tol={:.1e} oracle={}",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.expected,
                c.got,
                c.abs_dev,
                c.rel_dev,
                c.tolerance,
                c.oracle
            );
        }
        for f in &self.failures {
            let _ = writeln!(s, "failure {f}");
        }
        if let Some(t) = self.wall_time {
            let _ = writeln!(s, "wall_time {:.3}s", t.as_secs_f64());
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(
            s,
            "summary checks={} passed={} failed={} failures={} status={}",
            self.checks.len(),
            passed,
            self.checks.len() - passed,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        s
    }
}

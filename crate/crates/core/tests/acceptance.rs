//! Acceptance criteria: one PASS/FAIL line each, full report on failure.

use std::process::ExitCode;
use std::time::Instant;

use connint::verify::{run_criterion, CRITERIA};

/// Wall-clock budgets in seconds.
fn budget(id: usize) -> Option<f64> {
    match id {
        1 => Some(30.0),
        3 => Some(1.0),
        11 => Some(5.0),
        _ => None,
    }
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for c in CRITERIA.iter() {
        let start = Instant::now();
        let report = match run_criterion(c.id) {
            Ok(r) => r,
            Err(e) => {
                println!("criterion {:>2} FAIL {}: {e}", c.id, c.name);
                failed.push(c.id);
                continue;
            }
        };
        let secs = start.elapsed().as_secs_f64();
        let in_time = budget(c.id).is_none_or(|b| secs < b);
        let pass = report.passed() && in_time;
        let limit = budget(c.id).map(|b| format!(" of {b:.0}s")).unwrap_or_default();
        println!(
            "criterion {:>2} {} {} ({} checks, {:.2}s{})",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            report.checks.len(),
            secs,
            limit
        );
        if !pass {
            print!("{}", report.render());
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}

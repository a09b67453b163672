//! Reporting harness for the acceptance suite: each criterion collects
//! failures and notes, then prints a single PASS/FAIL line.

use std::time::{Duration, Instant};

/// Result of one criterion: failures collected as human-readable notes.
#[derive(Debug, Default)]
pub struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    pub fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn note(&mut self, line: String) {
        self.notes.push(line);
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }
}

/// Runs one criterion, fails it when it exceeds `budget`, prints the report
/// and returns whether it passed.
pub fn run(id: u32, title: &str, budget: Duration, body: impl FnOnce(&mut Check)) -> bool {
    let start = Instant::now();
    let mut check = Check::default();
    body(&mut check);
    let elapsed = start.elapsed();
    check.require(elapsed <= budget, || {
        format!("took {elapsed:.2?}, budget {budget:.0?}")
    });
    let pass = check.failures.is_empty();
    println!(
        "[{}] {id:>2}. {title} ({elapsed:.2?})",
        if pass { "PASS" } else { "FAIL" }
    );
    for note in &check.notes {
        println!("        {note}");
    }
    for failure in check.failures.iter().take(10) {
        println!("        failed: {failure}");
    }
    if check.failures.len() > 10 {
        println!("        ... {} more", check.failures.len() - 10);
    }
    pass
}

//! Runs every acceptance criterion and prints one line each.

use shapkit::suites::{self, SuiteConfig, NAMES};
use std::process::ExitCode;

/// Wall-clock limits in seconds, by criterion.
const BUDGETS: [(u8, f64); 12] = [
    (1, 10.0),
    (2, 120.0),
    (3, 120.0),
    (4, 60.0),
    (5, 60.0),
    (6, 60.0),
    (7, 60.0),
    (8, 30.0),
    (9, 60.0),
    (10, 60.0),
    (11, 30.0),
    (12, 60.0),
];

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut all = true;
    for (id, _) in NAMES {
        let r = suites::run(id, &cfg);
        let budget = BUDGETS.iter().find(|(i, _)| *i == id).map(|(_, b)| *b).unwrap_or(60.0);
        let in_time = r.seconds <= budget;
        let ok = r.passed && in_time;
        all &= ok;
        println!("{}{}", r.line(), if in_time { String::new() } else { format!(" [over {budget}s budget]") });
        for n in &r.notes {
            println!("    note: {n}");
        }
        for f in r.failures.iter().skip(1).take(5) {
            println!("    also: {f}");
        }
    }
    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILURES" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

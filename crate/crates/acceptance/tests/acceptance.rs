//! Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::time::Instant;

use gme_acceptance::{CRITERIA, SUITE_LIMIT};

fn main() {
    let start = Instant::now();
    let mut failed = 0;
    for (k, c) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let outcome = (c.check)();
        let elapsed = t.elapsed();
        let in_time = elapsed <= c.limit;
        let (pass, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        let late = if in_time { "" } else { ", over time limit" };
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {}: {detail} [{elapsed:.2?}{late}]",
            k + 1,
            c.title
        );
        failed += usize::from(!pass);
    }
    let total = start.elapsed();
    let over = if total <= SUITE_LIMIT {
        ""
    } else {
        ", over suite limit"
    };
    println!(
        "acceptance: {} passed, {failed} failed [{total:.1?}{over}]",
        CRITERIA.len() - failed
    );
    if failed > 0 || total > SUITE_LIMIT {
        std::process::exit(1);
    }
}

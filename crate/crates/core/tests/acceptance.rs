//! The ten acceptance criteria at their pinned sizes and tolerances.
//! The per-criterion lines go straight to stderr so they show up even when
//! the test harness captures output.

use std::io::Write;
use std::time::Instant;

use amalgam::checks;
use amalgam::report::Status;

const SEED: u64 = 7;
const TOL: f64 = 1e-9;

fn say(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let rows = checks::headline(1.0, SEED, TOL);
    assert_eq!(rows.len(), 10);
    let mut failed = Vec::new();
    for (n, row) in rows.iter().enumerate() {
        let verdict = match row.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
        };
        say(format!("criterion {:>2} {:<20} {verdict}: {}", n + 1, row.id, row.detail));
        if row.status == Status::Fail {
            failed.push(n + 1);
        }
    }
    say(format!("acceptance finished in {:.2?}", start.elapsed()));
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn axiom_suite_is_fast() {
    let start = Instant::now();
    let row = checks::axioms();
    assert_eq!(row.status, Status::Pass, "{}", row.detail);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::process::Command;

use twisted_h1::reference_tables::{self, CriterionReport};

fn report(r: &CriterionReport) -> bool {
    println!("{}", r.summary_line());
    for c in r.failures() {
        println!("    {}: expected {}, got {}", c.case, c.expected, c.actual);
    }
    r.passed()
}

fn main() {
    let mut ok = true;
    for r in reference_tables::run_all() {
        ok &= report(&r);
    }
    let status = Command::new(env!("CARGO_BIN_EXE_twisted-h1"))
        .arg("paper-tables")
        .output()
        .expect("binary runs");
    let pass = status.status.success();
    println!(
        "criterion 11 {}: paper-tables subcommand exits 0 (exit code {})",
        if pass { "PASS" } else { "FAIL" },
        status
            .status
            .code()
            .map_or("signal".to_string(), |c| c.to_string())
    );
    ok &= pass;
    if !ok {
        std::process::exit(1);
    }
}

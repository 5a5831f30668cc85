//! Runs the ten acceptance criteria and prints one PASS/FAIL line each.
//! Set CALOGERO_QUICK=1 for the reduced grid.

use std::process::ExitCode;

use calogero::acceptance::run_all;

fn main() -> ExitCode {
    let quick = std::env::var("CALOGERO_QUICK").is_ok_and(|v| v == "1");
    let reports = run_all(quick);
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let detail = r.first_failure().unwrap_or_else(|| format!("{} checks", r.rows.len()));
        println!(
            "criterion {:>2} {status}  {:<36} {:>7.2} s  {detail}",
            r.id, r.title, r.elapsed_s
        );
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

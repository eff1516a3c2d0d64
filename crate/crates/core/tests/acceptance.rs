use std::process::ExitCode;

use qarith::claims::{self, Status};
use qarith::physical::PhysicalParams;
use qarith::verify::DEFAULT_SEED;

// Custom harness so the per-criterion lines show without --nocapture.
fn main() -> ExitCode {
    let checks = claims::run_claims(&PhysicalParams::default(), DEFAULT_SEED);
    if let Err(e) = claims::audit(&checks) {
        eprintln!("claim list does not match the acceptance criteria: {e}");
        return ExitCode::FAILURE;
    }
    for (i, c) in checks.iter().enumerate() {
        let verdict = if c.status == Status::Pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{}] {verdict}: {} | {}", i + 1, c.claim_id, c.description, c.observed);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.claim_id.as_str()).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", checks.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}

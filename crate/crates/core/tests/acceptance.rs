//! Acceptance criteria 1 to 9, one line per criterion.

use std::process::ExitCode;

use equisplit::acceptance::{run_suite, SuiteConfig};

fn main() -> ExitCode {
    let outcomes = run_suite(&SuiteConfig::default());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}

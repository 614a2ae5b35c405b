use std::process::ExitCode;
use std::time::Instant;

use cuspidal::selftest::{run_one, SelftestConfig};

fn main() -> ExitCode {
    let cfg = SelftestConfig::default();
    let mut failed = 0;
    for id in 1..=11 {
        let start = Instant::now();
        let outcome = run_one(id, &cfg);
        println!("{outcome} ({:.1}s)", start.elapsed().as_secs_f64());
        failed += !outcome.pass as usize;
    }
    println!("acceptance: {} of 11 criteria pass", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! `INVSET_LEVEL=quick` runs the reduced sizes.

use std::process::ExitCode;

use invset_cli::verify::{criterion_ids, verify_one, Level};

fn main() -> ExitCode {
    invset_cli::init_threads();
    let level = match std::env::var("INVSET_LEVEL").as_deref() {
        Ok("quick") => Level::Quick,
        _ => Level::Full,
    };
    println!("acceptance suite ({level:?})");
    let mut failed = Vec::new();
    for id in criterion_ids() {
        let r = verify_one(id, level).expect("known criterion");
        println!("{r}");
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

//! Run a scenario file from code and print the check outcomes.
//!
//! cargo run --release --example run_scenario -- scenarios/delta-1d.toml

use microspec::scenario::{exit_code, run_scenario};
use std::path::PathBuf;

fn main() {
    let path: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "scenarios/delta-1d.toml".into()).into();
    let out = std::env::temp_dir().join("microspec-example");
    let r = run_scenario(&path, &["ladder.count=10".into()], Some(&out));
    match &r {
        Ok(rep) => {
            for c in &rep.checks {
                println!("{:<14} {}", c.name, if !c.applicable { "n/a" } else if c.pass { "pass" } else { "fail" });
            }
            println!("{} samples, reports in {}", rep.samples.len(), out.display());
        }
        Err(e) => println!("error: {e}"),
    }
    std::process::exit(exit_code(&r));
}

use clap::{Parser, Subcommand};
use microspec::distributions::catalog_entries;
use microspec::scenario::{exit_code, run_scenario, self_test, Scenario};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "microspec", version, about = "Wavefront-set and correlation-spectrum estimation scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write decay.csv, summary.json and wf_map.svg.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; falls back to MICROSPEC_THREADS, then to the scenario.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// `key=value` with a dotted key, e.g. `ladder.count=10`. Repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Print the catalog keys the `target` field accepts.
    ListCatalog,
    /// Run the bundled harness scenarios and check their exit statuses.
    SelfTest {
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn env_threads() -> Option<usize> {
    std::env::var("MICROSPEC_THREADS").ok().and_then(|v| v.trim().parse().ok()).filter(|n| *n > 0)
}

fn init_pool(n: Option<usize>) {
    if let Some(n) = n {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListCatalog => {
            for (key, desc) in catalog_entries() {
                println!("{key:<28} {desc}");
            }
            ExitCode::SUCCESS
        }
        Command::SelfTest { threads } => {
            init_pool(threads.or_else(env_threads));
            let dir = std::env::temp_dir().join(format!("microspec-self-test-{}", std::process::id()));
            let cases = match self_test(&dir) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("self-test: {e}");
                    return ExitCode::from(1);
                }
            };
            let mut ok = true;
            for c in &cases {
                let pass = c.got == c.expected;
                ok &= pass;
                println!("{} {:<16} expected exit {} got {} ({})", if pass { "PASS" } else { "FAIL" }, c.scenario, c.expected, c.got, c.message);
            }
            let _ = std::fs::remove_dir_all(&dir);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Command::Run { scenario, out, threads, seed, mut overrides } => {
            if let Some(s) = seed {
                overrides.push(format!("seed={s}"));
            }
            let from_file = || Scenario::load(&scenario, &overrides).ok().and_then(|s| s.threads);
            init_pool(threads.or_else(env_threads).or_else(from_file));
            let r = run_scenario(&scenario, &overrides, out.as_deref());
            match &r {
                Ok(rep) => {
                    for c in &rep.checks {
                        let status = if !c.applicable { "n/a " } else if c.pass { "pass" } else { "FAIL" };
                        println!("{status} {}", c.name);
                    }
                    println!("{}: {}", rep.name, if rep.pass() { "all checks pass" } else { "check failure" });
                }
                Err(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&r) as u8)
        }
    }
}

//! Run the closed-form vs Monte Carlo agreement suite and print the
//! check table. Add a seed/path count as positional arguments to vary
//! the run; pass `--negative-control` to watch the suite catch a
//! deliberately wrong closed form.
//!
//! ```bash
//! cargo run --example monte_carlo_check
//! cargo run --example monte_carlo_check -- 7 2000000
//! cargo run --example monte_carlo_check -- 42 500000 --negative-control
//! ```

use std::process::ExitCode;

use hedgekit::verify::{self, VerifyOptions};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut opts = VerifyOptions {
        paths: 500_000,
        ..VerifyOptions::default()
    };
    let mut positional = args.iter().filter(|a| !a.starts_with("--"));
    if let Some(seed) = positional.next() {
        opts.seed = seed.parse().expect("seed must be an integer");
    }
    if let Some(paths) = positional.next() {
        opts.paths = paths.parse().expect("paths must be an integer");
    }
    opts.negative_control = args.iter().any(|a| a == "--negative-control");

    let report = match verify::run_verification(&opts) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::FAILURE;
        }
    };
    let mut stdout = std::io::stdout().lock();
    report.write_text(&mut stdout).expect("stdout");
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::process::ExitCode;

fn main() -> ExitCode {
    hedgekit::cli::run()
}

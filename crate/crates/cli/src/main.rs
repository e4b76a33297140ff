use std::process::ExitCode;

use clap::Parser;
use rednoise_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            // Data may go to stdout, so the summary goes to stderr.
            for line in outcome.lines.iter().chain(&outcome.check_lines()) {
                eprintln!("{line}");
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.report_line());
            ExitCode::from(2)
        }
    }
}

use std::process::ExitCode;

use clap::Parser;
use modmix::cli::{Cli, RunConfig};
use modmix::commands;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.global.output;
    let config = RunConfig::from(cli);
    match commands::run(&config).map(|r| (r.render(output), r.any_failed())) {
        Ok((text, failed)) => {
            print!("{text}");
            if failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

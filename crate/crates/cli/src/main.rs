use std::io::Write;
use std::process::ExitCode;

use blowent_cli::{exit_code, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = report.render(cli.format);
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("blowent: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

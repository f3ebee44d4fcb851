use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use colimkit_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = run(&cli);
    let mut text = report.render();
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &text) {
            report.outcome = colimkit_cli::Outcome::Error;
            report
                .violations
                .push(format!("cannot write report `{}`: {e}", path.display()));
            text = report.render();
        }
    }
    print!("{text}");
    let _ = std::io::stdout().flush();
    eprintln!("wall-time {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(report.outcome.exit_code() as u8)
}

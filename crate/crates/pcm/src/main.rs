use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use pcm::cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_USAGE
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use clifft::cli::{run, Cli};
use clifft::parallel::init_pool;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = init_pool().and_then(|_| run(cli, &mut out));
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::io;
use std::process::ExitCode;

use antispin::{commands, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = match commands::run(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    };
    ExitCode::from(code as u8)
}

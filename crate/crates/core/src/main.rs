use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = match conefix::cli::Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(conefix::cli::run(&args) as u8)
}

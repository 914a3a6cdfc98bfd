use std::io::Write;
use std::process::ExitCode;

use diffops::cli::{main_with_args, EXIT_USAGE};

fn main() -> ExitCode {
    let outcome = main_with_args(std::env::args_os());
    if outcome.status == EXIT_USAGE {
        eprint!("{}", outcome.output);
    } else {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(outcome.output.as_bytes());
        let _ = stdout.flush();
    }
    ExitCode::from(outcome.status as u8)
}

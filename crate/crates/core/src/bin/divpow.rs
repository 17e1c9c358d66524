use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = divpow::cli::run(std::env::args_os());
    if outcome.code == divpow::cli::EXIT_OK || outcome.code == divpow::cli::EXIT_VERIFY {
        print!("{}", outcome.output);
    } else {
        eprint!("{}", outcome.output);
    }
    ExitCode::from(outcome.code as u8)
}

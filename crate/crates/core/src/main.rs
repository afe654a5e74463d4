use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = partreg::cli::run(std::env::args_os());
    let text = outcome.render();
    if outcome.report.is_none() && outcome.exit_code != 0 {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
    ExitCode::from(outcome.exit_code as u8)
}

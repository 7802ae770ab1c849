use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = equideg_cli::run(std::env::args_os());
    // a closed pipe downstream is not an error of ours
    let _ = if outcome.code == equideg_cli::EXIT_USAGE {
        writeln!(std::io::stderr(), "{}", outcome.text.trim_end())
    } else {
        writeln!(std::io::stdout(), "{}", outcome.text.trim_end())
    };
    if let Some(doc) = &outcome.json {
        let _ = writeln!(std::io::stdout(), "{doc}");
    }
    ExitCode::from(outcome.code as u8)
}

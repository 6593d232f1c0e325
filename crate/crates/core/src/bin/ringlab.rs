use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, output) = ringlab::cli::run(std::env::args_os().skip(1));
    let written = if code == 0 {
        std::io::stdout().write_all(output.as_bytes())
    } else {
        std::io::stderr().write_all(output.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}

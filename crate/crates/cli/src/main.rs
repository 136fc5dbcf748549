use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = psys_cli::run(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}

use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out, diagnostics) = goodring::cli::run_with_diagnostics(std::env::args_os());
    println!("{out}");
    for d in diagnostics {
        eprintln!("{d}");
    }
    ExitCode::from(code as u8)
}

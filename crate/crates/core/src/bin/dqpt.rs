use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(f) = dqpt::cli::configure_threads() {
        eprintln!("dqpt: {}", f.message);
        return ExitCode::from(f.code as u8);
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    ExitCode::from(dqpt::cli::run(&args) as u8)
}

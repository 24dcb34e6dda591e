use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(opotl::cli::run(std::env::args().skip(1)) as u8)
}

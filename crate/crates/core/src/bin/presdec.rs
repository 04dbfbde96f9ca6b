use std::io::{stderr, stdin, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    env_logger::Builder::new()
        .filter_level(presdec::cli::log_level(&args))
        .parse_default_env()
        .format_timestamp(None)
        .init();
    let code = presdec::cli::run(args, &mut stdin().lock(), &mut stdout(), &mut stderr());
    ExitCode::from(code as u8)
}

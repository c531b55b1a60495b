use std::process::ExitCode;

fn main() -> ExitCode {
    let cmd = match distcolor_cli::parse_config(std::env::args_os()) {
        Ok(cmd) => cmd,
        Err(e) => e.exit(),
    };
    match distcolor_cli::execute(&cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

use haarnet_cli::{run_from_args, THREADS_ENV};

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    let (request, response) = run_from_args(std::env::args_os());
    if response.exit_code == 1 {
        eprint!("{}", response.document);
        if !response.document.ends_with('\n') {
            eprintln!();
        }
        return ExitCode::from(1);
    }
    let out = request.as_ref().and_then(|r| r.out.as_ref());
    let written = match out {
        Some(path) => std::fs::write(path, &response.document).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(response.document.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(response.exit_code as u8)
}

use std::io::{self, Write};
use std::process::ExitCode;

// Reconstruction recurses through invariants of decreasing degree; give it room.
const STACK_BYTES: usize = 256 << 20;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let handle = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(|| {
            let stdout = io::stdout();
            let stderr = io::stderr();
            let mut out = stdout.lock();
            let mut err = stderr.lock();
            let code = cuspcount::cli::main_with_args(std::env::args_os(), &mut out, &mut err);
            let _ = out.flush();
            code
        })
        .expect("failed to spawn main thread");
    let code = handle.join().unwrap_or(cuspcount::cli::EXIT_ENGINE);
    ExitCode::from(code as u8)
}

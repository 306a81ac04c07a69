use std::io::Write;
use std::process::ExitCode;

use taylor_edges_cli::{execute, RunConfig};

fn main() -> ExitCode {
    let env = std::env::var("TAYLOR_EDGES_CAPS").ok();
    let config = match RunConfig::from_args(std::env::args_os(), env.as_deref()) {
        Ok(c) => c,
        Err(u) => {
            if u.code == 0 {
                print!("{}", u.message);
            } else {
                eprint!("{}", u.message);
                if !u.message.ends_with('\n') {
                    eprintln!();
                }
            }
            return ExitCode::from(u.code);
        }
    };
    let ex = execute(&config);
    if config.out.is_none() {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(ex.output.as_bytes());
        let _ = out.flush();
    }
    for d in &ex.diagnostics {
        eprintln!("taylor-edges: {d}");
    }
    ExitCode::from(ex.status.code())
}

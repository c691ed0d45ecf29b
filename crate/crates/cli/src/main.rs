mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;

const EXIT_USAGE: u8 = 2;
const EXIT_COMPUTE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = cli.global.clone();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = g.jobs {
        pool = pool.num_threads(j as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("duorat: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_COMPUTE);
        }
    };
    let result = pool.install(|| commands::run(cli.command, g.seed));
    match result {
        Ok(out) => {
            let text = out.render(g.format);
            let written = match &g.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("duorat: cannot write output: {e}");
                return ExitCode::from(EXIT_COMPUTE);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let doc = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            println!("{doc}");
            eprintln!("duorat: {e}");
            ExitCode::from(EXIT_COMPUTE)
        }
    }
}

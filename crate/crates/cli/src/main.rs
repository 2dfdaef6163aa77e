use std::io;
use std::process::ExitCode;

use clap::Parser;
use mcl_cli::{run, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run(&args, &mut out, &mut io::stderr());
    ExitCode::from(code as u8)
}

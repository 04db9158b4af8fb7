use clap::Parser;
use parcon::cli::{exit_code_for, run, Args, JobConfig};

fn main() {
    let args = Args::parse();
    let code = match JobConfig::from_args(args).and_then(|cfg| run(&cfg)) {
        Ok(out) => {
            if !out.passed {
                eprintln!("theorem check failed; see report.json");
            }
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

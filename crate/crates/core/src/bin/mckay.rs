use clap::Parser;
use mckay::cli::{render, run, Cli};

fn main() {
    let job = match Cli::parse().into_job() {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    };
    let out = run(&job);
    if let Some(doc) = &out.document {
        print!("{}", render(doc, job.format));
    }
    if let Some(e) = &out.error {
        eprintln!("error: {e}");
    }
    std::process::exit(out.exit_code);
}

//! Renders a classification document as Graphviz; pipe into `dot -Tsvg`.

use mckay::cli::{render, run, Command, Format, JobSpec};
use mckay::lattice::Kind;

fn main() {
    let mut job = JobSpec::new(Command::Classify, Kind::C).with_lattice([[3, 0], [0, 3]]);
    job.format = Format::Dot;
    let out = run(&job);
    print!("{}", render(out.document.as_ref().unwrap(), job.format));
}

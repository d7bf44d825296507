//! Cut existence for the skew-group algebras of all small type (C) and (D)
//! groups.

use mckay::cli::classify;
use mckay::lattice::{admissible_bases, Kind};

fn main() {
    for kind in [Kind::C, Kind::D] {
        for basis in admissible_bases(kind, 21) {
            let c = classify(&basis, kind, None, None).unwrap();
            let witness = if c.cut_exists {
                format!("cut of {} arrows", c.cut.as_ref().unwrap().len())
            } else {
                format!("{} loop vertices", c.loops.len())
            };
            println!(
                "{kind} {basis} n={:<3} cut: {:<5} ({witness})",
                basis.det(),
                c.cut_exists
            );
        }
    }
}

use std::collections::BTreeMap;

use mckay::cuts::{cut_type, enumerate_cuts, DEFAULT_ARROW_LIMIT};
use mckay::lattice::LatticeBasis;
use mckay::mckay_quiver::TypedQuiver;

fn main() {
    for basis in [
        LatticeBasis::new(3, 2, 1).unwrap(),
        LatticeBasis::new(7, 3, 1).unwrap(),
    ] {
        let q = TypedQuiver::from_basis(basis);
        let cuts = enumerate_cuts(&q, DEFAULT_ARROW_LIMIT).unwrap();
        let mut by_type = BTreeMap::new();
        for c in &cuts {
            *by_type.entry(cut_type(&q, c)).or_insert(0) += 1;
        }
        println!("{basis}: {} cuts", cuts.len());
        for (t, count) in by_type {
            println!("  type {t}: {count}");
        }
    }
}

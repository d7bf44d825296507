//! Closes a type (D) group from its lattice and prints the semidirect data.

use mckay::lattice::{Kind, LatticeBasis};
use mckay::monomial_group::{conjugacy_classes, TypedGroup};

fn main() {
    let basis = LatticeBasis::scalar(2);
    let g = TypedGroup::from_lattice(basis, Kind::D, None, None).expect("admissible");
    println!("B = {basis}, M = {}", g.root_order);
    println!("|G| = {}, |N| = {}", g.order(), g.normal.order());
    println!("conjugacy classes: {}", conjugacy_classes(&g.group).len());
    for k in &g.complement.complement_generators {
        println!("complement generator {k}");
    }
    if let Some(i1) = g.complement.i1 {
        println!("i1 = {i1}");
    }
}

//! `Q_N * K` for the type (C) group with `N = Z/3 x Z/3`, graded by the
//! transported invariant cut.

use mckay::cuts::invariant_cut;
use mckay::lattice::{Kind, LatticeBasis};
use mckay::mckay_quiver::{k_action, TypedQuiver};
use mckay::skew::{detect_loops, skew_quiver, transport_cut};

fn main() {
    let basis = LatticeBasis::scalar(3);
    let q = TypedQuiver::from_basis(basis);
    let action = k_action(&q, Kind::C, None).unwrap();
    let s = skew_quiver(&q, &action).unwrap();
    println!(
        "{} vertices, sum of dim^2 = {}",
        s.vertex_count(),
        s.dimension_square_sum()
    );

    let cut = invariant_cut(&basis, Kind::C).unwrap();
    let graded = transport_cut(&s, &q, &action, &cut).unwrap();
    for (&(u, v), block) in &graded.arrows {
        let [d0, d1] = block.by_degree.unwrap();
        println!(
            "  {} -> {}: {} in degree 0, {} in degree 1",
            graded.vertices[u].label, graded.vertices[v].label, d0, d1
        );
    }
    println!("loops: {:?}", detect_loops(&s));
}

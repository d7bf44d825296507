use mckay::lattice::LatticeBasis;
use mckay::mckay_quiver::{commutativity_squares, elementary_cycles, TypedQuiver};

fn main() {
    let q = TypedQuiver::from_basis(LatticeBasis::new(3, 2, 1).unwrap());
    println!("{} vertices, {} arrows", q.vertex_count(), q.arrow_count());
    for a in q.arrows() {
        println!(
            "  a{}: {} -> {} (type {})",
            a.id,
            q.label(a.source),
            q.label(a.target),
            a.ty
        );
    }
    println!("elementary cycles: {}", elementary_cycles(&q).len());
    println!("commutativity squares: {}", commutativity_squares(&q).len());
}

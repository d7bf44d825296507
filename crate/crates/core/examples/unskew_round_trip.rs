use mckay::lattice::{admissible_bases, Kind};
use mckay::skew::unskew_round_trip;

fn main() {
    for basis in admissible_bases(Kind::C, 27)
        .into_iter()
        .filter(|b| b.det() % 3 == 0)
    {
        let r = unskew_round_trip(&basis).unwrap();
        println!(
            "{basis}: {} -> {} -> {} vertices, cut type {}, recovered: {}",
            r.normal_order, r.skew_vertices, r.double_skew_vertices, r.cut_type, r.cut_recovered
        );
    }
}

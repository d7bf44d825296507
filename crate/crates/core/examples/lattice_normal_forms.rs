use mckay::lattice::{
    admissibility_report, hermite_normal_form, smith_invariants, AbelianQuotient, Kind,
};

fn main() {
    // L spanned by the columns (6, 3) and (0, 3)
    let basis = hermite_normal_form([[6, 0], [3, 3]]).unwrap();
    println!("HNF: {basis}");
    println!("Smith invariants: {:?}", smith_invariants(&basis));
    let quot = AbelianQuotient::new(basis);
    let cosets: Vec<String> = quot.cosets().iter().map(|c| c.to_string()).collect();
    println!("Z^2/L = {{{}}}", cosets.join(", "));
    for kind in [Kind::A, Kind::C, Kind::D] {
        let r = admissibility_report(&basis, kind).unwrap();
        println!("kind {kind}: admissible = {}", r.admissible());
    }
}

//! Decides which cut types exist on `Z^2 / 3Z^2`, builds one and validates it.

use mckay::cuts::{build_cut, cut_exists, cut_type, validate_cut, TypeVector};
use mckay::lattice::LatticeBasis;
use mckay::mckay_quiver::TypedQuiver;

fn main() {
    let basis = LatticeBasis::scalar(3);
    let q = TypedQuiver::from_basis(basis);
    let types: Vec<String> = TypeVector::candidates(basis.det())
        .into_iter()
        .filter(|&g| cut_exists(&basis, g))
        .map(|g| g.to_string())
        .collect();
    println!("realizable types: {}", types.join(" "));

    let gamma = TypeVector([3, 3, 3]);
    let cut = build_cut(&basis, gamma).unwrap();
    let report = validate_cut(&q, &cut);
    println!("cut {:?} has type {}", cut.ids(), cut_type(&q, &cut));
    println!("weak-cut axioms hold: {}", report.passed());

    let broken = mckay::cuts::Cut::new(cut.ids().into_iter().skip(1));
    let report = validate_cut(&q, &broken);
    println!("after dropping an arrow: {:?}", report.witnesses.first());
}

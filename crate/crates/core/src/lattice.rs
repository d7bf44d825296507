//! Rank-2 integer lattices `L ≤ Z²` and the finite quotients `Z²/L`.
//!
//! Points are written in the basis `e1 = (1, 0)`, `e2 = (0, 1)`; the third
//! direction is `e3 = -e1 - e2`. A sublattice is stored by its Hermite normal
//! form `[[a, b], [0, c]]` whose columns `(a, 0)` and `(b, c)` generate it.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The third lattice direction `e3 = -e1 - e2`.
pub const E3: [i64; 2] = [-1, -1];

/// Unit vectors for the three arrow types, indexed by `type - 1`.
pub const UNIT: [[i64; 2]; 3] = [[1, 0], [0, 1], E3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix {0:?} is singular")]
    SingularMatrix([[i64; 2]; 2]),
    #[error("[[{a}, {b}], [0, {c}]] is not in Hermite normal form")]
    NotHermite { a: i64, b: i64, c: i64 },
    #[error("lattice {basis} is not admissible for type ({kind}): {condition}")]
    NotAdmissible {
        basis: LatticeBasis,
        kind: Kind,
        condition: String,
    },
    #[error("closed-form and direct invariance checks disagree for {basis} (kind {kind})")]
    CheckDisagreement { basis: LatticeBasis, kind: Kind },
}

/// Group type in the classification of finite subgroups of SL3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// Diagonal abelian.
    A,
    /// Abelian extended by the 3-cycle `t`.
    C,
    /// Abelian extended by `t` and a monomial transposition `r`.
    D,
}

impl Kind {
    /// Order of the complement `K` in `G = N ⋊ K`.
    pub fn complement_order(self) -> usize {
        match self {
            Kind::A => 1,
            Kind::C => 3,
            Kind::D => 6,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::A => "A",
            Kind::C => "C",
            Kind::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Kind::A),
            "C" | "c" => Ok(Kind::C),
            "D" | "d" => Ok(Kind::D),
            other => Err(format!("unknown kind {other:?}, expected A, C or D")),
        }
    }
}

/// A sublattice `L ≤ Z²` of full rank, stored in Hermite normal form
/// `[[a, b], [0, c]]` with `a, c > 0` and `0 ≤ b < a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeBasis {
    a: i64,
    b: i64,
    c: i64,
}

impl LatticeBasis {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, LatticeError> {
        if a <= 0 || c <= 0 || b < 0 || b >= a {
            return Err(LatticeError::NotHermite { a, b, c });
        }
        Ok(LatticeBasis { a, b, c })
    }

    /// `c · Z²`.
    pub fn scalar(c: i64) -> Self {
        LatticeBasis::new(c, 0, c).expect("scalar lattice needs c > 0")
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Row-major matrix `[[a, b], [0, c]]`.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [0, self.c]]
    }

    pub fn columns(&self) -> [[i64; 2]; 2] {
        [[self.a, 0], [self.b, self.c]]
    }

    /// Index of `L` in `Z²`, i.e. `|Z²/L|`.
    pub fn det(&self) -> i64 {
        self.a * self.c
    }

    pub fn contains(&self, x: [i64; 2]) -> bool {
        let [x1, x2] = x;
        if x2.rem_euclid(self.c) != 0 {
            return false;
        }
        (x1 - (x2 / self.c) * self.b).rem_euclid(self.a) == 0
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [0, {}]]", self.a, self.b, self.c)
    }
}

/// Hermite normal form of the lattice spanned by the columns of a row-major
/// 2×2 matrix.
pub fn hermite_normal_form(m: [[i64; 2]; 2]) -> Result<LatticeBasis, LatticeError> {
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0 {
        return Err(LatticeError::SingularMatrix(m));
    }
    hermite_normal_form_of_columns(&[[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
        .ok_or(LatticeError::SingularMatrix(m))
}

/// Hermite normal form of the lattice spanned by an arbitrary list of
/// columns. Returns `None` when the columns do not span a rank-2 lattice.
pub fn hermite_normal_form_of_columns(columns: &[[i64; 2]]) -> Option<LatticeBasis> {
    // Fold the bottom row into a single pivot column with extended gcds; every
    // other column ends up with bottom entry 0.
    let mut pivot = [0i64, 0i64];
    let mut top_gcd = 0i64;
    for &col in columns {
        if col[1] == 0 {
            top_gcd = top_gcd.gcd(&col[0]);
            continue;
        }
        if pivot[1] == 0 {
            top_gcd = top_gcd.gcd(&pivot[0]);
            pivot = col;
            continue;
        }
        let ext = pivot[1].extended_gcd(&col[1]);
        let g = ext.gcd;
        let new_pivot = [ext.x * pivot[0] + ext.y * col[0], g];
        // Kernel combination: (col[1]/g)·pivot − (pivot[1]/g)·col has bottom 0.
        let residue = (col[1] / g) * pivot[0] - (pivot[1] / g) * col[0];
        top_gcd = top_gcd.gcd(&residue);
        pivot = new_pivot;
    }
    if pivot[1] == 0 || top_gcd == 0 {
        return None;
    }
    let a = top_gcd.abs();
    let (mut b, c) = if pivot[1] < 0 {
        (-pivot[0], -pivot[1])
    } else {
        (pivot[0], pivot[1])
    };
    b = b.rem_euclid(a);
    LatticeBasis::new(a, b, c).ok()
}

/// Invariant factors `(d1, d2)` of `Z²/L` with `d1 | d2` and `d1·d2 = det`.
pub fn smith_invariants(basis: &LatticeBasis) -> (i64, i64) {
    let d1 = basis.a.gcd(&basis.b).gcd(&basis.c);
    (d1, basis.det() / d1)
}

/// Canonical representative of `(x1 e1 + x2 e2) + L`, with
/// `0 ≤ x1 < a` and `0 ≤ x2 < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coset {
    pub x1: i64,
    pub x2: i64,
}

impl Coset {
    pub fn as_vector(&self) -> [i64; 2] {
        [self.x1, self.x2]
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x1, self.x2)
    }
}

/// The finite abelian group `Z²/L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianQuotient {
    basis: LatticeBasis,
    invariant_factors: (i64, i64),
    cosets: Vec<Coset>,
}

impl AbelianQuotient {
    pub fn new(basis: LatticeBasis) -> Self {
        let cosets = (0..basis.a)
            .flat_map(|x1| (0..basis.c).map(move |x2| Coset { x1, x2 }))
            .collect();
        AbelianQuotient {
            basis,
            invariant_factors: smith_invariants(&basis),
            cosets,
        }
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn invariant_factors(&self) -> (i64, i64) {
        self.invariant_factors
    }

    /// All cosets in increasing lexicographic order of their representatives.
    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    pub fn reduce(&self, x: [i64; 2]) -> Coset {
        let [x1, x2] = x;
        let q = x2.div_euclid(self.basis.c);
        let x2 = x2 - q * self.basis.c;
        let x1 = (x1 - q * self.basis.b).rem_euclid(self.basis.a);
        Coset { x1, x2 }
    }

    /// Position of a canonical coset in [`Self::cosets`].
    pub fn index_of(&self, coset: Coset) -> usize {
        (coset.x1 * self.basis.c + coset.x2) as usize
    }

    pub fn index_of_vector(&self, x: [i64; 2]) -> usize {
        self.index_of(self.reduce(x))
    }

    pub fn coset(&self, index: usize) -> Coset {
        self.cosets[index]
    }

    /// Additive order of a coset.
    pub fn element_order(&self, coset: Coset) -> i64 {
        let mut k = 1;
        while !self.basis.contains([k * coset.x1, k * coset.x2]) {
            k += 1;
        }
        k
    }
}

/// The 3-cycle `e1 ↦ e2 ↦ e3 ↦ e1`, i.e. `x1 e1 + x2 e2 ↦ -x2 e1 + (x1 - x2) e2`.
pub fn rotate(x: [i64; 2]) -> [i64; 2] {
    [-x[1], x[0] - x[1]]
}

/// The transposition `e1 ↔ e2` fixing `e3`.
pub fn swap(x: [i64; 2]) -> [i64; 2] {
    [x[1], x[0]]
}

/// Linear map on `Z²` sending `e_j` to `e_{perm[j]}` (0-based types).
pub fn permute_types(perm: [u8; 3], x: [i64; 2]) -> [i64; 2] {
    let u = UNIT[perm[0] as usize];
    let v = UNIT[perm[1] as usize];
    [x[0] * u[0] + x[1] * v[0], x[0] * u[1] + x[1] * v[1]]
}

fn invariant_under(basis: &LatticeBasis, map: fn([i64; 2]) -> [i64; 2]) -> bool {
    basis.columns().iter().all(|&col| basis.contains(map(col)))
}

/// Outcome of the admissibility test for a type (C) or (D) sublattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub basis: LatticeBasis,
    pub kind: Kind,
    /// `B = [[k1 c, k2 c], [0, c]]`, when `c` divides the first row.
    pub shape: Option<(i64, i64, i64)>,
    pub closed_form: bool,
    pub rotation_invariant: bool,
    pub swap_invariant: Option<bool>,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.closed_form
    }
}

/// Runs both the divisibility criterion on `k1, k2` and the direct check that
/// `L` is stable under the complement's action on `Z²`, and fails loudly if
/// they disagree.
pub fn admissibility_report(
    basis: &LatticeBasis,
    kind: Kind,
) -> Result<AdmissibilityReport, LatticeError> {
    let (a, b, c) = (basis.a, basis.b, basis.c);
    let shape = (a % c == 0 && b % c == 0).then(|| (a / c, b / c, c));
    let nontrivial = basis.det() > 1;
    let rotation_invariant = invariant_under(basis, rotate);
    let swap_invariant = (kind == Kind::D).then(|| invariant_under(basis, swap));

    let closed_form = nontrivial
        && match (kind, shape) {
            (Kind::A, _) => true,
            (_, None) => false,
            (Kind::C, Some((k1, k2, _))) => (k2 * k2 - k2 + 1) % k1 == 0,
            (Kind::D, Some((k1, k2, _))) => {
                (k2 * k2 - k2 + 1) % k1 == 0 && (k2 - 2).gcd(&3) % k1 == 0
            }
        };
    let direct = nontrivial
        && match kind {
            Kind::A => true,
            Kind::C => rotation_invariant,
            Kind::D => rotation_invariant && swap_invariant == Some(true),
        };
    if closed_form != direct {
        return Err(LatticeError::CheckDisagreement {
            basis: *basis,
            kind,
        });
    }
    Ok(AdmissibilityReport {
        basis: *basis,
        kind,
        shape,
        closed_form,
        rotation_invariant,
        swap_invariant,
    })
}

/// Like [`admissibility_report`], but turns a negative verdict into
/// [`LatticeError::NotAdmissible`] naming the failed condition.
pub fn admissibility(
    basis: &LatticeBasis,
    kind: Kind,
) -> Result<AdmissibilityReport, LatticeError> {
    let report = admissibility_report(basis, kind)?;
    if report.admissible() {
        return Ok(report);
    }
    let condition = if basis.det() <= 1 {
        "the abelian group is trivial (det = 1)".to_string()
    } else {
        match report.shape {
            None => format!("c = {} does not divide the first row", basis.c),
            Some((k1, k2, _)) if (k2 * k2 - k2 + 1) % k1 != 0 => {
                format!(
                    "k1 = {k1} does not divide k2^2 - k2 + 1 = {}",
                    k2 * k2 - k2 + 1
                )
            }
            Some((k1, k2, _)) => {
                format!(
                    "k1 = {k1} does not divide gcd(k2 - 2, 3) = {}",
                    (k2 - 2).gcd(&3)
                )
            }
        }
    };
    Err(LatticeError::NotAdmissible {
        basis: *basis,
        kind,
        condition,
    })
}

/// Every admissible basis with `2 ≤ det ≤ max_det`, ordered by determinant and
/// then by `(a, b, c)`.
pub fn admissible_bases(kind: Kind, max_det: i64) -> Vec<LatticeBasis> {
    let mut out = Vec::new();
    for n in 2..=max_det {
        for a in (1..=n).filter(|a| n % a == 0) {
            let c = n / a;
            for b in 0..a {
                let basis = LatticeBasis { a, b, c };
                if admissibility_report(&basis, kind)
                    .map(|r| r.admissible())
                    .unwrap_or(false)
                {
                    out.push(basis);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hnf(rows: [[i64; 2]; 2]) -> LatticeBasis {
        hermite_normal_form(rows).unwrap()
    }

    /// Brute-force membership on a box: two bases describe the same lattice
    /// iff they agree on every small vector.
    fn same_lattice(x: &LatticeBasis, y: &LatticeBasis) -> bool {
        (-12..=12).all(|i| (-12..=12).all(|j| x.contains([i, j]) == y.contains([i, j])))
    }

    #[test]
    fn hermite_examples() {
        // columns (2,0), (3,1)
        assert_eq!(hnf([[2, 3], [0, 1]]), LatticeBasis::new(2, 1, 1).unwrap());
        assert_eq!(hnf([[1, 0], [0, 1]]), LatticeBasis::new(1, 0, 1).unwrap());
        // columns (0,-2), (2,0)
        assert_eq!(hnf([[0, 2], [-2, 0]]), LatticeBasis::scalar(2));
        assert!(matches!(
            hermite_normal_form([[1, 2], [2, 4]]),
            Err(LatticeError::SingularMatrix(_))
        ));
    }

    #[test]
    fn hermite_of_many_columns() {
        let b = hermite_normal_form_of_columns(&[[3, 0], [0, 3], [1, 2], [2, 1]]).unwrap();
        assert_eq!(b, LatticeBasis::new(3, 2, 1).unwrap());
        assert!(hermite_normal_form_of_columns(&[[1, 1], [2, 2]]).is_none());
    }

    #[test]
    fn smith_examples() {
        assert_eq!(
            smith_invariants(&LatticeBasis::new(3, 2, 1).unwrap()),
            (1, 3)
        );
        assert_eq!(smith_invariants(&LatticeBasis::scalar(2)), (2, 2));
        assert_eq!(smith_invariants(&LatticeBasis::scalar(3)), (3, 3));
    }

    #[test]
    fn smith_matches_element_orders() {
        // d2 is the exponent of Z²/L; d1 d2 its order.
        for n in 2..=20 {
            for basis in admissible_bases(Kind::A, n)
                .into_iter()
                .filter(|b| b.det() == n)
            {
                let q = AbelianQuotient::new(basis);
                let exponent = q
                    .cosets()
                    .iter()
                    .map(|&x| q.element_order(x))
                    .fold(1, |acc, o| acc.lcm(&o));
                let (d1, d2) = smith_invariants(&basis);
                assert_eq!(d2, exponent, "{basis}");
                assert_eq!(d1 * d2, n);
                assert_eq!(d2 % d1, 0);
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let q = AbelianQuotient::new(LatticeBasis::scalar(2));
        assert_eq!(q.reduce([3, 5]), Coset { x1: 1, x2: 1 });
        let q = AbelianQuotient::new(LatticeBasis::new(3, 2, 1).unwrap());
        assert_eq!(q.reduce([0, 1]), Coset { x1: 1, x2: 0 });
        assert_eq!(q.reduce([0, 1]), q.reduce([-2, 0]));
        assert_eq!(q.reduce([3, 0]), Coset { x1: 0, x2: 0 });
        assert_eq!(q.reduce([2, 1]), Coset { x1: 0, x2: 0 });
    }

    #[test]
    fn cosets_are_sorted_and_indexed() {
        let q = AbelianQuotient::new(LatticeBasis::new(7, 3, 1).unwrap());
        assert_eq!(q.order(), 7);
        for (i, &x) in q.cosets().iter().enumerate() {
            assert_eq!(q.index_of(x), i);
        }
        assert!(q.cosets().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn admissibility_examples() {
        let r = admissibility(&LatticeBasis::new(3, 2, 1).unwrap(), Kind::C).unwrap();
        assert_eq!(r.shape, Some((3, 2, 1)));
        let r = admissibility(&LatticeBasis::scalar(2), Kind::D).unwrap();
        assert_eq!(r.shape, Some((1, 0, 2)));
        assert_eq!(r.swap_invariant, Some(true));
        let err = admissibility(&LatticeBasis::new(5, 1, 1).unwrap(), Kind::C).unwrap_err();
        match err {
            LatticeError::NotAdmissible { condition, .. } => assert!(condition.contains("k1 = 5")),
            other => panic!("unexpected {other:?}"),
        }
        // direct witness: t(L) ⊄ L
        let b = LatticeBasis::new(5, 1, 1).unwrap();
        assert!(!b.contains(rotate([1, 1])));
    }

    #[test]
    fn trivial_lattice_is_rejected() {
        assert!(admissibility(&LatticeBasis::new(1, 0, 1).unwrap(), Kind::C).is_err());
    }

    #[test]
    fn type_d_shapes() {
        // Only c·I and [[3c, 2c], [0, c]] occur.
        for b in admissible_bases(Kind::D, 60) {
            let ok = (b.a() == b.c() && b.b() == 0) || (b.a() == 3 * b.c() && b.b() == 2 * b.c());
            assert!(ok, "{b}");
        }
    }

    #[test]
    fn type_c_orders_are_zero_or_one_mod_three() {
        for b in admissible_bases(Kind::C, 150) {
            assert!(b.det() % 3 != 2, "{b}");
        }
    }

    #[test]
    fn rotation_and_swap_generate_s3() {
        let x = [5, -7];
        assert_eq!(rotate(rotate(rotate(x))), x);
        assert_eq!(swap(swap(x)), x);
        assert_eq!(swap(rotate(swap(rotate(x)))), x);
        assert_eq!(permute_types([1, 2, 0], x), rotate(x));
        assert_eq!(permute_types([1, 0, 2], x), swap(x));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
            // products of elementary moves
            prop::collection::vec((0u8..4, -3i64..=3), 1..6).prop_map(|moves| {
                let mut u = [[1i64, 0], [0, 1]];
                for (kind, k) in moves {
                    let e = match kind {
                        0 => [[1, k], [0, 1]],
                        1 => [[1, 0], [k, 1]],
                        2 => [[0, 1], [1, 0]],
                        _ => [[-1, 0], [0, 1]],
                    };
                    u = mul(u, e);
                }
                u
            })
        }

        fn mul(x: [[i64; 2]; 2], y: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
            [
                [
                    x[0][0] * y[0][0] + x[0][1] * y[1][0],
                    x[0][0] * y[0][1] + x[0][1] * y[1][1],
                ],
                [
                    x[1][0] * y[0][0] + x[1][1] * y[1][0],
                    x[1][0] * y[0][1] + x[1][1] * y[1][1],
                ],
            ]
        }

        proptest! {
            #[test]
            fn hnf_is_unique_per_lattice(a in 1i64..12, b in 0i64..12, c in 1i64..12, u in unimodular()) {
                let b = b % a;
                let basis = LatticeBasis::new(a, b, c).unwrap();
                let moved = mul(basis.matrix(), u);
                prop_assert_eq!(hermite_normal_form(moved).unwrap(), basis);
            }

            #[test]
            fn hnf_spans_same_lattice(m in prop::array::uniform2(prop::array::uniform2(-9i64..=9))) {
                prop_assume!(m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0);
                let h = hermite_normal_form(m).unwrap();
                prop_assert_eq!(h.det(), (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs());
                for col in [[m[0][0], m[1][0]], [m[0][1], m[1][1]]] {
                    prop_assert!(h.contains(col));
                }
                let back = hermite_normal_form_of_columns(&[[m[0][0], m[1][0]], [m[0][1], m[1][1]]]).unwrap();
                prop_assert!(same_lattice(&h, &back));
            }

            #[test]
            fn reduce_is_canonical(a in 1i64..10, b in 0i64..10, c in 1i64..10,
                                   x1 in -50i64..50, x2 in -50i64..50, z1 in -5i64..5, z2 in -5i64..5) {
                let b = b % a;
                let q = AbelianQuotient::new(LatticeBasis::new(a, b, c).unwrap());
                let r = q.reduce([x1, x2]);
                prop_assert_eq!(q.reduce(r.as_vector()), r);
                let shifted = [x1 + z1 * a + z2 * b, x2 + z2 * c];
                prop_assert_eq!(q.reduce(shifted), r);
                prop_assert!(q.basis().contains([x1 - r.x1, x2 - r.x2]));
            }
        }
    }
}

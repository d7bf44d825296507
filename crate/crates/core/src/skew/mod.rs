//! The skew-group quiver `Q_G = Q_N * K`, cut transport, loop detection and
//! the type (C) unskew round trip.

pub mod characters;
pub mod cyclotomic;
mod demonet;
pub mod iso;
mod roundtrip;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use demonet::{skew, QuiverSkewInput, SkewInput};
pub use roundtrip::{dual_twist_action, unskew_round_trip, DualTwist, RoundTripReport};

use crate::cuts::{find_cycle, validate_cut, Cut};
use crate::lattice::{smith_invariants, AbelianQuotient, Coset, Kind, LatticeBasis};
use crate::mckay_quiver::{QuiverAction, QuiverError, TypedQuiver};

#[derive(Debug, Error)]
pub enum SkewError {
    #[error("multiplicity from {from} to {to} is not a nonnegative integer: {value}")]
    NonIntegralMultiplicity {
        from: String,
        to: String,
        value: String,
    },
    #[error("skew quiver invariant violated: {0}")]
    Invariant(String),
    #[error("cut is not invariant: arrow {arrow} maps to {image}")]
    NotInvariant { arrow: usize, image: usize },
    #[error("cut fails the weak-cut axioms")]
    InvalidCut,
    #[error("3 divides |N| = {0}")]
    Divisible(i64),
    #[error("type ({0}) has no complement to act with")]
    NoComplement(Kind),
    #[error("the unskew round trip is only implemented for type (C), not ({0})")]
    Unsupported(Kind),
    #[error("no isomorphism between the double skew and Q_N: {0}")]
    IsoSearchExhausted(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Cut(#[from] crate::cuts::CutError),
}

/// Multiplication table of a finite group with identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    orders: Vec<usize>,
}

impl GroupTable {
    pub fn from_mul(mul: Vec<Vec<usize>>) -> Self {
        let n = mul.len();
        assert!(n > 0 && mul.iter().all(|r| r.len() == n));
        assert!(
            (0..n).all(|g| mul[0][g] == g && mul[g][0] == g),
            "index 0 must be the identity"
        );
        let inv = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| mul[g][h] == 0)
                    .expect("every element is invertible")
            })
            .collect();
        let orders = (0..n)
            .map(|g| {
                let (mut x, mut k) = (g, 1);
                while x != 0 {
                    x = mul[x][g];
                    k += 1;
                }
                k
            })
            .collect();
        GroupTable { mul, inv, orders }
    }

    /// Table for `elements` (identity first) under `op`.
    pub fn from_elements<T: PartialEq>(elements: &[T], op: impl Fn(&T, &T) -> T) -> Self {
        let mul = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        let c = op(a, b);
                        elements
                            .iter()
                            .position(|x| *x == c)
                            .expect("closed under op")
                    })
                    .collect()
            })
            .collect();
        GroupTable::from_mul(mul)
    }

    /// `Z/n`, element `k` standing for the `k`-th power of a generator.
    pub fn cyclic(n: usize) -> Self {
        GroupTable::from_mul(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }
}

/// A vertex `(orbit representative, irreducible of its stabilizer)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewVertex {
    /// Least vertex of the orbit in the input quiver.
    pub orbit_rep: usize,
    pub orbit: Vec<usize>,
    /// Stabilizer of `orbit_rep`, as indices into the acting group.
    pub stabilizer: Vec<usize>,
    pub irrep: usize,
    pub irrep_label: String,
    pub irrep_degree: u64,
    /// Orbit size times irrep degree.
    pub dimension: u64,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowBlock {
    pub total: u64,
    /// Multiplicities in degree 0 and 1, when a cut has been transported.
    pub by_degree: Option<[u64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewQuiver {
    pub vertices: Vec<SkewVertex>,
    /// Nonzero multiplicities keyed by `(source, target)` vertex ids.
    pub arrows: BTreeMap<(usize, usize), ArrowBlock>,
    pub acting_order: usize,
    pub graded: bool,
}

/// A vertex with loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopVertex {
    pub vertex: usize,
    pub multiplicity: u64,
}

impl SkewQuiver {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn multiplicity(&self, source: usize, target: usize) -> u64 {
        self.arrows.get(&(source, target)).map_or(0, |b| b.total)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.arrows.values().map(|b| b.total).sum()
    }

    pub fn dimension_square_sum(&self) -> u64 {
        self.vertices
            .iter()
            .map(|v| v.dimension * v.dimension)
            .sum()
    }

    /// First vertex breaking `Σ_w mult(v→w) dim(w) = valence · dim(v)` or its
    /// dual.
    pub fn degree_identity_violation(&self, valence: u64) -> Option<usize> {
        let n = self.vertices.len();
        let mut out = vec![0u64; n];
        let mut inc = vec![0u64; n];
        for (&(s, t), b) in &self.arrows {
            out[s] += b.total * self.vertices[t].dimension;
            inc[t] += b.total * self.vertices[s].dimension;
        }
        (0..n).find(|&v| {
            let want = valence * self.vertices[v].dimension;
            out[v] != want || inc[v] != want
        })
    }

    /// `(source, target)` pairs carrying at least one degree-0 arrow.
    pub fn degree_zero_edges(&self) -> Vec<(usize, usize)> {
        self.arrows
            .iter()
            .filter(|(_, b)| b.by_degree.is_none_or(|d| d[0] > 0))
            .map(|(&k, _)| k)
            .collect()
    }
}

pub fn detect_loops(s: &SkewQuiver) -> Vec<LoopVertex> {
    s.arrows
        .iter()
        .filter(|((a, b), _)| a == b)
        .map(|(&(vertex, _), b)| LoopVertex {
            vertex,
            multiplicity: b.total,
        })
        .collect()
}

/// `Q_N * K`, checked against `Σ dim² = |N|·|K|` and the valence-3 degree
/// identity.
pub fn skew_quiver(q: &TypedQuiver, action: &QuiverAction) -> Result<SkewQuiver, SkewError> {
    let s = skew(&QuiverSkewInput::new(q, action, None))?;
    check_invariants(&s, q, action)?;
    Ok(s)
}

fn check_invariants(
    s: &SkewQuiver,
    q: &TypedQuiver,
    action: &QuiverAction,
) -> Result<(), SkewError> {
    let order = (q.vertex_count() * action.order()) as u64;
    if s.dimension_square_sum() != order {
        return Err(SkewError::Invariant(format!(
            "sum of squared dimensions is {}, expected {order}",
            s.dimension_square_sum()
        )));
    }
    if let Some(v) = s.degree_identity_violation(3) {
        return Err(SkewError::Invariant(format!(
            "degree identity fails at {}",
            s.vertices[v].label
        )));
    }
    Ok(())
}

/// Grades `Q_N * K` by a `K`-invariant cut: each arrow block is split by the
/// degrees of the `Q_N` arrows that produce it.
pub fn transport_cut(
    s: &SkewQuiver,
    q: &TypedQuiver,
    action: &QuiverAction,
    cut: &Cut,
) -> Result<SkewQuiver, SkewError> {
    if let Some((arrow, image)) = cut.invariance_violation(action) {
        return Err(SkewError::NotInvariant { arrow, image });
    }
    if !validate_cut(q, cut).passed() {
        return Err(SkewError::InvalidCut);
    }
    let graded = skew(&QuiverSkewInput::new(q, action, Some(cut)))?;
    check_invariants(&graded, q, action)?;
    if graded.vertices != s.vertices
        || graded.arrows.len() != s.arrows.len()
        || graded
            .arrows
            .iter()
            .any(|(k, b)| s.multiplicity(k.0, k.1) != b.total)
    {
        return Err(SkewError::Invariant(
            "graded multiplicities do not refine the skew quiver".into(),
        ));
    }
    if let Some(cycle) = find_cycle(graded.vertex_count(), &graded.degree_zero_edges()) {
        let labels: Vec<_> = cycle
            .iter()
            .map(|&v| graded.vertices[v].label.clone())
            .collect();
        return Err(SkewError::Invariant(format!(
            "degree-0 cycle through {}",
            labels.join(" -> ")
        )));
    }
    Ok(graded)
}

/// The coset `x1 = (-k-1) e1 + k e2` with `3k + 1 ≡ 0 (mod n)`, whose
/// neighbour `x1 + e1` lies in its own orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopWitness {
    pub k: i64,
    pub x1: Coset,
    pub x2: Coset,
    /// Index of the first complement element sending `x1` to `x2`, if any.
    pub mover: Option<usize>,
    pub orbit: Vec<Coset>,
    pub expected_orbit_size: usize,
    /// Type (D) with `N ≅ C2 × C2`, where the orbit has only 3 elements.
    pub klein_four: bool,
}

impl LoopWitness {
    pub fn holds(&self) -> bool {
        self.mover.is_some() && self.orbit.len() == self.expected_orbit_size
    }
}

pub fn loop_witness(
    basis: &LatticeBasis,
    kind: Kind,
    action: &QuiverAction,
) -> Result<LoopWitness, SkewError> {
    if kind == Kind::A {
        return Err(SkewError::NoComplement(kind));
    }
    let n = basis.det();
    if n % 3 == 0 {
        return Err(SkewError::Divisible(n));
    }
    let k = (0..n)
        .find(|k| (3 * k + 1) % n == 0)
        .expect("3 is invertible mod n");
    let quot = AbelianQuotient::new(*basis);
    let x1 = quot.reduce([-k - 1, k]);
    let x2 = quot.reduce([-k, k]);
    let (i1, i2) = (quot.index_of(x1), quot.index_of(x2));
    let mover = action.elements.iter().position(|e| e.vertex_perm[i1] == i2);
    let mut orbit: Vec<usize> = action.elements.iter().map(|e| e.vertex_perm[i1]).collect();
    orbit.sort_unstable();
    orbit.dedup();
    let klein_four = kind == Kind::D && smith_invariants(basis) == (2, 2);
    let expected_orbit_size = match kind {
        Kind::D if !klein_four => 6,
        _ => 3,
    };
    Ok(LoopWitness {
        k,
        x1,
        x2,
        mover,
        orbit: orbit.into_iter().map(|v| quot.coset(v)).collect(),
        expected_orbit_size,
        klein_four,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::invariant_cut;
    use crate::mckay_quiver::k_action;
    use crate::monomial_group::{conjugacy_classes, TypedGroup};

    fn setup(basis: LatticeBasis, kind: Kind) -> (TypedQuiver, QuiverAction, SkewQuiver) {
        let q = TypedQuiver::from_basis(basis);
        let act = k_action(&q, kind, None).unwrap();
        let s = skew_quiver(&q, &act).unwrap();
        (q, act, s)
    }

    #[test]
    fn order_27_group() {
        let (_, _, s) = setup(LatticeBasis::scalar(3), Kind::C);
        assert_eq!(s.vertex_count(), 11);
        assert_eq!(s.vertices.iter().filter(|v| v.dimension == 1).count(), 9);
        assert_eq!(s.vertices.iter().filter(|v| v.dimension == 3).count(), 2);
        assert!(detect_loops(&s).is_empty());
    }

    #[test]
    fn a4_has_two_loops_at_the_three_dimensional_vertex() {
        let (_, _, s) = setup(LatticeBasis::scalar(2), Kind::C);
        assert_eq!(s.vertex_count(), 4);
        let loops = detect_loops(&s);
        assert_eq!(loops.len(), 1);
        assert_eq!(s.vertices[loops[0].vertex].dimension, 3);
        assert_eq!(loops[0].multiplicity, 2);
        assert_eq!(s.vertices[loops[0].vertex].label, "(0,1)/1");
    }

    #[test]
    fn klein_four_type_d_has_loops() {
        let (_, _, s) = setup(LatticeBasis::scalar(2), Kind::D);
        assert_eq!(s.vertex_count(), 5);
        assert!(!detect_loops(&s).is_empty());
    }

    #[test]
    fn vertex_count_matches_class_count() {
        for kind in [Kind::C, Kind::D] {
            for basis in crate::lattice::admissible_bases(kind, 21) {
                let g = TypedGroup::from_lattice(basis, kind, None, None).unwrap();
                let (_, _, s) = setup(basis, kind);
                assert_eq!(
                    s.vertex_count(),
                    conjugacy_classes(&g.group).len(),
                    "{basis} {kind}"
                );
            }
        }
    }

    #[test]
    fn transported_cut_on_order_27_group() {
        let b = LatticeBasis::scalar(3);
        let (q, act, s) = setup(b, Kind::C);
        let cut = invariant_cut(&b, Kind::C).unwrap();
        let graded = transport_cut(&s, &q, &act, &cut).unwrap();
        let (mut d0, mut d1) = (0, 0);
        for block in graded.arrows.values() {
            let [a, b] = block.by_degree.unwrap();
            assert_eq!(a + b, block.total);
            d0 += a;
            d1 += b;
        }
        assert_eq!(d0 + d1, graded.total_multiplicity());
        assert!(d1 > 0 && d0 > 0);
    }

    #[test]
    fn transport_rejects_non_invariant_cut() {
        let b = LatticeBasis::scalar(3);
        let (q, act, s) = setup(b, Kind::C);
        let cut = crate::cuts::build_cut(&b, crate::cuts::TypeVector([3, 3, 3])).unwrap();
        let shifted = Cut::new(cut.ids().into_iter().filter(|&a| a != cut.ids()[0]));
        assert!(matches!(
            transport_cut(&s, &q, &act, &shifted),
            Err(SkewError::NotInvariant { .. })
        ));
    }

    #[test]
    fn loop_witness_examples() {
        let b = LatticeBasis::scalar(2);
        let q = TypedQuiver::from_basis(b);
        let w = loop_witness(&b, Kind::C, &k_action(&q, Kind::C, None).unwrap()).unwrap();
        assert_eq!(w.k, 1);
        assert_eq!(w.x1, Coset { x1: 0, x2: 1 });
        assert_eq!(w.orbit.len(), 3);
        assert!(w.holds());

        let b = LatticeBasis::new(7, 3, 1).unwrap();
        let q = TypedQuiver::from_basis(b);
        let w = loop_witness(&b, Kind::C, &k_action(&q, Kind::C, None).unwrap()).unwrap();
        assert_eq!(w.k, 2);
        assert!(w.holds());

        let b = LatticeBasis::scalar(2);
        let q = TypedQuiver::from_basis(b);
        let w = loop_witness(&b, Kind::D, &k_action(&q, Kind::D, None).unwrap()).unwrap();
        assert!(w.klein_four);
        assert!(w.holds());

        let b = LatticeBasis::scalar(3);
        let q = TypedQuiver::from_basis(b);
        assert!(matches!(
            loop_witness(&b, Kind::C, &k_action(&q, Kind::C, None).unwrap()),
            Err(SkewError::Divisible(9))
        ));
    }

    #[test]
    fn cyclic_table() {
        let c3 = GroupTable::cyclic(3);
        assert_eq!(c3.mul(2, 2), 1);
        assert_eq!(c3.inv(1), 2);
        assert_eq!(c3.element_order(1), 3);
    }
}

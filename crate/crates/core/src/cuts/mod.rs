//! Cuts on `Q_N`: the closed-form existence criterion, the explicit cut `C_γ`,
//! validation against the weak-cut axioms, and exhaustive enumeration.

mod enumerate;

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::{enumerate_cuts, DEFAULT_ARROW_LIMIT};

use crate::lattice::{AbelianQuotient, Kind, LatticeBasis};
use crate::mckay_quiver::{
    arrow_image, commutativity_squares, elementary_cycles, CycleOrder, QuiverAction, TypedQuiver,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("no cut of type {gamma} exists on {basis}")]
    CriterionFailed {
        basis: LatticeBasis,
        gamma: TypeVector,
    },
    #[error("3 does not divide |N| = {0}")]
    NotDivisible(i64),
    #[error("the invariant type fails the criterion on {0}")]
    InternalCriterionFailure(LatticeBasis),
    #[error("cut is not invariant: arrow {arrow} maps to {image}")]
    NotInvariant { arrow: usize, image: usize },
    #[error("quiver has {arrows} arrows, above the enumeration limit {limit}")]
    TooLarge { arrows: usize, limit: usize },
    #[error("arrow id {0} is out of range")]
    UnknownArrow(usize),
}

/// Number of cut arrows of each type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeVector(pub [i64; 3]);

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "({a},{b},{c})")
    }
}

impl TypeVector {
    /// Every triple of positive integers summing to `n`.
    pub fn candidates(n: i64) -> Vec<TypeVector> {
        let mut out = Vec::new();
        for g1 in 1..n {
            for g2 in 1..n - g1 {
                out.push(TypeVector([g1, g2, n - g1 - g2]));
            }
        }
        out
    }

    pub fn permuted(&self, perm: [u8; 3]) -> TypeVector {
        let mut out = [0; 3];
        for j in 0..3 {
            out[perm[j] as usize] = self.0[j];
        }
        TypeVector(out)
    }
}

/// A set of arrows of `Q_N`, given degree 1; all other arrows have degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    arrows: BTreeSet<usize>,
}

impl Cut {
    pub fn new(arrows: impl IntoIterator<Item = usize>) -> Self {
        Cut {
            arrows: arrows.into_iter().collect(),
        }
    }

    pub fn from_ids(q: &TypedQuiver, ids: &[usize]) -> Result<Self, CutError> {
        if let Some(&bad) = ids.iter().find(|&&a| a >= q.arrow_count()) {
            return Err(CutError::UnknownArrow(bad));
        }
        Ok(Cut::new(ids.iter().copied()))
    }

    pub fn arrows(&self) -> &BTreeSet<usize> {
        &self.arrows
    }

    pub fn ids(&self) -> Vec<usize> {
        self.arrows.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, arrow: usize) -> bool {
        self.arrows.contains(&arrow)
    }

    pub fn degree(&self, arrow: usize) -> u8 {
        u8::from(self.contains(arrow))
    }

    pub fn degrees(&self, q: &TypedQuiver) -> Vec<u8> {
        (0..q.arrow_count()).map(|a| self.degree(a)).collect()
    }

    /// First arrow whose image under some element of the action leaves the cut.
    pub fn invariance_violation(&self, action: &QuiverAction) -> Option<(usize, usize)> {
        action.elements.iter().find_map(|e| {
            self.arrows
                .iter()
                .map(|&a| (a, e.arrow_perm[a]))
                .find(|(_, b)| !self.contains(*b))
        })
    }

    pub fn is_invariant(&self, action: &QuiverAction) -> bool {
        self.invariance_violation(action).is_none()
    }
}

pub fn cut_type(q: &TypedQuiver, cut: &Cut) -> TypeVector {
    let mut t = [0; 3];
    for &a in cut.arrows() {
        t[q.arrow(a).ty as usize - 1] += 1;
    }
    TypeVector(t)
}

/// `γ_i > 0`, `Σ γ_i = n` and `(γ1, γ2) · B ≡ 0 (mod n)`.
pub fn cut_exists(basis: &LatticeBasis, gamma: TypeVector) -> bool {
    let n = basis.det();
    let [g1, g2, g3] = gamma.0;
    g1 > 0
        && g2 > 0
        && g3 > 0
        && g1 + g2 + g3 == n
        && (g1 * basis.a()) % n == 0
        && (g1 * basis.b() + g2 * basis.c()) % n == 0
}

/// The cut `C_γ`: with `v(x) = ((γ1 x1 + γ2 x2) mod n) / gcd(γ)`, the arrow
/// `x → x + e_i` is cut iff `v(x) > v(x + e_i)`.
pub fn build_cut(basis: &LatticeBasis, gamma: TypeVector) -> Result<Cut, CutError> {
    if !cut_exists(basis, gamma) {
        return Err(CutError::CriterionFailed {
            basis: *basis,
            gamma,
        });
    }
    let n = basis.det();
    let [g1, g2, g3] = gamma.0;
    let g = g1.gcd(&g2).gcd(&g3);
    let q = TypedQuiver::new(AbelianQuotient::new(*basis));
    let value = |v: usize| {
        let x = q.coset(v);
        (g1 * x.x1 + g2 * x.x2).rem_euclid(n) / g
    };
    Ok(Cut::new(
        q.arrows()
            .filter(|a| value(a.source) > value(a.target))
            .map(|a| a.id),
    ))
}

/// Where a cut breaks one of the weak-cut axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Witness {
    UnbalancedSquare {
        vertex: usize,
        types: (u8, u8),
        degrees: (u8, u8),
    },
    CycleDegree {
        start: usize,
        order: CycleOrder,
        degree: u8,
    },
    DegreeZeroCycle {
        vertices: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub squares_balanced: bool,
    pub cycles_degree_one: bool,
    pub degree_zero_acyclic: bool,
    pub witnesses: Vec<Witness>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.squares_balanced && self.cycles_degree_one && self.degree_zero_acyclic
    }
}

pub fn validate_cut(q: &TypedQuiver, cut: &Cut) -> ValidationReport {
    let mut witnesses = Vec::new();

    let mut squares_balanced = true;
    for s in commutativity_squares(q) {
        let [p, r] = s.paths(q);
        let dp = cut.degree(p[0]) + cut.degree(p[1]);
        let dr = cut.degree(r[0]) + cut.degree(r[1]);
        if dp != dr && squares_balanced {
            squares_balanced = false;
            witnesses.push(Witness::UnbalancedSquare {
                vertex: s.vertex,
                types: s.types,
                degrees: (dp, dr),
            });
        }
    }

    let mut cycles_degree_one = true;
    for c in elementary_cycles(q) {
        let degree: u8 = c.arrows(q).iter().map(|&a| cut.degree(a)).sum();
        if degree != 1 && cycles_degree_one {
            cycles_degree_one = false;
            witnesses.push(Witness::CycleDegree {
                start: c.start,
                order: c.order,
                degree,
            });
        }
    }

    let uncut: Vec<(usize, usize)> = q
        .arrows()
        .filter(|a| !cut.contains(a.id))
        .map(|a| (a.source, a.target))
        .collect();
    let cycle = find_cycle(q.vertex_count(), &uncut);
    if let Some(vertices) = &cycle {
        witnesses.push(Witness::DegreeZeroCycle {
            vertices: vertices.clone(),
        });
    }

    ValidationReport {
        squares_balanced,
        cycles_degree_one,
        degree_zero_acyclic: cycle.is_none(),
        witnesses,
    }
}

/// A directed cycle in the graph on `0..n` with the given edges, as the list
/// of vertices along it, or `None` if the graph is acyclic.
pub fn find_cycle(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < adj[u].len() {
                let v = adj[u][*next];
                *next += 1;
                match state[v] {
                    0 => {
                        state[v] = 1;
                        parent[v] = u;
                        stack.push((v, 0));
                    }
                    1 => {
                        let mut cycle = vec![v];
                        let mut w = u;
                        while w != v {
                            cycle.push(w);
                            w = parent[w];
                        }
                        cycle[1..].reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[u] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Type permutations of the complement's generators.
fn generator_perms(kind: Kind) -> &'static [[u8; 3]] {
    match kind {
        Kind::A => &[],
        Kind::C => &[[1, 2, 0]],
        Kind::D => &[[1, 2, 0], [1, 0, 2]],
    }
}

/// The cut `C_(n/3, n/3, n/3)`, checked to be stable under the complement.
pub fn invariant_cut(basis: &LatticeBasis, kind: Kind) -> Result<Cut, CutError> {
    let n = basis.det();
    if n % 3 != 0 {
        return Err(CutError::NotDivisible(n));
    }
    let gamma = TypeVector([n / 3; 3]);
    if !cut_exists(basis, gamma) {
        return Err(CutError::InternalCriterionFailure(*basis));
    }
    let cut = build_cut(basis, gamma)?;
    let q = TypedQuiver::from_basis(*basis);
    for &perm in generator_perms(kind) {
        for &a in cut.arrows() {
            let image = arrow_image(&q, perm, a);
            if !cut.contains(image) {
                return Err(CutError::NotInvariant { arrow: a, image });
            }
        }
    }
    Ok(cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::admissible_bases;
    use crate::mckay_quiver::k_action;

    fn basis(a: i64, b: i64, c: i64) -> LatticeBasis {
        LatticeBasis::new(a, b, c).unwrap()
    }

    #[test]
    fn type_of_trivial_cuts() {
        let q = TypedQuiver::from_basis(basis(2, 0, 2));
        assert_eq!(cut_type(&q, &Cut::new([])), TypeVector([0, 0, 0]));
        assert_eq!(cut_type(&q, &Cut::new(0..12)), TypeVector([4, 4, 4]));
    }

    #[test]
    fn criterion_examples() {
        let b = LatticeBasis::scalar(3);
        assert!(cut_exists(&b, TypeVector([3, 3, 3])));
        assert!(!cut_exists(&b, TypeVector([1, 4, 4])));
        assert!(!cut_exists(&b, TypeVector([0, 4, 5])));
        assert!(!cut_exists(&basis(3, 2, 1), TypeVector([0, 0, 3])));
    }

    #[test]
    fn cut_for_scalar_three() {
        let b = LatticeBasis::scalar(3);
        let q = TypedQuiver::from_basis(b);
        let cut = build_cut(&b, TypeVector([3, 3, 3])).unwrap();
        let expected: Vec<_> = q
            .arrows()
            .filter(|a| {
                let x = q.coset(a.source);
                (x.x1 + x.x2) % 3 == 2
            })
            .map(|a| a.id)
            .collect();
        assert_eq!(cut.ids(), expected);
        assert_eq!(cut.len(), 9);
        assert_eq!(cut_type(&q, &cut), TypeVector([3, 3, 3]));
        assert!(validate_cut(&q, &cut).passed());
    }

    #[test]
    fn cut_on_three_vertices() {
        let b = basis(3, 2, 1);
        let q = TypedQuiver::from_basis(b);
        let cut = build_cut(&b, TypeVector([1, 1, 1])).unwrap();
        assert_eq!(cut.len(), 3);
        for c in elementary_cycles(&q) {
            assert_eq!(c.arrows(&q).iter().filter(|&&a| cut.contains(a)).count(), 1);
        }
        assert!(validate_cut(&q, &cut).passed());
    }

    #[test]
    fn build_cut_rejects_failed_criterion() {
        let b = LatticeBasis::scalar(3);
        assert!(matches!(
            build_cut(&b, TypeVector([1, 4, 4])),
            Err(CutError::CriterionFailed { .. })
        ));
    }

    #[test]
    fn all_constructed_cuts_validate() {
        for b in admissible_bases(Kind::A, 12) {
            let q = TypedQuiver::from_basis(b);
            for gamma in TypeVector::candidates(b.det()) {
                if cut_exists(&b, gamma) {
                    let cut = build_cut(&b, gamma).unwrap();
                    assert!(validate_cut(&q, &cut).passed(), "{b} {gamma}");
                    assert_eq!(cut_type(&q, &cut), gamma);
                    assert_eq!(cut.len() as i64, b.det());
                }
            }
        }
    }

    #[test]
    fn degenerate_cuts_fail_cycle_axiom() {
        let q = TypedQuiver::from_basis(basis(3, 2, 1));
        let empty = validate_cut(&q, &Cut::new([]));
        assert!(!empty.cycles_degree_one);
        assert!(!empty.degree_zero_acyclic);
        assert!(matches!(
            empty.witnesses[0],
            Witness::CycleDegree { degree: 0, .. }
        ));
        let full = validate_cut(&q, &Cut::new(0..9));
        assert!(!full.cycles_degree_one);
        assert!(full.degree_zero_acyclic);
        assert!(matches!(
            full.witnesses[0],
            Witness::CycleDegree { degree: 3, .. }
        ));
    }

    #[test]
    fn invariant_cut_examples() {
        let b = LatticeBasis::scalar(3);
        let cut = invariant_cut(&b, Kind::C).unwrap();
        assert_eq!(cut, build_cut(&b, TypeVector([3, 3, 3])).unwrap());
        // stable under the swap as well
        assert_eq!(invariant_cut(&b, Kind::D).unwrap(), cut);
        let act = k_action(&TypedQuiver::from_basis(b), Kind::D, None).unwrap();
        assert!(cut.is_invariant(&act));

        let cut = invariant_cut(&basis(3, 2, 1), Kind::C).unwrap();
        assert_eq!(cut.len(), 3);
        assert_eq!(
            invariant_cut(&LatticeBasis::scalar(2), Kind::C),
            Err(CutError::NotDivisible(4))
        );
    }

    #[test]
    fn find_cycle_reports_a_real_cycle() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 1)];
        let c = find_cycle(4, &edges).unwrap();
        assert_eq!(c.len(), 3);
        for i in 0..c.len() {
            assert!(edges.contains(&(c[i], c[(i + 1) % c.len()])));
        }
        assert!(find_cycle(3, &[(0, 1), (1, 2), (0, 2)]).is_none());
        assert_eq!(find_cycle(1, &[(0, 0)]), Some(vec![0]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn valid_pairs() -> Vec<(LatticeBasis, TypeVector)> {
            admissible_bases(Kind::A, 30)
                .into_iter()
                .flat_map(|b| {
                    TypeVector::candidates(b.det())
                        .into_iter()
                        .filter(move |&g| cut_exists(&b, g))
                        .map(move |g| (b, g))
                })
                .collect()
        }

        proptest! {
            #[test]
            fn constructed_cuts_meet_each_cycle_once(idx in any::<prop::sample::Index>()) {
                let pairs = valid_pairs();
                let (basis, gamma) = pairs[idx.index(pairs.len())];
                let q = TypedQuiver::from_basis(basis);
                let cut = build_cut(&basis, gamma).unwrap();
                prop_assert!(validate_cut(&q, &cut).passed());
                prop_assert_eq!(cut_type(&q, &cut), gamma);
                for c in elementary_cycles(&q) {
                    prop_assert_eq!(c.arrows(&q).iter().filter(|&&a| cut.contains(a)).count(), 1);
                }
            }
        }
    }
}

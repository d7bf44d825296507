//! Finite groups of 3×3 monomial matrices with root-of-unity entries.
//!
//! All scalars are exponents of a single primitive root `ζ = ζ_M`. A matrix is
//! a permutation of the coordinates plus one exponent per column: column `j`
//! carries `ζ^exps[j]` into row `perm[j]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    hermite_normal_form_of_columns, smith_invariants, Kind, LatticeBasis, LatticeError,
};

/// Exponent `a` of `ζ_M^a`, always reduced into `0..M`.
pub type RootExponent = u32;

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Environment variable overriding [`DEFAULT_CLOSURE_CAP`].
pub const CLOSURE_CAP_ENV: &str = "MCKAY_MAX_CLOSURE";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator {0} does not have determinant 1")]
    GeneratorNotSpecialLinear(MonomialMatrix),
    #[error("closure exceeded {cap} elements")]
    ExplosionGuard { cap: usize },
    #[error("generators use different root orders ({0} and {1})")]
    MixedRootOrder(u32, u32),
    #[error("closure needs at least one generator")]
    NoGenerators,
    #[error("root order must be positive")]
    ZeroRootOrder,
    #[error("type (D) needs an even root order to represent -1, got {0}")]
    OddRootOrder(u32),
    #[error("root order {root_order} is not a multiple of the exponent {exponent} of Z^2/L")]
    RootOrderTooSmall { root_order: u32, exponent: i64 },
    #[error("scalars enlarge the diagonal subgroup to order {found}, expected {expected}")]
    ScalarsInconsistent { expected: usize, found: usize },
    #[error("diagonal generator {0} is not in SL3")]
    DiagonalNotSpecialLinear(MonomialMatrix),
    #[error("semidirect decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A 3×3 monomial matrix over the `M`-th roots of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialMatrix {
    order: u32,
    perm: [u8; 3],
    exps: [RootExponent; 3],
}

impl MonomialMatrix {
    /// Builds a matrix, reducing exponents mod `order`. Returns `None` if
    /// `perm` is not a permutation of `0..3` or `order == 0`.
    pub fn new(order: u32, perm: [u8; 3], exps: [u32; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p as usize] {
                return None;
            }
            seen[p as usize] = true;
        }
        if order == 0 {
            return None;
        }
        Some(MonomialMatrix {
            order,
            perm,
            exps: exps.map(|e| e % order),
        })
    }

    pub fn identity(order: u32) -> Self {
        MonomialMatrix::diagonal(order, [0, 0, 0])
    }

    pub fn diagonal(order: u32, exps: [u32; 3]) -> Self {
        MonomialMatrix::new(order, [0, 1, 2], exps).expect("nonzero order")
    }

    /// The 3-cycle `e1 ↦ e2 ↦ e3 ↦ e1`.
    pub fn t(order: u32) -> Self {
        MonomialMatrix::new(order, [1, 2, 0], [0, 0, 0]).expect("nonzero order")
    }

    /// `[[0, α, 0], [β, 0, 0], [0, 0, γ]]`.
    pub fn r(order: u32, scalars: Scalars) -> Self {
        MonomialMatrix::new(
            order,
            [1, 0, 2],
            [scalars.beta, scalars.alpha, scalars.gamma],
        )
        .expect("nonzero order")
    }

    pub fn root_order(&self) -> u32 {
        self.order
    }

    pub fn perm(&self) -> [u8; 3] {
        self.perm
    }

    pub fn exps(&self) -> [RootExponent; 3] {
        self.exps
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm == [0, 1, 2]
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.exps == [0, 0, 0]
    }

    /// `true` for even permutations.
    pub fn perm_is_even(&self) -> bool {
        // a permutation of three points is even iff it is the identity or a 3-cycle
        let fixed = (0..3).filter(|&j| self.perm[j] as usize == j).count();
        fixed != 1
    }

    /// Exponent sum mod `M`; the determinant is `±ζ^sum`.
    pub fn exponent_sum(&self) -> u32 {
        self.exps.iter().fold(0, |acc, &e| (acc + e) % self.order)
    }

    pub fn is_special_linear(&self) -> bool {
        let sum = self.exponent_sum();
        if self.perm_is_even() {
            sum == 0
        } else {
            self.order.is_multiple_of(2) && sum == self.order / 2
        }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0u8; 3];
        let mut exps = [0u32; 3];
        for j in 0..3 {
            let p = self.perm[j] as usize;
            perm[p] = j as u8;
            exps[p] = (self.order - self.exps[j]) % self.order;
        }
        MonomialMatrix {
            order: self.order,
            perm,
            exps,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(MonomialMatrix::identity(self.order), |acc, _| {
            multiply(&acc, &base)
        })
    }

    /// Same matrix written over `ζ_{new_order}`; `new_order` must be a
    /// multiple of the current order.
    pub fn lift(&self, new_order: u32) -> Self {
        assert!(
            new_order.is_multiple_of(self.order),
            "cannot lift {} to {}",
            self.order,
            new_order
        );
        let f = new_order / self.order;
        MonomialMatrix {
            order: new_order,
            perm: self.perm,
            exps: self.exps.map(|e| e * f),
        }
    }

    /// Entry in row `i`, column `j` as `Some(exponent)` or `None` for zero.
    pub fn entry(&self, i: usize, j: usize) -> Option<RootExponent> {
        (self.perm[j] as usize == i).then_some(self.exps[j])
    }
}

impl fmt::Display for MonomialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..3 {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..3 {
                if j > 0 {
                    f.write_str(", ")?;
                }
                match self.entry(i, j) {
                    None => f.write_str("0")?,
                    Some(0) => f.write_str("1")?,
                    Some(e) => write!(f, "z^{e}")?,
                }
            }
            f.write_str("]")?;
        }
        write!(f, "] (z = e^(2 pi i/{}))", self.order)
    }
}

/// Exact product `a · b`.
pub fn multiply(a: &MonomialMatrix, b: &MonomialMatrix) -> MonomialMatrix {
    assert_eq!(a.order, b.order, "root orders differ");
    let m = a.order;
    let mut perm = [0u8; 3];
    let mut exps = [0u32; 3];
    for j in 0..3 {
        let mid = b.perm[j] as usize;
        perm[j] = a.perm[mid];
        exps[j] = (b.exps[j] + a.exps[mid]) % m;
    }
    MonomialMatrix {
        order: m,
        perm,
        exps,
    }
}

impl std::ops::Mul for MonomialMatrix {
    type Output = MonomialMatrix;

    fn mul(self, rhs: MonomialMatrix) -> MonomialMatrix {
        multiply(&self, &rhs)
    }
}

/// Exponents of `(α, β, γ)` in the type (D) generator `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scalars {
    pub alpha: RootExponent,
    pub beta: RootExponent,
    pub gamma: RootExponent,
}

impl Scalars {
    /// `α = β = γ = -1`, which makes `r = -P_(12)` and the complement `⟨t, r⟩`.
    pub fn minus_ones(order: u32) -> Self {
        let h = order / 2;
        Scalars {
            alpha: h,
            beta: h,
            gamma: h,
        }
    }

    pub fn lift(&self, from: u32, to: u32) -> Self {
        let f = to / from;
        Scalars {
            alpha: self.alpha * f,
            beta: self.beta * f,
            gamma: self.gamma * f,
        }
    }
}

impl fmt::Display for Scalars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.alpha, self.beta, self.gamma)
    }
}

/// A finite group of monomial matrices, elements listed in discovery order
/// with the identity first.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    root_order: u32,
    elements: Vec<MonomialMatrix>,
    index: HashMap<MonomialMatrix, usize>,
    generators: Vec<MonomialMatrix>,
}

impl PartialEq for FiniteMatrixGroup {
    fn eq(&self, other: &Self) -> bool {
        self.root_order == other.root_order
            && self.elements.len() == other.elements.len()
            && self.elements.iter().all(|g| other.contains(g))
    }
}

impl FiniteMatrixGroup {
    pub fn trivial(root_order: u32) -> Self {
        let id = MonomialMatrix::identity(root_order);
        FiniteMatrixGroup {
            root_order,
            elements: vec![id],
            index: HashMap::from([(id, 0)]),
            generators: Vec::new(),
        }
    }

    fn from_elements(
        root_order: u32,
        elements: Vec<MonomialMatrix>,
        generators: Vec<MonomialMatrix>,
    ) -> Self {
        let index = elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        FiniteMatrixGroup {
            root_order,
            elements,
            index,
            generators,
        }
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn elements(&self) -> &[MonomialMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[MonomialMatrix] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &MonomialMatrix) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &MonomialMatrix) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| *a * *b == *b * *a))
    }

    /// `true` if `self` is a subgroup of `g` that is stable under conjugation
    /// by every element of `g`.
    pub fn is_normal_in(&self, g: &FiniteMatrixGroup) -> bool {
        self.elements.iter().all(|n| g.contains(n))
            && g.elements.iter().all(|x| {
                let xi = x.inverse();
                self.elements.iter().all(|n| self.contains(&(*x * *n * xi)))
            })
    }
}

pub fn default_closure_cap() -> usize {
    std::env::var(CLOSURE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

/// Closure of `generators` with the cap from [`default_closure_cap`].
pub fn closure(generators: &[MonomialMatrix]) -> Result<FiniteMatrixGroup, GroupError> {
    closure_with_cap(generators, default_closure_cap())
}

/// Breadth-first closure: starting from the identity, multiply every element
/// found on the right by each generator in turn.
pub fn closure_with_cap(
    generators: &[MonomialMatrix],
    cap: usize,
) -> Result<FiniteMatrixGroup, GroupError> {
    let first = generators.first().ok_or(GroupError::NoGenerators)?;
    let m = first.order;
    for g in generators {
        if g.order != m {
            return Err(GroupError::MixedRootOrder(m, g.order));
        }
        if !g.is_special_linear() {
            return Err(GroupError::GeneratorNotSpecialLinear(*g));
        }
    }
    let id = MonomialMatrix::identity(m);
    let mut elements = vec![id];
    let mut seen: HashSet<MonomialMatrix> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x * *g;
            if seen.insert(y) {
                if elements.len() >= cap {
                    return Err(GroupError::ExplosionGuard { cap });
                }
                elements.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(FiniteMatrixGroup::from_elements(
        m,
        elements,
        generators.to_vec(),
    ))
}

/// The diagonal elements of `g`, in the order they appear in `g`.
///
/// Panics if the result is not an abelian normal subgroup, which cannot
/// happen for a closed group of monomial matrices.
pub fn diagonal_subgroup(g: &FiniteMatrixGroup) -> FiniteMatrixGroup {
    let elements: Vec<_> = g
        .elements
        .iter()
        .copied()
        .filter(|x| x.is_diagonal())
        .collect();
    let gens = small_generating_set(&elements);
    let n = FiniteMatrixGroup::from_elements(g.root_order, elements, gens);
    assert!(n.is_abelian(), "diagonal subgroup is not abelian");
    assert!(n.is_normal_in(g), "diagonal subgroup is not normal");
    n
}

/// Greedy generating set: keep an element whenever it is not yet generated.
fn small_generating_set(elements: &[MonomialMatrix]) -> Vec<MonomialMatrix> {
    let mut gens = Vec::new();
    let mut span: HashSet<MonomialMatrix> = elements
        .first()
        .map(|&e| HashSet::from([e]))
        .unwrap_or_default();
    for &x in elements {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        // abelian: new span = span · <x>
        let mut next = HashSet::new();
        for &s in &span {
            let mut p = s;
            loop {
                if !next.insert(p) {
                    break;
                }
                p = p * x;
            }
        }
        span = next;
    }
    gens
}

/// Witnesses for `G = N ⋊ K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementReport {
    pub kind: Kind,
    pub normal_order: usize,
    pub group_order: usize,
    /// Elements of `K` in breadth-first order from its generators.
    pub complement: Vec<MonomialMatrix>,
    /// `[t]` for type (C); `[i1 i2, i1]` for type (D).
    pub complement_generators: Vec<MonomialMatrix>,
    pub i1: Option<MonomialMatrix>,
    pub i2: Option<MonomialMatrix>,
    /// `t = n · k` with `n` diagonal and `k ∈ K`.
    pub t_factorization: Option<(MonomialMatrix, MonomialMatrix)>,
    /// `r = n · k` with `n` diagonal and `k ∈ K`.
    pub r_factorization: Option<(MonomialMatrix, MonomialMatrix)>,
}

fn fail(msg: impl Into<String>) -> GroupError {
    GroupError::DecompositionFailure(msg.into())
}

/// Verifies the semidirect decomposition of a group built from `t` (and `r`
/// for type (D)), which must appear among `g`'s generators.
pub fn semidirect_check(g: &FiniteMatrixGroup, kind: Kind) -> Result<ComplementReport, GroupError> {
    let m = g.root_order;
    let n = diagonal_subgroup(g);
    let id = MonomialMatrix::identity(m);
    let t = MonomialMatrix::t(m);
    let (complement_generators, i1, i2, t_fact, r_fact) = match kind {
        Kind::A => (Vec::new(), None, None, None, None),
        Kind::C => {
            if !g.contains(&t) {
                return Err(fail("t is not in the group"));
            }
            (vec![t], None, None, Some((id, t)), None)
        }
        Kind::D => {
            let r = *g
                .generators
                .iter()
                .find(|x| x.perm == [1, 0, 2])
                .ok_or_else(|| fail("no generator of the shape of r"))?;
            let ti = t.inverse();
            let i1 = t * r * r * ti * r;
            let i2 = t * t * r * r * ti * r * ti;
            let i12 = i1 * i2;
            if !(i1 * i1).is_identity() || !(i2 * i2).is_identity() || !i12.pow(3).is_identity() {
                return Err(fail("i1^2 = i2^2 = (i1 i2)^3 = 1 does not hold"));
            }
            let tn = t * i2.inverse() * i1.inverse();
            let rn = t * r.pow(-2) * ti;
            if !tn.is_diagonal() || !rn.is_diagonal() {
                return Err(fail("t or r does not factor through N"));
            }
            (
                vec![i12, i1],
                Some(i1),
                Some(i2),
                Some((tn, i12)),
                Some((rn, i1)),
            )
        }
    };
    let complement = if complement_generators.is_empty() {
        vec![id]
    } else {
        closure_with_cap(&complement_generators, 6)?.elements
    };
    if complement.len() != kind.complement_order() {
        return Err(fail(format!(
            "complement has order {}, expected {}",
            complement.len(),
            kind.complement_order()
        )));
    }
    if complement.iter().skip(1).any(|k| n.contains(k)) {
        return Err(fail("complement meets N nontrivially"));
    }
    if n.order() * complement.len() != g.order() {
        return Err(fail(format!(
            "|N| |K| = {} * {} differs from |G| = {}",
            n.order(),
            complement.len(),
            g.order()
        )));
    }
    Ok(ComplementReport {
        kind,
        normal_order: n.order(),
        group_order: g.order(),
        complement,
        complement_generators,
        i1,
        i2,
        t_factorization: t_fact,
        r_factorization: r_fact,
    })
}

/// Conjugacy classes as lists of element indices. Classes are ordered by
/// their smallest index, and indices within a class increase.
pub fn conjugacy_classes(g: &FiniteMatrixGroup) -> Vec<Vec<usize>> {
    let mut class_of = vec![usize::MAX; g.order()];
    let mut classes = Vec::new();
    let inverses: Vec<_> = g.elements.iter().map(|x| x.inverse()).collect();
    for i in 0..g.order() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = Vec::new();
        for (x, xi) in g.elements.iter().zip(&inverses) {
            let y = *x * g.elements[i] * *xi;
            let j = g.index[&y];
            if class_of[j] == usize::MAX {
                class_of[j] = id;
                class.push(j);
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// A type (A), (C) or (D) subgroup of SL3 together with its lattice data.
#[derive(Debug, Clone)]
pub struct TypedGroup {
    pub kind: Kind,
    pub basis: LatticeBasis,
    pub root_order: u32,
    /// Present for type (D) only.
    pub scalars: Option<Scalars>,
    pub group: FiniteMatrixGroup,
    pub normal: FiniteMatrixGroup,
    pub complement: ComplementReport,
}

/// Smallest root order that can host `N` for the given kind.
pub fn default_root_order(basis: &LatticeBasis, kind: Kind) -> u32 {
    let (_, d2) = smith_invariants(basis);
    let d2 = d2 as u32;
    match kind {
        Kind::D => d2.lcm(&2),
        _ => d2,
    }
}

/// All `(u, v)` with `diag(ζ^u, ζ^v, ζ^(-u-v))` pairing trivially with `L`,
/// i.e. `(u, v) · B ≡ 0 (mod M)`.
pub fn annihilator(basis: &LatticeBasis, m: u32) -> Vec<[u32; 2]> {
    let (a, b, c) = (basis.a(), basis.b(), basis.c());
    let mi = m as i64;
    let step = mi / a.gcd(&mi);
    let mut out = Vec::new();
    let mut u = 0;
    while u < mi {
        for v in 0..mi {
            if (u * b + v * c).rem_euclid(mi) == 0 {
                out.push([u as u32, v as u32]);
            }
        }
        u += step;
    }
    out
}

impl TypedGroup {
    /// Realizes the group whose diagonal part is the annihilator of `L`.
    ///
    /// `root_order` defaults to [`default_root_order`]; `scalars` (type (D)
    /// only) default to [`Scalars::minus_ones`].
    pub fn from_lattice(
        basis: LatticeBasis,
        kind: Kind,
        root_order: Option<u32>,
        scalars: Option<Scalars>,
    ) -> Result<Self, GroupError> {
        crate::lattice::admissibility(&basis, kind)?;
        let (_, d2) = smith_invariants(&basis);
        let m = root_order.unwrap_or_else(|| default_root_order(&basis, kind));
        if m == 0 {
            return Err(GroupError::ZeroRootOrder);
        }
        if (m as i64) % d2 != 0 {
            return Err(GroupError::RootOrderTooSmall {
                root_order: m,
                exponent: d2,
            });
        }
        let diag: Vec<_> = annihilator(&basis, m)
            .into_iter()
            .map(|[u, v]| MonomialMatrix::diagonal(m, [u, v, (2 * m - u - v) % m]))
            .collect();
        Self::assemble(kind, basis, m, small_generating_set(&diag), scalars)
    }

    /// Realizes the group generated by the given diagonal exponent triples
    /// together with `t` (and `r`), and recovers `L` from its diagonal part.
    pub fn from_diagonal(
        kind: Kind,
        root_order: u32,
        diagonal: &[[u32; 3]],
        scalars: Option<Scalars>,
    ) -> Result<Self, GroupError> {
        if root_order == 0 {
            return Err(GroupError::ZeroRootOrder);
        }
        let gens: Vec<_> = diagonal
            .iter()
            .map(|&e| MonomialMatrix::diagonal(root_order, e))
            .collect();
        if let Some(bad) = gens.iter().find(|g| !g.is_special_linear()) {
            return Err(GroupError::DiagonalNotSpecialLinear(*bad));
        }
        let (group, scalars) = Self::close(kind, root_order, &gens, scalars)?;
        let normal = diagonal_subgroup(&group);
        let basis = kernel_lattice(&normal)?;
        crate::lattice::admissibility(&basis, kind)?;
        let complement = semidirect_check(&group, kind)?;
        Ok(TypedGroup {
            kind,
            basis,
            root_order,
            scalars,
            group,
            normal,
            complement,
        })
    }

    fn close(
        kind: Kind,
        m: u32,
        diag_gens: &[MonomialMatrix],
        scalars: Option<Scalars>,
    ) -> Result<(FiniteMatrixGroup, Option<Scalars>), GroupError> {
        let mut gens = diag_gens.to_vec();
        let scalars = match kind {
            Kind::A => None,
            Kind::C => {
                gens.push(MonomialMatrix::t(m));
                None
            }
            Kind::D => {
                if !m.is_multiple_of(2) {
                    return Err(GroupError::OddRootOrder(m));
                }
                let s = scalars.unwrap_or_else(|| Scalars::minus_ones(m));
                gens.push(MonomialMatrix::t(m));
                gens.push(MonomialMatrix::r(m, s));
                Some(s)
            }
        };
        if gens.is_empty() {
            return Ok((FiniteMatrixGroup::trivial(m), scalars));
        }
        Ok((closure(&gens)?, scalars))
    }

    fn assemble(
        kind: Kind,
        basis: LatticeBasis,
        m: u32,
        diag_gens: Vec<MonomialMatrix>,
        scalars: Option<Scalars>,
    ) -> Result<Self, GroupError> {
        let (group, scalars) = Self::close(kind, m, &diag_gens, scalars)?;
        let normal = diagonal_subgroup(&group);
        let expected = basis.det() as usize;
        if normal.order() != expected {
            return Err(GroupError::ScalarsInconsistent {
                expected,
                found: normal.order(),
            });
        }
        let complement = semidirect_check(&group, kind)?;
        Ok(TypedGroup {
            kind,
            basis,
            root_order: m,
            scalars,
            group,
            normal,
            complement,
        })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// `L = {x ∈ Z² : u x1 + v x2 ≡ 0 (mod M) for every diag(ζ^u, ζ^v, ·) ∈ N}`.
pub fn kernel_lattice(n: &FiniteMatrixGroup) -> Result<LatticeBasis, GroupError> {
    let m = n.root_order() as i64;
    let mut columns = vec![[m, 0], [0, m]];
    for x1 in 0..m {
        for x2 in 0..m {
            let kills = n.elements().iter().all(|g| {
                let [u, v, _] = g.exps();
                (u as i64 * x1 + v as i64 * x2) % m == 0
            });
            if kills {
                columns.push([x1, x2]);
            }
        }
    }
    Ok(hermite_normal_form_of_columns(&columns).expect("contains M Z^2"))
}

//! The McKay quiver `Q_N` of a diagonal abelian group, its elementary cycles
//! and commutativity squares, and the action of the complement `K` on it.
//!
//! Vertices are the cosets of `Z²/L` in the quotient's order. The arrow of
//! type `i` at `x` goes `x → x + e_i` and has id `3·index(x) + (i - 1)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{permute_types, AbelianQuotient, Coset, Kind, LatticeBasis, UNIT};
use crate::monomial_group::{
    ComplementReport, GroupError, MonomialMatrix, RootExponent, Scalars, TypedGroup,
};

#[derive(Debug, Error)]
pub enum QuiverError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("lattice is not stable under the complement element {0}")]
    NotInvariant(MonomialMatrix),
    #[error("action check failed: {0}")]
    ActionInvariant(String),
}

/// An arrow `source → target` of type 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub ty: u8,
}

#[derive(Debug, Clone)]
pub struct TypedQuiver {
    quotient: AbelianQuotient,
    targets: Vec<[usize; 3]>,
}

impl TypedQuiver {
    pub fn new(quotient: AbelianQuotient) -> Self {
        let targets = quotient
            .cosets()
            .iter()
            .map(|x| UNIT.map(|e| quotient.index_of_vector([x.x1 + e[0], x.x2 + e[1]])))
            .collect();
        TypedQuiver { quotient, targets }
    }

    pub fn from_basis(basis: LatticeBasis) -> Self {
        TypedQuiver::new(AbelianQuotient::new(basis))
    }

    pub fn quotient(&self) -> &AbelianQuotient {
        &self.quotient
    }

    pub fn basis(&self) -> &LatticeBasis {
        self.quotient.basis()
    }

    pub fn vertex_count(&self) -> usize {
        self.targets.len()
    }

    pub fn arrow_count(&self) -> usize {
        3 * self.targets.len()
    }

    pub fn coset(&self, v: usize) -> Coset {
        self.quotient.coset(v)
    }

    pub fn label(&self, v: usize) -> String {
        self.coset(v).to_string()
    }

    pub fn arrow_id(source: usize, ty: u8) -> usize {
        3 * source + (ty as usize - 1)
    }

    /// Target of the type-`ty` arrow at `source` (`ty` in 1..=3).
    pub fn target(&self, source: usize, ty: u8) -> usize {
        self.targets[source][ty as usize - 1]
    }

    pub fn arrow(&self, id: usize) -> Arrow {
        let source = id / 3;
        let ty = (id % 3) as u8 + 1;
        Arrow {
            id,
            source,
            target: self.target(source, ty),
            ty,
        }
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        (0..self.arrow_count()).map(|id| self.arrow(id))
    }

    /// Types `i` with an arrow `u → v` of type `i`.
    pub fn types_between(&self, u: usize, v: usize) -> impl Iterator<Item = u8> + '_ {
        (1..=3u8).filter(move |&ty| self.target(u, ty) == v)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows().filter(|a| a.target == v).count()
    }
}

pub fn build_quiver(q: &AbelianQuotient) -> TypedQuiver {
    TypedQuiver::new(q.clone())
}

/// Cyclic order of the arrow types along an elementary cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CycleOrder {
    /// Types 1, 2, 3.
    Ascending,
    /// Types 1, 3, 2.
    Descending,
}

impl CycleOrder {
    pub fn types(self) -> [u8; 3] {
        match self {
            CycleOrder::Ascending => [1, 2, 3],
            CycleOrder::Descending => [1, 3, 2],
        }
    }
}

/// A 3-cycle through arrows of three distinct types, normalized so the
/// arrow of type 1 comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementaryCycle {
    pub start: usize,
    pub order: CycleOrder,
}

impl ElementaryCycle {
    pub fn arrows(&self, q: &TypedQuiver) -> [usize; 3] {
        let mut v = self.start;
        self.order.types().map(|ty| {
            let id = TypedQuiver::arrow_id(v, ty);
            v = q.target(v, ty);
            id
        })
    }
}

pub fn elementary_cycles(q: &TypedQuiver) -> Vec<ElementaryCycle> {
    (0..q.vertex_count())
        .flat_map(|start| {
            [CycleOrder::Ascending, CycleOrder::Descending]
                .map(|order| ElementaryCycle { start, order })
        })
        .collect()
}

/// The two 2-paths `x → x+e_i → x+e_i+e_j` and `x → x+e_j → x+e_i+e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Square {
    pub vertex: usize,
    pub types: (u8, u8),
}

impl Square {
    pub fn paths(&self, q: &TypedQuiver) -> [[usize; 2]; 2] {
        let (i, j) = self.types;
        let x = self.vertex;
        [
            [
                TypedQuiver::arrow_id(x, i),
                TypedQuiver::arrow_id(q.target(x, i), j),
            ],
            [
                TypedQuiver::arrow_id(x, j),
                TypedQuiver::arrow_id(q.target(x, j), i),
            ],
        ]
    }
}

pub fn commutativity_squares(q: &TypedQuiver) -> Vec<Square> {
    (0..q.vertex_count())
        .flat_map(|vertex| [(1, 2), (1, 3), (2, 3)].map(|types| Square { vertex, types }))
        .collect()
}

/// Image of an arrow under a monomial matrix with permutation `perm`.
pub fn arrow_image(q: &TypedQuiver, perm: [u8; 3], arrow: usize) -> usize {
    let a = q.arrow(arrow);
    let x = q.coset(a.source).as_vector();
    let v = q.quotient().index_of_vector(permute_types(perm, x));
    TypedQuiver::arrow_id(v, perm[a.ty as usize - 1] + 1)
}

/// How one element of `K` moves vertices and arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementAction {
    pub matrix: MonomialMatrix,
    pub vertex_perm: Vec<usize>,
    pub arrow_perm: Vec<usize>,
    /// The arrow `a` is sent to `ζ^arrow_scalar[a] · arrow_perm[a]`.
    pub arrow_scalar: Vec<RootExponent>,
}

/// The complement `K` acting on `Q_N`, one entry per group element.
#[derive(Debug, Clone)]
pub struct QuiverAction {
    pub kind: Kind,
    pub root_order: u32,
    pub scalars: Option<Scalars>,
    /// Element 0 is the identity; the rest follow breadth-first order.
    pub elements: Vec<ElementAction>,
    /// Indices into `elements`: the order-3 generator, then (type (D)) `i1`.
    pub generators: Vec<usize>,
    /// `mul[a][b]` is the index of `elements[a] · elements[b]`.
    pub mul: Vec<Vec<usize>>,
}

impl QuiverAction {
    pub fn new(
        q: &TypedQuiver,
        kind: Kind,
        root_order: u32,
        scalars: Option<Scalars>,
        complement: &ComplementReport,
    ) -> Result<Self, QuiverError> {
        let quot = q.quotient();
        let mut elements = Vec::with_capacity(complement.complement.len());
        for k in &complement.complement {
            let perm = k.perm();
            for col in quot.basis().columns() {
                if !quot.basis().contains(permute_types(perm, col)) {
                    return Err(QuiverError::NotInvariant(*k));
                }
            }
            let vertex_perm = quot
                .cosets()
                .iter()
                .map(|x| quot.index_of_vector(permute_types(perm, x.as_vector())))
                .collect();
            let arrow_perm = (0..q.arrow_count())
                .map(|a| arrow_image(q, perm, a))
                .collect();
            let arrow_scalar = (0..q.arrow_count()).map(|a| k.exps()[a % 3]).collect();
            elements.push(ElementAction {
                matrix: *k,
                vertex_perm,
                arrow_perm,
                arrow_scalar,
            });
        }
        let index_of = |m: &MonomialMatrix| {
            complement
                .complement
                .iter()
                .position(|k| k == m)
                .ok_or_else(|| QuiverError::ActionInvariant(format!("{m} is not in K")))
        };
        let mut mul = Vec::new();
        for a in &complement.complement {
            let row = complement
                .complement
                .iter()
                .map(|b| index_of(&(*a * *b)))
                .collect::<Result<Vec<_>, _>>()?;
            mul.push(row);
        }
        let generators = complement
            .complement_generators
            .iter()
            .map(index_of)
            .collect::<Result<Vec<_>, _>>()?;
        let action = QuiverAction {
            kind,
            root_order,
            scalars,
            elements,
            generators,
            mul,
        };
        action.verify(q)?;
        Ok(action)
    }

    /// Action of the complement of `group` on its own McKay quiver.
    pub fn for_group(q: &TypedQuiver, group: &TypedGroup) -> Result<Self, QuiverError> {
        QuiverAction::new(
            q,
            group.kind,
            group.root_order,
            group.scalars,
            &group.complement,
        )
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order())
            .find(|&h| self.mul[g][h] == 0)
            .expect("group element has an inverse")
    }

    /// Checks bijectivity, compatibility with sources and targets, and that
    /// the map `K → Aut(Q_N)` (including arrow scalars) is a homomorphism.
    pub fn verify(&self, q: &TypedQuiver) -> Result<(), QuiverError> {
        let err = |m: String| Err(QuiverError::ActionInvariant(m));
        for (g, e) in self.elements.iter().enumerate() {
            if !is_permutation(&e.vertex_perm) || !is_permutation(&e.arrow_perm) {
                return err(format!("element {g} does not act bijectively"));
            }
            for a in q.arrows() {
                let b = q.arrow(e.arrow_perm[a.id]);
                if b.source != e.vertex_perm[a.source] || b.target != e.vertex_perm[a.target] {
                    return err(format!("element {g} moves arrow {} inconsistently", a.id));
                }
            }
        }
        let m = self.root_order;
        for (x, ex) in self.elements.iter().enumerate() {
            for (y, ey) in self.elements.iter().enumerate() {
                let exy = &self.elements[self.mul[x][y]];
                for v in 0..q.vertex_count() {
                    if exy.vertex_perm[v] != ex.vertex_perm[ey.vertex_perm[v]] {
                        return err(format!("vertex action of {x}·{y} is not a composite"));
                    }
                }
                for a in 0..q.arrow_count() {
                    let mid = ey.arrow_perm[a];
                    let scalar = (ey.arrow_scalar[a] + ex.arrow_scalar[mid]) % m;
                    if exy.arrow_perm[a] != ex.arrow_perm[mid] || exy.arrow_scalar[a] != scalar {
                        return err(format!("arrow action of {x}·{y} is not a composite"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Vertex orbits, each sorted, ordered by least member.
    pub fn vertex_orbits(&self, vertex_count: usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; vertex_count];
        let mut orbits = Vec::new();
        for v in 0..vertex_count {
            if seen[v] {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements.iter().map(|e| e.vertex_perm[v]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &u in &orbit {
                seen[u] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Vertices fixed by the order-3 generator.
    pub fn rotation_fixed_vertices(&self) -> Vec<usize> {
        let Some(&g) = self.generators.first() else {
            return Vec::new();
        };
        let perm = &self.elements[g].vertex_perm;
        (0..perm.len()).filter(|&v| perm[v] == v).collect()
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter()
        .all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

/// Builds the group for `(B, kind)` and returns its complement's action on
/// `Q_N`.
pub fn k_action(
    q: &TypedQuiver,
    kind: Kind,
    scalars: Option<Scalars>,
) -> Result<QuiverAction, QuiverError> {
    let group = TypedGroup::from_lattice(*q.basis(), kind, None, scalars)?;
    QuiverAction::for_group(q, &group)
}

//! Skewing a quiver by a finite group acting on it: vertices of the result
//! are pairs (orbit representative, irreducible character of its
//! stabilizer), and arrows are counted by character inner products over the
//! joint stabilizers of a transversal of vertex pairs.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use super::characters::SubgroupCharacters;
use super::cyclotomic::{CyclotomicField, CyclotomicNumber};
use super::{ArrowBlock, GroupTable, SkewError, SkewQuiver, SkewVertex};
use crate::cuts::Cut;
use crate::mckay_quiver::{QuiverAction, TypedQuiver};

/// A quiver with a group acting on it by permuting vertices and acting
/// linearly on the arrow spaces between fixed vertex pairs.
pub trait SkewInput {
    fn group(&self) -> &GroupTable;
    fn field(&self) -> &Arc<CyclotomicField>;
    fn vertex_count(&self) -> usize;
    fn act(&self, g: usize, v: usize) -> usize;
    fn vertex_label(&self, v: usize) -> String;
    /// Whether arrows carry degrees 0/1 that the group preserves.
    fn graded(&self) -> bool;
    /// Dimension of the span of arrows `u1 → u2`, restricted to one degree
    /// when `degree` is given.
    fn arrow_count(&self, u1: usize, u2: usize, degree: Option<u8>) -> u64;
    /// Trace of `h` on that span; `h` fixes both `u1` and `u2`.
    fn arrow_trace(&self, u1: usize, u2: usize, h: usize, degree: Option<u8>) -> CyclotomicNumber;
}

struct Orbit {
    rep: usize,
    members: Vec<usize>,
    characters: SubgroupCharacters,
}

pub fn skew<I: SkewInput + ?Sized>(input: &I) -> Result<SkewQuiver, SkewError> {
    let group = input.group();
    let n = input.vertex_count();
    let field = input.field();

    let mut orbit_of = vec![usize::MAX; n];
    // g_to[u]: first group element carrying the orbit representative to u
    let mut g_to = vec![usize::MAX; n];
    let mut orbits: Vec<Orbit> = Vec::new();
    for v in 0..n {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::new();
        for g in 0..group.order() {
            let u = input.act(g, v);
            if orbit_of[u] == usize::MAX {
                orbit_of[u] = id;
                g_to[u] = g;
                members.push(u);
            }
        }
        members.sort_unstable();
        let stabilizer = (0..group.order())
            .filter(|&g| input.act(g, v) == v)
            .collect();
        orbits.push(Orbit {
            rep: v,
            members,
            characters: SubgroupCharacters::new(group, stabilizer, field),
        });
    }

    let mut vertices = Vec::new();
    let mut first_vertex = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        first_vertex.push(vertices.len());
        let chars = &orbit.characters;
        for irrep in 0..chars.len() {
            let label = chars.label(irrep);
            vertices.push(SkewVertex {
                orbit_rep: orbit.rep,
                orbit: orbit.members.clone(),
                stabilizer: chars.elements.clone(),
                irrep,
                irrep_label: label.to_string(),
                irrep_degree: chars.degree(irrep),
                dimension: orbit.members.len() as u64 * chars.degree(irrep),
                label: format!("{}/{}", input.vertex_label(orbit.rep), label),
            });
        }
    }

    let degrees: Vec<Option<u8>> = if input.graded() {
        vec![Some(0), Some(1)]
    } else {
        vec![None]
    };
    let stabilizes = |g: usize, u: usize| input.act(g, u) == u;
    let mut arrows: BTreeMap<(usize, usize), ArrowBlock> = BTreeMap::new();
    for (i, oi) in orbits.iter().enumerate() {
        for (j, oj) in orbits.iter().enumerate() {
            for (u1, u2) in transversal(input, &oi.members, &oj.members) {
                if input.arrow_count(u1, u2, None) == 0 {
                    continue;
                }
                let joint: Vec<usize> = (0..group.order())
                    .filter(|&h| stabilizes(h, u1) && stabilizes(h, u2))
                    .collect();
                let g1 = g_to[u1];
                let g2 = g_to[u2];
                let (g1i, g2i) = (group.inv(g1), group.inv(g2));
                for (di, &degree) in degrees.iter().enumerate() {
                    if input.arrow_count(u1, u2, degree) == 0 {
                        continue;
                    }
                    let traces: Vec<CyclotomicNumber> = joint
                        .iter()
                        .map(|&h| input.arrow_trace(u1, u2, h, degree))
                        .collect();
                    for phi in 0..oi.characters.len() {
                        for psi in 0..oj.characters.len() {
                            let mut sum = CyclotomicNumber::zero(field);
                            for (&h, tr) in joint.iter().zip(&traces) {
                                let h1 = group.mul(group.mul(g1i, h), g1);
                                let h2 = group.mul(group.mul(g2i, h), g2);
                                let a = oi.characters.value(phi, h1).conj();
                                let b = oj.characters.value(psi, h2);
                                sum += &(&(&a * b) * tr);
                            }
                            let source = first_vertex[i] + phi;
                            let target = first_vertex[j] + psi;
                            let mult = divide(&sum, joint.len()).ok_or_else(|| {
                                SkewError::NonIntegralMultiplicity {
                                    from: vertices[source].label.clone(),
                                    to: vertices[target].label.clone(),
                                    value: format!("{:?} / {}", sum.coords(), joint.len()),
                                }
                            })?;
                            if mult == 0 {
                                continue;
                            }
                            let block =
                                arrows
                                    .entry((source, target))
                                    .or_insert_with(|| ArrowBlock {
                                        total: 0,
                                        by_degree: input.graded().then_some([0, 0]),
                                    });
                            block.total += mult;
                            if let Some(d) = block.by_degree.as_mut() {
                                d[di] += mult;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(SkewQuiver {
        vertices,
        arrows,
        acting_order: group.order(),
        graded: input.graded(),
    })
}

/// `value / k` as a nonnegative integer, if it is one.
fn divide(value: &CyclotomicNumber, k: usize) -> Option<u64> {
    let v = value.to_integer()?;
    let k = k as i64;
    (v >= 0 && v % k == 0).then(|| (v / k) as u64)
}

/// Lexicographically least pair from each orbit of the diagonal action on
/// `left × right`.
fn transversal<I: SkewInput + ?Sized>(
    input: &I,
    left: &[usize],
    right: &[usize],
) -> Vec<(usize, usize)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &u1 in left {
        for &u2 in right {
            if seen.contains(&(u1, u2)) {
                continue;
            }
            out.push((u1, u2));
            for g in 0..input.group().order() {
                seen.insert((input.act(g, u1), input.act(g, u2)));
            }
        }
    }
    out
}

/// `Q_N` with the complement acting on it, optionally graded by a cut.
pub struct QuiverSkewInput<'a> {
    quiver: &'a TypedQuiver,
    action: &'a QuiverAction,
    table: GroupTable,
    field: Arc<CyclotomicField>,
    cut: Option<&'a Cut>,
}

impl<'a> QuiverSkewInput<'a> {
    pub fn new(quiver: &'a TypedQuiver, action: &'a QuiverAction, cut: Option<&'a Cut>) -> Self {
        QuiverSkewInput {
            quiver,
            action,
            table: GroupTable::from_mul(action.mul.clone()),
            field: CyclotomicField::for_root_order(action.root_order),
            cut,
        }
    }

    fn arrow_ids(
        &self,
        u1: usize,
        u2: usize,
        degree: Option<u8>,
    ) -> impl Iterator<Item = usize> + '_ {
        self.quiver
            .types_between(u1, u2)
            .map(move |ty| TypedQuiver::arrow_id(u1, ty))
            .filter(move |&a| match (degree, self.cut) {
                (None, _) => true,
                (Some(d), Some(cut)) => cut.degree(a) == d,
                (Some(d), None) => d == 0,
            })
    }
}

impl SkewInput for QuiverSkewInput<'_> {
    fn group(&self) -> &GroupTable {
        &self.table
    }

    fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    fn act(&self, g: usize, v: usize) -> usize {
        self.action.elements[g].vertex_perm[v]
    }

    fn vertex_label(&self, v: usize) -> String {
        self.quiver.label(v)
    }

    fn graded(&self) -> bool {
        self.cut.is_some()
    }

    fn arrow_count(&self, u1: usize, u2: usize, degree: Option<u8>) -> u64 {
        self.arrow_ids(u1, u2, degree).count() as u64
    }

    fn arrow_trace(&self, u1: usize, u2: usize, h: usize, degree: Option<u8>) -> CyclotomicNumber {
        let e = &self.action.elements[h];
        let mut tr = CyclotomicNumber::zero(&self.field);
        for a in self.arrow_ids(u1, u2, degree) {
            if e.arrow_perm[a] == a {
                tr += &CyclotomicNumber::root_of_order(
                    &self.field,
                    self.action.root_order,
                    e.arrow_scalar[a] as i64,
                );
            }
        }
        tr
    }
}

//! Undoing a type (C) skew: the character group `T̂ ≅ C3` acts on `Q_N * T`
//! by twisting stabilizer characters, and skewing once more gives back `Q_N`
//! together with its cut.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cyclotomic::{CyclotomicField, CyclotomicNumber};
use super::iso::{find_isomorphism, LabeledMultigraph};
use super::{skew, skew_quiver, transport_cut, GroupTable, SkewError, SkewInput, SkewQuiver};
use crate::cuts::{cut_type, invariant_cut, Cut, TypeVector};
use crate::lattice::{admissibility, Kind, LatticeBasis};
use crate::mckay_quiver::{QuiverAction, TypedQuiver};

/// `T̂` acting on a skew quiver built from `(Q_N, ⟨t⟩)`.
pub struct DualTwist<'a> {
    skewed: &'a SkewQuiver,
    table: GroupTable,
    field: Arc<CyclotomicField>,
    /// `images[a][v]`: image of vertex `v` under `λ^a`.
    images: Vec<Vec<usize>>,
    /// For blocks between trivial-stabilizer vertices: `counts[d][k]` is the
    /// number of degree-`d` arrows from the source representative to
    /// `t^k` applied to the target representative.
    free_counts: BTreeMap<(usize, usize), [[u64; 3]; 2]>,
}

impl DualTwist<'_> {
    pub fn image(&self, power: usize, v: usize) -> usize {
        self.images[power % 3][v]
    }
}

/// Builds the `T̂`-action on `skewed = Q_N * T` (graded by `cut` if given).
///
/// A vertex `(u, φ)` goes to `(u, φ ⊗ λ)`, where `λ` sends `t` to `ω`; this
/// moves the three characters over a `t`-fixed vertex cyclically and fixes
/// the vertices coming from free orbits.
pub fn dual_twist_action<'a>(
    skewed: &'a SkewQuiver,
    q: &TypedQuiver,
    action: &QuiverAction,
    cut: Option<&Cut>,
) -> Result<DualTwist<'a>, SkewError> {
    if action.kind != Kind::C {
        return Err(SkewError::Unsupported(action.kind));
    }
    let n = skewed.vertex_count();
    let position = |rep: usize, irrep: usize| {
        skewed
            .vertices
            .iter()
            .position(|w| w.orbit_rep == rep && w.irrep == irrep)
            .expect("every irrep of a stabilizer is a vertex")
    };
    let mut images = vec![(0..n).collect::<Vec<_>>()];
    for a in 1..3 {
        images.push(
            skewed
                .vertices
                .iter()
                .map(|v| {
                    if v.stabilizer.len() == 3 {
                        position(v.orbit_rep, (v.irrep + a) % 3)
                    } else {
                        position(v.orbit_rep, v.irrep)
                    }
                })
                .collect(),
        );
    }

    let g = action.generators[0];
    let powers = [0, g, action.mul[g][g]];
    let mut free_counts = BTreeMap::new();
    for (&(s, t), block) in &skewed.arrows {
        let (vs, vt) = (&skewed.vertices[s], &skewed.vertices[t]);
        if vs.stabilizer.len() != 1 || vt.stabilizer.len() != 1 {
            continue;
        }
        let mut counts = [[0u64; 3]; 2];
        for ty in 1..=3u8 {
            let target = q.target(vs.orbit_rep, ty);
            let Some(k) = powers
                .iter()
                .position(|&p| action.elements[p].vertex_perm[vt.orbit_rep] == target)
            else {
                continue;
            };
            let degree = cut.map_or(0, |c| c.degree(TypedQuiver::arrow_id(vs.orbit_rep, ty)));
            counts[degree as usize][k] += 1;
        }
        let total: u64 = counts.iter().flatten().sum();
        if total != block.total {
            return Err(SkewError::Invariant(format!(
                "free block {} -> {} has {} arrows but {total} preimages",
                vs.label, vt.label, block.total
            )));
        }
        free_counts.insert((s, t), counts);
    }

    Ok(DualTwist {
        skewed,
        table: GroupTable::cyclic(3),
        field: CyclotomicField::new(3),
        images,
        free_counts,
    })
}

impl SkewInput for DualTwist<'_> {
    fn group(&self) -> &GroupTable {
        &self.table
    }

    fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    fn vertex_count(&self) -> usize {
        self.skewed.vertex_count()
    }

    fn act(&self, g: usize, v: usize) -> usize {
        self.images[g][v]
    }

    fn vertex_label(&self, v: usize) -> String {
        self.skewed.vertices[v].label.clone()
    }

    fn graded(&self) -> bool {
        self.skewed.graded
    }

    fn arrow_count(&self, u1: usize, u2: usize, degree: Option<u8>) -> u64 {
        match (self.skewed.arrows.get(&(u1, u2)), degree) {
            (None, _) => 0,
            (Some(b), None) => b.total,
            (Some(b), Some(d)) => b
                .by_degree
                .map_or(if d == 0 { b.total } else { 0 }, |x| x[d as usize]),
        }
    }

    fn arrow_trace(&self, u1: usize, u2: usize, h: usize, degree: Option<u8>) -> CyclotomicNumber {
        if h == 0 {
            return CyclotomicNumber::integer(&self.field, self.arrow_count(u1, u2, degree) as i64);
        }
        let counts = self
            .free_counts
            .get(&(u1, u2))
            .expect("only free-orbit vertices are fixed by a nontrivial twist");
        let mut tr = CyclotomicNumber::zero(&self.field);
        for (d, row) in counts.iter().enumerate() {
            if degree.is_some_and(|want| want as usize != d) {
                continue;
            }
            for (k, &c) in row.iter().enumerate() {
                tr += &CyclotomicNumber::omega(&self.field, (h * k) as i64).scale(c as i64);
            }
        }
        tr
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub basis: LatticeBasis,
    pub normal_order: usize,
    pub skew_vertices: usize,
    pub double_skew_vertices: usize,
    pub cut_type: TypeVector,
    /// Vertex `i` of the double skew corresponds to vertex `isomorphism[i]`
    /// of `Q_N`, matching arrow multiplicities in each degree.
    pub isomorphism: Vec<usize>,
    /// Degree-1 arrows pulled back to `Q_N`: `(source, target, count)`.
    pub recovered_cut: Vec<(usize, usize, u64)>,
    pub cut_recovered: bool,
}

fn quiver_graph(q: &TypedQuiver, cut: Option<&Cut>) -> LabeledMultigraph {
    let mut g = LabeledMultigraph::new(q.vertex_count(), if cut.is_some() { 2 } else { 1 });
    for a in q.arrows() {
        let label = cut.map_or(0, |c| c.degree(a.id) as usize);
        g.add(a.source, a.target, label, 1);
    }
    g
}

fn skew_graph(s: &SkewQuiver, graded: bool) -> LabeledMultigraph {
    let mut g = LabeledMultigraph::new(s.vertex_count(), if graded { 2 } else { 1 });
    for (&(u, v), b) in &s.arrows {
        match (graded, b.by_degree) {
            (true, Some([d0, d1])) => {
                g.add(u, v, 0, d0);
                g.add(u, v, 1, d1);
            }
            _ => g.add(u, v, 0, b.total),
        }
    }
    g
}

/// Skews `Q_N` by `T`, transports the invariant cut, skews by `T̂`, and
/// searches for an isomorphism back to `Q_N` that matches degrees.
pub fn unskew_round_trip(basis: &LatticeBasis) -> Result<RoundTripReport, SkewError> {
    admissibility(basis, Kind::C).map_err(|e| SkewError::Invariant(e.to_string()))?;
    let q = TypedQuiver::from_basis(*basis);
    let action = crate::mckay_quiver::k_action(&q, Kind::C, None)?;
    let s = skew_quiver(&q, &action)?;
    let cut = invariant_cut(basis, Kind::C)?;
    let graded = transport_cut(&s, &q, &action, &cut)?;
    let twist = dual_twist_action(&graded, &q, &action, Some(&cut))?;
    let double = skew(&twist)?;

    let n = q.vertex_count();
    if double.vertex_count() != n {
        return Err(SkewError::IsoSearchExhausted(format!(
            "double skew has {} vertices, Q_N has {n}",
            double.vertex_count()
        )));
    }
    if find_isomorphism(&skew_graph(&double, false), &quiver_graph(&q, None)).is_none() {
        return Err(SkewError::IsoSearchExhausted(
            "arrow multiplicities differ".into(),
        ));
    }
    let iso = find_isomorphism(&skew_graph(&double, true), &quiver_graph(&q, Some(&cut)))
        .ok_or_else(|| SkewError::IsoSearchExhausted("no isomorphism preserves degrees".into()))?;

    let mut recovered = Vec::new();
    for (&(u, v), b) in &double.arrows {
        let d1 = b.by_degree.map_or(0, |d| d[1]);
        if d1 > 0 {
            recovered.push((iso[u], iso[v], d1));
        }
    }
    recovered.sort_unstable();
    let mut original: Vec<(usize, usize, u64)> = Vec::new();
    for &a in cut.arrows() {
        let arrow = q.arrow(a);
        match original
            .iter_mut()
            .find(|(s, t, _)| (*s, *t) == (arrow.source, arrow.target))
        {
            Some(entry) => entry.2 += 1,
            None => original.push((arrow.source, arrow.target, 1)),
        }
    }
    original.sort_unstable();

    Ok(RoundTripReport {
        basis: *basis,
        normal_order: n,
        skew_vertices: s.vertex_count(),
        double_skew_vertices: double.vertex_count(),
        cut_type: cut_type(&q, &cut),
        isomorphism: iso,
        cut_recovered: recovered == original,
        recovered_cut: recovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mckay_quiver::k_action;

    #[test]
    fn twist_has_order_three() {
        let b = LatticeBasis::scalar(3);
        let q = TypedQuiver::from_basis(b);
        let act = k_action(&q, Kind::C, None).unwrap();
        let s = skew_quiver(&q, &act).unwrap();
        let tw = dual_twist_action(&s, &q, &act, None).unwrap();
        for v in 0..s.vertex_count() {
            assert_eq!(tw.image(3, v), v);
            let w = tw.image(1, v);
            if s.vertices[v].stabilizer.len() == 3 {
                assert_ne!(w, v);
                assert_eq!(s.vertices[w].orbit_rep, s.vertices[v].orbit_rep);
            } else {
                assert_eq!(w, v);
            }
        }
    }

    #[test]
    fn round_trip_small_cases() {
        let r = unskew_round_trip(&LatticeBasis::new(3, 2, 1).unwrap()).unwrap();
        assert_eq!(r.double_skew_vertices, 3);
        assert_eq!(r.cut_type, TypeVector([1, 1, 1]));
        assert!(r.cut_recovered);

        let r = unskew_round_trip(&LatticeBasis::scalar(3)).unwrap();
        assert_eq!(r.skew_vertices, 11);
        assert_eq!(r.double_skew_vertices, 9);
        assert!(r.cut_recovered);
    }
}

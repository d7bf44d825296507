//! Irreducible characters of the subgroups of `S3` that occur as vertex
//! stabilizers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cyclotomic::{CyclotomicField, CyclotomicNumber};
use super::GroupTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilizerKind {
    Trivial,
    C2,
    C3,
    S3,
}

impl StabilizerKind {
    pub fn from_order(order: usize) -> Option<Self> {
        match order {
            1 => Some(StabilizerKind::Trivial),
            2 => Some(StabilizerKind::C2),
            3 => Some(StabilizerKind::C3),
            6 => Some(StabilizerKind::S3),
            _ => None,
        }
    }

    pub fn labels(self) -> &'static [&'static str] {
        match self {
            StabilizerKind::Trivial => &["1"],
            StabilizerKind::C2 => &["1", "sgn"],
            StabilizerKind::C3 => &["1", "w", "w2"],
            StabilizerKind::S3 => &["1", "sgn", "std"],
        }
    }

    pub fn degrees(self) -> &'static [u64] {
        match self {
            StabilizerKind::S3 => &[1, 1, 2],
            StabilizerKind::Trivial => &[1],
            StabilizerKind::C2 => &[1, 1],
            StabilizerKind::C3 => &[1, 1, 1],
        }
    }
}

/// Character table of a stabilizer `H ≤ K`, indexed by the elements of `H`
/// (as indices into `K`'s table).
#[derive(Debug, Clone)]
pub struct SubgroupCharacters {
    pub kind: StabilizerKind,
    /// Members of `H`, increasing.
    pub elements: Vec<usize>,
    /// `table[m][i]` is the value of irreducible `m` on `elements[i]`.
    pub table: Vec<Vec<CyclotomicNumber>>,
}

impl SubgroupCharacters {
    /// For `C3`, the `m`-th character sends the lowest-index element of
    /// order 3 to `ω^m`.
    pub fn new(group: &GroupTable, elements: Vec<usize>, field: &Arc<CyclotomicField>) -> Self {
        let kind = StabilizerKind::from_order(elements.len()).unwrap_or_else(|| {
            panic!(
                "stabilizer of order {} is not a subgroup of S3",
                elements.len()
            )
        });
        let int = |k: i64| CyclotomicNumber::integer(field, k);
        let table = match kind {
            StabilizerKind::Trivial => vec![vec![int(1)]],
            StabilizerKind::C2 => vec![
                elements.iter().map(|_| int(1)).collect(),
                elements
                    .iter()
                    .map(|&g| int(if g == 0 { 1 } else { -1 }))
                    .collect(),
            ],
            StabilizerKind::C3 => {
                let gen = *elements
                    .iter()
                    .find(|&&g| group.element_order(g) == 3)
                    .expect("C3 has an element of order 3");
                let exponent = |g: usize| -> i64 {
                    if g == 0 {
                        0
                    } else if g == gen {
                        1
                    } else {
                        2
                    }
                };
                (0..3)
                    .map(|m| {
                        elements
                            .iter()
                            .map(|&g| CyclotomicNumber::omega(field, m * exponent(g)))
                            .collect()
                    })
                    .collect()
            }
            StabilizerKind::S3 => {
                let by_order = |values: [i64; 3]| {
                    elements
                        .iter()
                        .map(|&g| match group.element_order(g) {
                            1 => int(values[0]),
                            2 => int(values[1]),
                            _ => int(values[2]),
                        })
                        .collect()
                };
                vec![
                    by_order([1, 1, 1]),
                    by_order([1, -1, 1]),
                    by_order([2, 0, -1]),
                ]
            }
        };
        SubgroupCharacters {
            kind,
            elements,
            table,
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn value(&self, irrep: usize, g: usize) -> &CyclotomicNumber {
        let i = self
            .elements
            .iter()
            .position(|&h| h == g)
            .unwrap_or_else(|| panic!("element {g} is not in the stabilizer"));
        &self.table[irrep][i]
    }

    pub fn degree(&self, irrep: usize) -> u64 {
        self.kind.degrees()[irrep]
    }

    pub fn label(&self, irrep: usize) -> &'static str {
        self.kind.labels()[irrep]
    }

    /// `(1/|H|) Σ_h χ_a(h) conj(χ_b(h))`.
    pub fn inner_product(&self, a: usize, b: usize) -> Option<i64> {
        let mut s = CyclotomicNumber::zero(self.table[a][0].field());
        for i in 0..self.elements.len() {
            s += &(&self.table[a][i] * &self.table[b][i].conj());
        }
        let v = s.to_integer()?;
        (v % self.elements.len() as i64 == 0).then(|| v / self.elements.len() as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_table() -> GroupTable {
        // S3 acting on {0,1,2}: elements as permutations, in BFS order from
        // the 3-cycle and a transposition
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [1, 0, 2],
            [2, 0, 1],
            [2, 1, 0],
            [0, 2, 1],
        ];
        GroupTable::from_elements(&perms, |a, b| [a[b[0]], a[b[1]], a[b[2]]])
    }

    #[test]
    fn orthogonality_for_every_subgroup() {
        let g = s3_table();
        let field = CyclotomicField::for_root_order(2);
        let subgroups: Vec<Vec<usize>> = vec![
            vec![0],
            vec![0, 2],
            vec![0, 4],
            vec![0, 5],
            vec![0, 1, 3],
            (0..6).collect(),
        ];
        for h in subgroups {
            let chars = SubgroupCharacters::new(&g, h.clone(), &field);
            let squares: u64 = (0..chars.len()).map(|m| chars.degree(m).pow(2)).sum();
            assert_eq!(squares as usize, h.len());
            for a in 0..chars.len() {
                assert_eq!(chars.value(a, 0).to_integer(), Some(chars.degree(a) as i64));
                for b in 0..chars.len() {
                    assert_eq!(
                        chars.inner_product(a, b),
                        Some(i64::from(a == b)),
                        "{h:?} {a} {b}"
                    );
                }
            }
        }
    }
}

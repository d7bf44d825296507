//! Backtracking isomorphism search for small directed multigraphs whose edges
//! carry a label from `0..labels`.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMultigraph {
    n: usize,
    labels: usize,
    counts: Vec<u64>,
}

impl LabeledMultigraph {
    pub fn new(n: usize, labels: usize) -> Self {
        LabeledMultigraph {
            n,
            labels,
            counts: vec![0; n * n * labels],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn slot(&self, u: usize, v: usize, label: usize) -> usize {
        (u * self.n + v) * self.labels + label
    }

    pub fn add(&mut self, u: usize, v: usize, label: usize, k: u64) {
        let i = self.slot(u, v, label);
        self.counts[i] += k;
    }

    pub fn count(&self, u: usize, v: usize, label: usize) -> u64 {
        self.counts[self.slot(u, v, label)]
    }

    /// Per-label out-degree, in-degree and loop count; preserved by any
    /// isomorphism.
    fn signature(&self, u: usize) -> Vec<u64> {
        let mut sig = Vec::with_capacity(3 * self.labels);
        for l in 0..self.labels {
            sig.push((0..self.n).map(|v| self.count(u, v, l)).sum());
            sig.push((0..self.n).map(|v| self.count(v, u, l)).sum());
            sig.push(self.count(u, u, l));
        }
        sig
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        (0..self.labels).any(|l| self.count(u, v, l) > 0 || self.count(v, u, l) > 0)
    }
}

/// A bijection `map` with `a.count(u, v, l) = b.count(map[u], map[v], l)`
/// for all `u, v, l`, or `None` if there is none.
pub fn find_isomorphism(a: &LabeledMultigraph, b: &LabeledMultigraph) -> Option<Vec<usize>> {
    if a.n != b.n || a.labels != b.labels {
        return None;
    }
    let sig_a: Vec<_> = (0..a.n).map(|u| a.signature(u)).collect();
    let sig_b: Vec<_> = (0..b.n).map(|u| b.signature(u)).collect();
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return None;
    }
    let order = bfs_order(a);
    let mut map = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];
    let found = extend(a, b, &order, 0, &sig_a, &sig_b, &mut map, &mut used);
    found.then_some(map)
}

/// Visits vertices so that each one (after the first of its component) is
/// adjacent to an earlier one, which lets the consistency check prune early.
fn bfs_order(g: &LabeledMultigraph) -> Vec<usize> {
    let mut seen = vec![false; g.n];
    let mut order = Vec::with_capacity(g.n);
    for root in 0..g.n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for (v, seen_v) in seen.iter_mut().enumerate() {
                if !*seen_v && g.adjacent(u, v) {
                    *seen_v = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &LabeledMultigraph,
    b: &LabeledMultigraph,
    order: &[usize],
    depth: usize,
    sig_a: &[Vec<u64>],
    sig_b: &[Vec<u64>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    for cand in 0..b.n {
        if used[cand] || sig_a[u] != sig_b[cand] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&w| {
            let mw = map[w];
            (0..a.labels).all(|l| {
                a.count(u, w, l) == b.count(cand, mw, l) && a.count(w, u, l) == b.count(mw, cand, l)
            })
        });
        if !consistent {
            continue;
        }
        map[u] = cand;
        used[cand] = true;
        if extend(a, b, order, depth + 1, sig_a, sig_b, map, used) {
            return true;
        }
        used[cand] = false;
        map[u] = usize::MAX;
    }
    false
}

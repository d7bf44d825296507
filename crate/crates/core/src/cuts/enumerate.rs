use super::{validate_cut, Cut, CutError};
use crate::mckay_quiver::{elementary_cycles, TypedQuiver};

/// Largest arrow count `enumerate_cuts` accepts by default (`n ≤ 9`).
pub const DEFAULT_ARROW_LIMIT: usize = 27;

/// Every arrow set satisfying the weak-cut axioms, sorted lexicographically
/// by arrow ids.
///
/// Each elementary cycle must contain exactly one cut arrow, so the search is
/// an exact cover with cycles as items and arrows as options (every arrow
/// covers the two cycles it lies on). Branches whose uncut arrows already
/// contain a directed cycle are abandoned.
pub fn enumerate_cuts(q: &TypedQuiver, limit: usize) -> Result<Vec<Cut>, CutError> {
    if q.arrow_count() > limit {
        return Err(CutError::TooLarge {
            arrows: q.arrow_count(),
            limit,
        });
    }
    let cycles: Vec<[usize; 3]> = elementary_cycles(q).iter().map(|c| c.arrows(q)).collect();
    let mut arrow_cycles = vec![Vec::with_capacity(2); q.arrow_count()];
    for (c, arrows) in cycles.iter().enumerate() {
        for &a in arrows {
            arrow_cycles[a].push(c);
        }
    }
    let mut search = Search {
        q,
        cycles,
        arrow_cycles,
        covered: vec![false; 2 * q.vertex_count()],
        state: vec![State::Open; q.arrow_count()],
        uncut_adj: vec![Vec::new(); q.vertex_count()],
        found: Vec::new(),
    };
    search.run();
    let mut found = search.found;
    found.sort();
    Ok(found
        .into_iter()
        .map(Cut::new)
        .filter(|c| validate_cut(q, c).passed())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    Cut,
    Uncut,
}

struct Search<'a> {
    q: &'a TypedQuiver,
    cycles: Vec<[usize; 3]>,
    arrow_cycles: Vec<Vec<usize>>,
    covered: Vec<bool>,
    state: Vec<State>,
    uncut_adj: Vec<Vec<usize>>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self) {
        let next = (0..self.cycles.len())
            .filter(|&c| !self.covered[c])
            .min_by_key(|&c| self.open_arrows(c).count());
        let Some(cycle) = next else {
            let cut = (0..self.state.len())
                .filter(|&a| self.state[a] == State::Cut)
                .collect();
            self.found.push(cut);
            return;
        };
        let mut options: Vec<usize> = self.open_arrows(cycle).collect();
        options.sort_unstable();
        for a in options {
            let mut undo = Vec::new();
            if self.choose(a, &mut undo) {
                self.run();
            }
            self.rollback(undo);
        }
    }

    fn open_arrows(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.cycles[c]
            .into_iter()
            .filter(|&a| self.state[a] == State::Open)
    }

    /// Cuts `a`, marks the other arrows on its cycles uncut, and reports
    /// whether the uncut arrows are still acyclic.
    fn choose(&mut self, a: usize, undo: &mut Vec<Change>) -> bool {
        self.state[a] = State::Cut;
        undo.push(Change::Arrow(a));
        for ci in 0..self.arrow_cycles[a].len() {
            let c = self.arrow_cycles[a][ci];
            self.covered[c] = true;
            undo.push(Change::Cycle(c));
            let arrows = self.cycles[c];
            for b in arrows {
                if self.state[b] != State::Open {
                    continue;
                }
                self.state[b] = State::Uncut;
                undo.push(Change::Arrow(b));
                let arrow = self.q.arrow(b);
                let closes = self.reaches(arrow.target, arrow.source);
                self.uncut_adj[arrow.source].push(arrow.target);
                undo.push(Change::Edge(arrow.source));
                if closes {
                    return false;
                }
                // the other cycle through b now needs its cut elsewhere
                for &d in &self.arrow_cycles[b] {
                    if !self.covered[d] && self.open_arrows(d).next().is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.uncut_adj.len()];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            if std::mem::replace(&mut seen[u], true) {
                continue;
            }
            stack.extend(self.uncut_adj[u].iter().copied());
        }
        false
    }

    fn rollback(&mut self, undo: Vec<Change>) {
        for change in undo.into_iter().rev() {
            match change {
                Change::Arrow(a) => self.state[a] = State::Open,
                Change::Cycle(c) => self.covered[c] = false,
                Change::Edge(u) => {
                    self.uncut_adj[u].pop();
                }
            }
        }
    }
}

enum Change {
    Arrow(usize),
    Cycle(usize),
    Edge(usize),
}

//! Graph utilities shared by the concrete and parametric analyses.

use num_traits::Zero;

use crate::model::StateId;
use crate::rational::Rational;

/// Fixed-capacity bit set over state indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(Box<[u64]>);

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet(vec![0; n.div_ceil(64).max(1)].into_boxed_slice())
    }

    pub fn insert(&mut self, s: StateId) {
        self.0[s / 64] |= 1 << (s % 64);
    }

    pub fn with(&self, s: StateId) -> Self {
        let mut out = self.clone();
        out.insert(s);
        out
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.0[s / 64] & (1 << (s % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

/// Finds a cycle in the graph on `0..n` with successor lists `succ`.
/// Returns the states along the cycle, starting and ending at the same state.
pub fn find_cycle(n: usize, succ: &[Vec<StateId>]) -> Option<Vec<StateId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // iterative DFS: (state, next successor position)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Open;
        while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
            if let Some(&v) = succ[u].get(*pos) {
                *pos += 1;
                match mark[v] {
                    Mark::New => {
                        mark[v] = Mark::Open;
                        parent[v] = u;
                        stack.push((v, 0));
                    }
                    Mark::Open => {
                        let mut cycle = vec![v];
                        let mut x = u;
                        while x != v {
                            cycle.push(x);
                            x = parent[x];
                        }
                        cycle.push(v);
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[u] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

/// Minimum total weight over all cycles, by all-pairs shortest paths.
/// `None` when the graph is acyclic. Weights must be non-negative.
pub fn min_cycle_weight<'a, I>(n: usize, edges: I) -> Option<Rational>
where
    I: IntoIterator<Item = (StateId, &'a Rational, StateId)>,
{
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    for (u, w, v) in edges {
        let slot = &mut dist[u][v];
        if slot.as_ref().is_none_or(|cur| w < cur) {
            *slot = Some(w.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k].clone() else {
                continue;
            };
            let row_k = dist[k].clone();
            for (slot, kj) in dist[i].iter_mut().zip(&row_k) {
                if let Some(kj) = kj {
                    let via = &ik + kj;
                    if slot.as_ref().is_none_or(|cur| via < *cur) {
                        *slot = Some(via);
                    }
                }
            }
        }
    }
    (0..n).filter_map(|u| dist[u][u].clone()).min()
}

/// `⌈x⌉` for a non-negative rational, saturating at `usize::MAX`.
pub fn ceil_usize(x: &Rational) -> usize {
    use num_traits::ToPrimitive;
    if x.is_zero() {
        return 0;
    }
    x.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

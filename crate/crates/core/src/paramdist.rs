//! Distance from a concrete structure to a parametric one.
//!
//! The result is a table of [`Expr`] over the parameters of the right-hand
//! structure. Evaluating an entry under a valuation `v` gives the distance
//! to the structure instantiated with `v`.

use std::collections::{BTreeMap, HashSet};

use crate::distance::require_distance_domain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{ceil_usize, find_cycle, min_cycle_weight, StateSet};
use crate::model::{Model, StateId, Valuation};
use crate::paramexpr::{eval, reduce, Atom, Expr, LinExpr};
use crate::rational::{int, ExtRational, Rational};

use num_traits::Zero;

/// Checks that every cycle of `m` carries a positive concrete weight, so no
/// valuation can make it weightless. Returns the least concrete weight of a
/// cycle, or `None` for an acyclic structure.
pub fn strongly_cost_nonzeno(m: &Model) -> Result<Option<Rational>> {
    let n = m.num_states();
    let mut weightless = vec![Vec::new(); n];
    for t in m.transitions() {
        if t.weight.concrete().is_none_or(Zero::is_zero) {
            weightless[t.source].push(t.target);
        }
    }
    if let Some(cycle) = find_cycle(n, &weightless) {
        return Err(Error::NotNonZeno {
            cycle: cycle.into_iter().map(|s| m.name(s).to_owned()).collect(),
        });
    }
    let zero = Rational::zero();
    let edges = m
        .transitions()
        .iter()
        .map(|t| (t.source, t.weight.concrete().unwrap_or(&zero), t.target));
    Ok(min_cycle_weight(n, edges))
}

/// Length bound `⌈2·W / w_min⌉ · |S| + |S|` on match sequences in `rhs`,
/// with `W` the heaviest transition of `lhs`. `|S| - 1` when `rhs` is
/// acyclic.
pub fn param_sequence_bound(lhs: &Model, rhs: &Model) -> Result<usize> {
    require_distance_domain(lhs)?;
    let n = rhs.num_states();
    Ok(match strongly_cost_nonzeno(rhs)? {
        None => n.saturating_sub(1),
        Some(w_min) => {
            let factor = ceil_usize(&(int(2) * lhs.max_weight() / w_min));
            factor.saturating_mul(n).saturating_add(n)
        }
    })
}

/// Parametric match sequences from one state sharing an end state and an
/// intermediate set.
#[derive(Clone, Debug)]
pub struct PMatchGroup {
    pub end: StateId,
    pub intermediates: StateSet,
    pub accumulated: Vec<LinExpr>,
}

/// Parametric counterpart of [`crate::distance::MatchIndex`]. Accumulated
/// weights are linear expressions; a prefix that has revisited a state is
/// only extended while its concrete part stays below twice the heaviest
/// move.
#[derive(Clone, Debug)]
pub struct PMatchIndex {
    groups: Vec<Vec<PMatchGroup>>,
    bound: usize,
}

impl PMatchIndex {
    pub fn build(m: &Model, bound: usize, heaviest_move: &Rational, exec: Exec) -> Self {
        let cutoff = int(2) * heaviest_move;
        let groups = exec.map(m.num_states(), |t| Self::groups_from(m, t, bound, &cutoff));
        PMatchIndex { groups, bound }
    }

    fn groups_from(m: &Model, t: StateId, bound: usize, cutoff: &Rational) -> Vec<PMatchGroup> {
        let n = m.num_states();
        type Key = (LinExpr, StateId, StateSet);
        let mut seen: HashSet<Key> = HashSet::new();
        let start = (LinExpr::zero(), t, StateSet::empty(n));
        seen.insert(start.clone());
        let mut frontier = vec![(start.0, start.1, start.2, StateSet::empty(n).with(t))];
        for len in 0..bound {
            let mut next_frontier = Vec::new();
            for (acc, end, inter, visited) in &frontier {
                if visited.len() != len + 1 && acc.constant() >= cutoff {
                    continue;
                }
                let inter_next = if len == 0 {
                    inter.clone()
                } else {
                    inter.with(*end)
                };
                for tr in m.outgoing(*end) {
                    let key = (acc.plus_weight(&tr.weight), tr.target, inter_next.clone());
                    if seen.insert(key.clone()) {
                        next_frontier.push((key.0, key.1, key.2, visited.with(tr.target)));
                    }
                }
            }
            if next_frontier.is_empty() {
                break;
            }
            frontier = next_frontier;
        }
        let mut grouped: BTreeMap<(StateId, StateSet), Vec<LinExpr>> = BTreeMap::new();
        for (acc, end, inter) in seen {
            grouped.entry((end, inter)).or_default().push(acc);
        }
        grouped
            .into_iter()
            .map(|((end, intermediates), mut accumulated)| {
                accumulated.sort();
                PMatchGroup {
                    end,
                    intermediates,
                    accumulated,
                }
            })
            .collect()
    }

    pub fn groups(&self, t: StateId) -> &[PMatchGroup] {
        &self.groups[t]
    }

    pub fn bound(&self) -> usize {
        self.bound
    }
}

/// Expressions indexed by (left state, right state).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamDistanceTable {
    rows: usize,
    cols: usize,
    values: Vec<Expr>,
}

impl ParamDistanceTable {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ParamDistanceTable {
            rows,
            cols,
            values: vec![Expr::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, s: StateId, t: StateId) -> &Expr {
        &self.values[s * self.cols + t]
    }

    pub fn values(&self) -> &[Expr] {
        &self.values
    }

    /// Every entry evaluated under `v`.
    pub fn eval(&self, v: &Valuation) -> Result<Vec<Vec<ExtRational>>> {
        (0..self.rows)
            .map(|s| (0..self.cols).map(|t| eval(self.get(s, t), v)).collect())
            .collect()
    }
}

/// One application of the symbolic distance operator.
pub fn fe_step(
    lhs: &Model,
    rhs: &Model,
    d: &ParamDistanceTable,
    index: &PMatchIndex,
    exec: Exec,
) -> ParamDistanceTable {
    let (rows, cols) = (lhs.num_states(), rhs.num_states());
    let values = exec
        .map(rows, |s| {
            (0..cols)
                .map(|t| fe_entry(lhs, rhs, d, index, s, t))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
    ParamDistanceTable { rows, cols, values }
}

fn fe_entry(
    lhs: &Model,
    rhs: &Model,
    d: &ParamDistanceTable,
    index: &PMatchIndex,
    s: StateId,
    t: StateId,
) -> Expr {
    if lhs.labels(s) != rhs.labels(t) {
        return Expr::infinity();
    }
    let mut worst = Expr::zero();
    for mv in lhs.outgoing(s) {
        let w = mv.weight.concrete().expect("concrete left-hand model");
        let mut best: Option<Expr> = None;
        for g in index.groups(t) {
            let mut cost = d.get(mv.target, g.end).clone();
            for i in g.intermediates.iter() {
                cost = reduce(&cost.max_with(d.get(s, i)));
            }
            if cost == Expr::infinity() {
                continue;
            }
            let deviation = g
                .accumulated
                .iter()
                .map(|acc| Expr::atom(Atom::rel_diff(acc.clone(), w.clone())))
                .reduce(|a, b| a.min_with(&b))
                .expect("non-empty group");
            let option = reduce(&reduce(&deviation).max_with(&cost));
            best = Some(match best {
                None => option,
                Some(b) => reduce(&b.min_with(&option)),
            });
        }
        let best = best.unwrap_or_else(Expr::infinity);
        worst = reduce(&worst.max_with(&best));
        if worst == Expr::infinity() {
            break;
        }
    }
    worst
}

#[derive(Clone, Debug, Default)]
pub struct ParamOptions {
    /// Steps added to the proven sequence bound.
    pub extra_bound: usize,
    pub exec: Exec,
}

/// Converged symbolic distance table.
#[derive(Clone, Debug)]
pub struct ParamDistance {
    pub table: ParamDistanceTable,
    /// Operator applications performed, including the one that reproduced
    /// an earlier table.
    pub iterations: usize,
    pub bound: usize,
}

/// All iterates `d0, d1, ..., dk` where `dk` is the first table equal to an
/// earlier one.
pub fn param_iterates(
    lhs: &Model,
    rhs: &Model,
    opts: &ParamOptions,
) -> Result<Vec<ParamDistanceTable>> {
    let bound = param_sequence_bound(lhs, rhs)?.saturating_add(opts.extra_bound);
    let index = PMatchIndex::build(rhs, bound, &lhs.max_weight(), opts.exec);
    let mut seen: HashSet<ParamDistanceTable> = HashSet::new();
    let mut iterates = vec![ParamDistanceTable::zero(lhs.num_states(), rhs.num_states())];
    seen.insert(iterates[0].clone());
    loop {
        let next = fe_step(
            lhs,
            rhs,
            iterates.last().expect("non-empty"),
            &index,
            opts.exec,
        );
        let repeated = !seen.insert(next.clone());
        iterates.push(next);
        if repeated {
            return Ok(iterates);
        }
    }
}

pub fn compute_param_distance_with(
    lhs: &Model,
    rhs: &Model,
    opts: &ParamOptions,
) -> Result<ParamDistance> {
    let bound = param_sequence_bound(lhs, rhs)?.saturating_add(opts.extra_bound);
    let mut iterates = param_iterates(lhs, rhs, opts)?;
    let iterations = iterates.len() - 1;
    Ok(ParamDistance {
        table: iterates.pop().expect("non-empty"),
        iterations,
        bound,
    })
}

/// Symbolic distance from every state of `lhs` to every state of `rhs`.
pub fn compute_param_distance(lhs: &Model, rhs: &Model) -> Result<ParamDistance> {
    compute_param_distance_with(lhs, rhs, &ParamOptions::default())
}

/// The grid point where `e` is smallest, the first one on ties.
pub fn minimize_epsilon(e: &Expr, grid: &[Valuation]) -> Result<(Valuation, ExtRational)> {
    let mut best: Option<(&Valuation, ExtRational)> = None;
    for v in grid {
        let x = eval(e, v)?;
        if best.as_ref().is_none_or(|(_, b)| x < *b) {
            best = Some((v, x));
        }
    }
    best.map(|(v, x)| (v.clone(), x)).ok_or(Error::EmptyGrid)
}

/// Parameters of `e` that `v` leaves unassigned.
pub fn missing_params(e: &Expr, v: &Valuation) -> Vec<String> {
    e.params()
        .into_iter()
        .filter(|p| !v.contains_key(p))
        .collect()
}

/// Pointwise evaluation of a table against the concrete distances on the
/// union of `lhs` with `rhs` instantiated under `v`.
pub fn instantiated_distances(
    lhs: &Model,
    rhs: &Model,
    v: &Valuation,
) -> Result<Vec<Vec<ExtRational>>> {
    let inst = crate::model::instantiate(rhs, v)?;
    let union = crate::model::disjoint_union(lhs, &inst);
    let d = crate::distance::compute_distance(&union.model)?;
    Ok(union
        .left
        .iter()
        .map(|&s| union.right.iter().map(|&t| d.get(s, t).clone()).collect())
        .collect())
}

//! Weighted branching simulation distance on concrete structures.
//!
//! The distance `d(s, t)` is the least fixed point of the operator
//! [`f_step`], reached by Kleene iteration from the all-zero table. A move
//! `s -w-> s'` is answered by a match sequence `t -> t1 -> ... -> tn` whose
//! cost is the largest of the relative weight error `|acc/w - 1|`, the
//! distance `d(s', tn)` and every `d(s, ti)` with `i < n`.
//!
//! Match sequences are summarised once per model by a [`MatchIndex`]: only the
//! accumulated weight, the end state and the set of intermediate states
//! influence the cost, so sequences agreeing on all three are merged.

use std::collections::{HashMap, HashSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{ceil_usize, find_cycle, min_cycle_weight, StateSet};
use crate::model::{Model, StateId, Weight};
use crate::rational::{int, ExtRational, Rational};

/// Relative deviation `|acc/w - 1|`. A move of weight 0 is only matched
/// exactly: the result is 0 for `acc = 0` and infinite otherwise.
pub fn rel_diff(acc: &Rational, w: &Rational) -> ExtRational {
    if w.is_zero() {
        if acc.is_zero() {
            ExtRational::zero()
        } else {
            ExtRational::Infinity
        }
    } else {
        ExtRational::Finite((acc / w - int(1)).abs())
    }
}

fn concrete_successors(m: &Model, keep: impl Fn(&Rational) -> bool) -> Vec<Vec<StateId>> {
    let mut succ = vec![Vec::new(); m.num_states()];
    for t in m.transitions() {
        if let Weight::Concrete(w) = &t.weight {
            if keep(w) {
                succ[t.source].push(t.target);
            }
        }
    }
    succ
}

/// A cycle made only of weight-0 transitions, if one exists.
pub fn zero_cycle(m: &Model) -> Option<Vec<StateId>> {
    find_cycle(m.num_states(), &concrete_successors(m, Zero::is_zero))
}

pub fn zero_cycle_free(m: &Model) -> bool {
    zero_cycle(m).is_none()
}

/// Rejects parametric models and models with 0-cycles.
pub fn require_distance_domain(m: &Model) -> Result<()> {
    m.require_concrete()?;
    match zero_cycle(m) {
        Some(cycle) => Err(Error::ZeroCycle {
            cycle: cycle.into_iter().map(|s| m.name(s).to_owned()).collect(),
        }),
        None => Ok(()),
    }
}

/// Minimum accumulated weight over all cycles of `m`, or `None` when `m` is
/// acyclic.
pub fn cycle_min_weight(m: &Model) -> Result<Option<Rational>> {
    require_distance_domain(m)?;
    let edges = m
        .transitions()
        .iter()
        .filter_map(|t| t.weight.concrete().map(|w| (t.source, w, t.target)));
    Ok(min_cycle_weight(m.num_states(), edges))
}

/// Length bound `⌈2·W / w_min⌉ · |S|` on relevant match sequences, where `W`
/// is the weight of the heaviest move to be matched (the heaviest transition
/// of `m` when `move_weight` is `None`) and `w_min` the lightest cycle. An
/// acyclic model needs no more than `|S| - 1` steps.
pub fn sequence_bound(m: &Model, move_weight: Option<&Rational>) -> Result<usize> {
    let n = m.num_states();
    match cycle_min_weight(m)? {
        None => Ok(n.saturating_sub(1)),
        Some(w_min) => {
            let w_max = move_weight.cloned().unwrap_or_else(|| m.max_weight());
            let factor = ceil_usize(&(int(2) * w_max / w_min));
            Ok(factor.saturating_mul(n))
        }
    }
}

/// A concrete transition sequence starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchSequence {
    pub start: StateId,
    pub steps: Vec<(Rational, StateId)>,
    pub accumulated: Rational,
}

impl MatchSequence {
    pub fn end(&self) -> StateId {
        self.steps.last().map_or(self.start, |&(_, s)| s)
    }

    /// States strictly between the start and the end of the sequence.
    pub fn intermediates(&self) -> impl Iterator<Item = StateId> + '_ {
        let n = self.steps.len();
        self.steps[..n.saturating_sub(1)].iter().map(|&(_, s)| s)
    }
}

/// Every sequence from `t` with at most `bound` steps that never returns to
/// a state without gaining weight since the previous visit. The empty
/// sequence is always included.
pub fn enumerate_matches(m: &Model, t: StateId, bound: usize) -> Vec<MatchSequence> {
    fn go(
        m: &Model,
        bound: usize,
        path: &mut Vec<(Rational, StateId)>,
        start: StateId,
        visits: &mut Vec<(StateId, Rational)>,
        out: &mut Vec<MatchSequence>,
    ) {
        let (end, acc) = visits.last().cloned().expect("non-empty");
        out.push(MatchSequence {
            start,
            steps: path.clone(),
            accumulated: acc.clone(),
        });
        if path.len() == bound {
            return;
        }
        for tr in m.outgoing(end) {
            let Weight::Concrete(w) = &tr.weight else {
                continue;
            };
            let next = &acc + w;
            let zero_cycle = visits
                .iter()
                .rev()
                .find(|(s, _)| *s == tr.target)
                .is_some_and(|(_, a)| *a == next);
            if zero_cycle {
                continue;
            }
            path.push((w.clone(), tr.target));
            visits.push((tr.target, next));
            go(m, bound, path, start, visits, out);
            visits.pop();
            path.pop();
        }
    }
    let mut out = Vec::new();
    let mut visits = vec![(t, Rational::zero())];
    go(m, bound, &mut Vec::new(), t, &mut visits, &mut out);
    out
}

/// Match sequences from one state that share an end state and an
/// intermediate set, with the distinct accumulated weights they realise.
#[derive(Clone, Debug)]
pub struct MatchGroup {
    pub end: StateId,
    pub intermediates: StateSet,
    /// Sorted ascending, no duplicates.
    pub accumulated: Vec<Rational>,
}

impl MatchGroup {
    /// Smallest relative deviation from `w` among the realised weights.
    pub fn best_rel_diff(&self, w: &Rational) -> ExtRational {
        if w.is_zero() {
            return rel_diff(&self.accumulated[0], w);
        }
        let pos = self.accumulated.partition_point(|a| a < w);
        let lo = pos
            .checked_sub(1)
            .map(|i| rel_diff(&self.accumulated[i], w));
        let hi = self.accumulated.get(pos).map(|a| rel_diff(a, w));
        lo.into_iter().chain(hi).min().expect("non-empty group")
    }
}

/// Summaries of the match sequences of every state.
///
/// Sequences are explored breadth-first up to the length bound. Once a
/// sequence has revisited a state and accumulated at least twice the
/// heaviest move weight, extensions are dropped: removing the cycle yields a
/// sequence with a deviation no larger, the same end state and a subset of
/// the intermediate states.
#[derive(Clone, Debug)]
pub struct MatchIndex {
    groups: Vec<Vec<MatchGroup>>,
    bound: usize,
}

impl MatchIndex {
    pub fn build(m: &Model, bound: usize, heaviest_move: &Rational, exec: Exec) -> MatchIndex {
        let cutoff = int(2) * heaviest_move;
        let groups = exec.map(m.num_states(), |t| Self::groups_from(m, t, bound, &cutoff));
        MatchIndex { groups, bound }
    }

    fn groups_from(m: &Model, t: StateId, bound: usize, cutoff: &Rational) -> Vec<MatchGroup> {
        let n = m.num_states();
        type Key = (Rational, StateId, StateSet);
        let mut seen: HashSet<Key> = HashSet::new();
        let start = (Rational::zero(), t, StateSet::empty(n));
        seen.insert(start.clone());
        // (acc, end, intermediates, visited states)
        let mut frontier = vec![(start.0, start.1, start.2, StateSet::empty(n).with(t))];
        for len in 0..bound {
            let mut next_frontier = Vec::new();
            for (acc, end, inter, visited) in &frontier {
                let simple = visited.len() == len + 1;
                if !simple && acc >= cutoff {
                    continue;
                }
                let inter_next = if len == 0 {
                    inter.clone()
                } else {
                    inter.with(*end)
                };
                for tr in m.outgoing(*end) {
                    let Weight::Concrete(w) = &tr.weight else {
                        continue;
                    };
                    let key = (acc + w, tr.target, inter_next.clone());
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
        let mut grouped: HashMap<(StateId, StateSet), Vec<Rational>> = HashMap::new();
        for (acc, end, inter) in seen {
            grouped.entry((end, inter)).or_default().push(acc);
        }
        let mut groups: Vec<MatchGroup> = grouped
            .into_iter()
            .map(|((end, intermediates), mut accumulated)| {
                accumulated.sort();
                MatchGroup {
                    end,
                    intermediates,
                    accumulated,
                }
            })
            .collect();
        groups.sort_by(|a, b| (a.end, &a.intermediates).cmp(&(b.end, &b.intermediates)));
        groups
    }

    pub fn groups(&self, t: StateId) -> &[MatchGroup] {
        &self.groups[t]
    }

    pub fn bound(&self) -> usize {
        self.bound
    }
}

/// Square table of extended rationals indexed by pairs of states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    values: Vec<ExtRational>,
}

impl DistanceTable {
    pub fn zero(n: usize) -> Self {
        DistanceTable {
            n,
            values: vec![ExtRational::zero(); n * n],
        }
    }

    fn from_rows(n: usize, rows: Vec<Vec<ExtRational>>) -> Self {
        DistanceTable {
            n,
            values: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: StateId, t: StateId) -> &ExtRational {
        &self.values[s * self.n + t]
    }

    pub fn set(&mut self, s: StateId, t: StateId, v: ExtRational) {
        self.values[s * self.n + t] = v;
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &DistanceTable) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

/// One application of the distance operator.
pub fn f_step(m: &Model, d: &DistanceTable, index: &MatchIndex, exec: Exec) -> DistanceTable {
    let n = m.num_states();
    let rows = exec.map(n, |s| (0..n).map(|t| f_entry(m, d, index, s, t)).collect());
    DistanceTable::from_rows(n, rows)
}

fn f_entry(
    m: &Model,
    d: &DistanceTable,
    index: &MatchIndex,
    s: StateId,
    t: StateId,
) -> ExtRational {
    if !m.same_labels(s, t) {
        return ExtRational::Infinity;
    }
    let mut worst = ExtRational::zero();
    for mv in m.outgoing(s) {
        let w = mv.weight.concrete().expect("concrete model");
        let mut best = ExtRational::Infinity;
        for g in index.groups(t) {
            let mut cost = d.get(mv.target, g.end).clone();
            for i in g.intermediates.iter() {
                if cost >= best {
                    break;
                }
                cost = cost.max(d.get(s, i).clone());
            }
            if cost >= best {
                continue;
            }
            best = cost.max(g.best_rel_diff(w)).min(best);
            if best.is_zero() {
                break;
            }
        }
        worst = worst.max(best);
        if worst.is_infinite() {
            break;
        }
    }
    worst
}

#[derive(Clone, Debug, Default)]
pub struct DistanceOptions {
    /// Steps added to the proven sequence bound.
    pub extra_bound: usize,
    pub exec: Exec,
}

/// The match index used by [`compute_distance`] for the given options.
pub fn match_index(m: &Model, opts: &DistanceOptions) -> Result<MatchIndex> {
    let bound = sequence_bound(m, None)?.saturating_add(opts.extra_bound);
    Ok(MatchIndex::build(m, bound, &m.max_weight(), opts.exec))
}

/// All Kleene iterates `d0 = 0, d1, ..., dk` with `dk` the first repeated table.
pub fn kleene_iterates(m: &Model, opts: &DistanceOptions) -> Result<Vec<DistanceTable>> {
    require_distance_domain(m)?;
    let index = match_index(m, opts)?;
    let mut iterates = vec![DistanceTable::zero(m.num_states())];
    loop {
        let last = iterates.last().expect("non-empty");
        let next = f_step(m, last, &index, opts.exec);
        if &next == last {
            return Ok(iterates);
        }
        iterates.push(next);
    }
}

pub fn compute_distance_with(m: &Model, opts: &DistanceOptions) -> Result<DistanceTable> {
    require_distance_domain(m)?;
    let index = match_index(m, opts)?;
    let mut d = DistanceTable::zero(m.num_states());
    loop {
        let next = f_step(m, &d, &index, opts.exec);
        if next == d {
            return Ok(d);
        }
        d = next;
    }
}

/// Least fixed point of the distance operator.
pub fn compute_distance(m: &Model) -> Result<DistanceTable> {
    compute_distance_with(m, &DistanceOptions::default())
}

/// `d(s, t) ≤ eps`.
pub fn check_epsilon_sim(m: &Model, s: StateId, t: StateId, eps: &Rational) -> Result<bool> {
    Ok(compute_distance(m)?.get(s, t).le_rational(eps))
}

/// The largest weighted branching `eps`-simulation, computed by refining the
/// label-equivalence relation until every related pair can match every move.
/// Independent of [`compute_distance`]: matches are found by searching
/// `(state, accumulated weight)` pairs bounded by `w(1 + eps)`.
pub fn epsilon_simulation(m: &Model, eps: &Rational) -> Result<Vec<Vec<bool>>> {
    require_distance_domain(m)?;
    let n = m.num_states();
    let mut rel: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| m.same_labels(a, b)).collect())
        .collect();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if rel[a][b] && !every_move_matched(m, &rel, a, b, eps) {
                    rel[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(rel);
        }
    }
}

fn every_move_matched(
    m: &Model,
    rel: &[Vec<bool>],
    a: StateId,
    b: StateId,
    eps: &Rational,
) -> bool {
    m.outgoing(a).all(|mv| {
        let w = mv.weight.concrete().expect("concrete model");
        let lo = (w * (int(1) - eps)).max(Rational::zero());
        let hi = w * (int(1) + eps);
        let mut seen: HashSet<(StateId, Rational)> = HashSet::new();
        let mut stack = vec![(b, Rational::zero())];
        seen.insert((b, Rational::zero()));
        while let Some((x, acc)) = stack.pop() {
            if acc >= lo && rel[mv.target][x] {
                return true;
            }
            // x becomes an intermediate (or is b itself) when we move on
            if !rel[a][x] {
                continue;
            }
            for tr in m.outgoing(x) {
                let next = &acc + tr.weight.concrete().expect("concrete model");
                if next <= hi && seen.insert((tr.target, next.clone())) {
                    stack.push((tr.target, next));
                }
            }
        }
        false
    })
}

/// `s` is `eps`-simulated by `t`, decided without computing distances.
pub fn check_epsilon_sim_direct(m: &Model, s: StateId, t: StateId, eps: &Rational) -> Result<bool> {
    Ok(epsilon_simulation(m, eps)?[s][t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::SAMPLE;
    use crate::model::parse_model;
    use crate::rational::ratio;

    fn sample() -> Model {
        parse_model(SAMPLE).unwrap()
    }

    fn id(m: &Model, name: &str) -> StateId {
        m.state(name).unwrap()
    }

    /// Kleene iteration where the inner minimum ranges over every enumerated
    /// sequence up to `bound`, with no summarising or cutoff.
    fn brute_force_distance(m: &Model, bound: usize) -> DistanceTable {
        let n = m.num_states();
        let seqs: Vec<_> = m.states().map(|t| enumerate_matches(m, t, bound)).collect();
        let mut d = DistanceTable::zero(n);
        loop {
            let mut next = DistanceTable::zero(n);
            for s in 0..n {
                for (t, matches) in seqs.iter().enumerate() {
                    let v = if m.labels(s) != m.labels(t) {
                        ExtRational::Infinity
                    } else {
                        m.outgoing(s)
                            .map(|mv| {
                                let w = mv.weight.concrete().unwrap();
                                matches
                                    .iter()
                                    .map(|q| {
                                        let mut c = rel_diff(&q.accumulated, w);
                                        c = c.max(d.get(mv.target, q.end()).clone());
                                        for i in q.intermediates() {
                                            c = c.max(d.get(s, i).clone());
                                        }
                                        c
                                    })
                                    .min()
                                    .unwrap()
                            })
                            .max()
                            .unwrap_or_else(ExtRational::zero)
                    };
                    next.set(s, t, v);
                }
            }
            if next == d {
                return d;
            }
            d = next;
        }
    }

    #[test]
    fn rel_diff_cases() {
        assert_eq!(rel_diff(&int(1), &int(2)), ExtRational::Finite(ratio(1, 2)));
        assert_eq!(rel_diff(&int(3), &int(3)), ExtRational::zero());
        assert_eq!(rel_diff(&int(5), &int(0)), ExtRational::Infinity);
        assert_eq!(rel_diff(&int(0), &int(0)), ExtRational::zero());
        assert_eq!(rel_diff(&int(3), &int(2)), ExtRational::Finite(ratio(1, 2)));
    }

    #[test]
    fn zero_weight_move_has_no_finite_slack() {
        // acc = 5 against w = 0: the interval [0(1-e), 0(1+e)] = {0} never holds 5
        for e in [0, 1, 10, 1000] {
            let e = int(e);
            let hi = int(0) * (int(1) + &e);
            assert!(int(5) > hi);
        }
        assert!(rel_diff(&int(5), &int(0)).is_infinite());
    }

    #[test]
    fn zero_cycles() {
        assert!(zero_cycle_free(&sample()));
        let m = parse_model("states: a\ntrans a 0 a\n").unwrap();
        assert!(!zero_cycle_free(&m));
        let m = parse_model("states: a b c\ntrans a 0 b\ntrans b 0 c\n").unwrap();
        assert!(zero_cycle_free(&m));
        assert!(matches!(
            compute_distance(&parse_model("states: a b\ntrans a 0 b\ntrans b 0 a\n").unwrap()),
            Err(Error::ZeroCycle { .. })
        ));
    }

    /// Minimum over all simple cycles, by enumerating them from each start.
    fn brute_min_cycle(m: &Model) -> Option<Rational> {
        fn go(
            m: &Model,
            start: StateId,
            at: StateId,
            acc: Rational,
            on: &mut Vec<bool>,
            best: &mut Option<Rational>,
        ) {
            for tr in m.outgoing(at) {
                let w = tr.weight.concrete().unwrap();
                let acc = &acc + w;
                if tr.target == start {
                    if best.as_ref().is_none_or(|b| acc < *b) {
                        *best = Some(acc.clone());
                    }
                } else if !on[tr.target] {
                    on[tr.target] = true;
                    go(m, start, tr.target, acc, on, best);
                    on[tr.target] = false;
                }
            }
        }
        let mut best = None;
        for s in m.states() {
            let mut on = vec![false; m.num_states()];
            on[s] = true;
            go(m, s, s, Rational::zero(), &mut on, &mut best);
        }
        best
    }

    #[test]
    fn min_cycle_weights() {
        let right = parse_model(crate::fixtures::SAMPLE_RIGHT).unwrap();
        assert_eq!(cycle_min_weight(&right).unwrap(), Some(int(2)));
        let one = parse_model("states: a\ntrans a 3/2 a\n").unwrap();
        assert_eq!(cycle_min_weight(&one).unwrap(), Some(ratio(3, 2)));
        let nested =
            parse_model("states: a b c\ntrans a 2 b\ntrans b 3 a\ntrans b 1/6 c\ntrans c 1/6 b\n")
                .unwrap();
        let expected = brute_min_cycle(&nested);
        assert_eq!(expected, Some(ratio(1, 3)));
        assert_eq!(cycle_min_weight(&nested).unwrap(), expected);
        let acyclic = parse_model("states: a b\ntrans a 1 b\n").unwrap();
        assert_eq!(cycle_min_weight(&acyclic).unwrap(), None);
        assert_eq!(
            brute_min_cycle(&sample()),
            cycle_min_weight(&sample()).unwrap()
        );
    }

    #[test]
    fn bounds() {
        let m = sample();
        assert_eq!(sequence_bound(&m, Some(&int(2))).unwrap(), 16);
        let chain =
            parse_model("states: a b c d\ntrans a 1 b\ntrans b 1 c\ntrans c 1 d\n").unwrap();
        assert_eq!(sequence_bound(&chain, None).unwrap(), 3);
        let three = parse_model("states: a b c\ntrans a 5 b\ntrans b 2 b\ntrans b 1 c\n").unwrap();
        assert_eq!(sequence_bound(&three, None).unwrap(), 15);
    }

    #[test]
    fn three_state_bound_is_sufficient() {
        // Brute force with a much larger bound agrees with the proven one.
        let three = parse_model(
            "states: a b c\nlabel a x\nlabel b x\nlabel c y\n\
             trans a 5 c\ntrans b 2 b\ntrans b 1 c\n",
        )
        .unwrap();
        let n = sequence_bound(&three, None).unwrap();
        assert_eq!(
            brute_force_distance(&three, n),
            brute_force_distance(&three, n + 10)
        );
        assert_eq!(
            compute_distance(&three).unwrap(),
            brute_force_distance(&three, n)
        );
    }

    #[test]
    fn enumeration_on_sample() {
        let m = sample();
        let t2 = id(&m, "t2");
        let t1 = id(&m, "t1");
        let seqs = enumerate_matches(&m, t2, 3);
        assert!(seqs.iter().any(
            |q| q.steps == vec![(int(2), t2), (int(2), t2), (int(1), t1)]
                && q.accumulated == int(5)
        ));
        let dead = enumerate_matches(&m, t1, 10);
        assert_eq!(dead.len(), 1);
        assert!(dead[0].steps.is_empty() && dead[0].accumulated.is_zero());
    }

    #[test]
    fn enumeration_prunes_zero_loops() {
        let m = parse_model("states: a b\ntrans a 0 a\ntrans a 1 b\n").unwrap();
        let seqs = enumerate_matches(&m, 0, 5);
        for q in &seqs {
            assert!(!q
                .steps
                .windows(2)
                .any(|w| w[0] == (int(0), 0) && w[1] == (int(0), 0)));
        }
        // a -> a gains nothing, so only the empty sequence and a -> b remain
        assert_eq!(seqs.len(), 2);
        assert_eq!(seqs[1].steps, vec![(int(1), 1)]);
    }

    #[test]
    fn f_step_basics() {
        let m = sample();
        let idx = match_index(&m, &DistanceOptions::default()).unwrap();
        let zero = DistanceTable::zero(m.num_states());
        let d1 = f_step(&m, &zero, &idx, Exec::Sequential);
        assert_eq!(d1.get(id(&m, "s4"), id(&m, "t1")), &ExtRational::zero());
        assert_eq!(d1.get(id(&m, "s2"), id(&m, "t1")), &ExtRational::Infinity);
        assert!(zero.le(&d1));
    }

    #[test]
    fn sample_distances() {
        let m = sample();
        let d = compute_distance(&m).unwrap();
        let half = ExtRational::Finite(ratio(1, 2));
        assert_eq!(d.get(id(&m, "s"), id(&m, "t")), &half);
        assert_eq!(d.get(id(&m, "s2"), id(&m, "t2")), &ExtRational::zero());
        // {(s1,t2), (s2,t2), (s3,t1), (s4,t1)} is an exact simulation: every
        // move of s1 is matched with its own weight and s1 -3-> s4 passes
        // through t2 only as an intermediate.
        assert_eq!(d.get(id(&m, "s1"), id(&m, "t2")), &ExtRational::zero());
        assert!(check_epsilon_sim_direct(&m, id(&m, "s1"), id(&m, "t2"), &int(0)).unwrap());
        // s -1-> s1 from t2 only reaches a-labelled states with weight 0, 2, 4, ...
        assert_eq!(
            d.get(id(&m, "s"), id(&m, "t2")),
            &ExtRational::Finite(int(1))
        );
        for s in m.states() {
            assert!(d.get(s, s).is_zero());
        }
        let bound = sequence_bound(&m, None).unwrap();
        assert_eq!(d, brute_force_distance(&m, bound));
    }

    #[test]
    fn iterates_ascend() {
        let m = sample();
        let it = kleene_iterates(&m, &DistanceOptions::default()).unwrap();
        for w in it.windows(2) {
            assert!(w[0].le(&w[1]));
        }
        assert_eq!(it.last().unwrap(), &compute_distance(&m).unwrap());
    }

    #[test]
    fn sequential_matches_default() {
        let m = sample();
        let seq = compute_distance_with(
            &m,
            &DistanceOptions {
                exec: Exec::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, compute_distance(&m).unwrap());
    }

    #[test]
    fn simulation_verdicts() {
        let m = sample();
        let (s, t) = (id(&m, "s"), id(&m, "t"));
        for (eps, want) in [
            (ratio(1, 2), true),
            (int(0), false),
            (ratio(49, 100), false),
            (int(3), true),
        ] {
            assert_eq!(check_epsilon_sim(&m, s, t, &eps).unwrap(), want);
            assert_eq!(check_epsilon_sim_direct(&m, s, t, &eps).unwrap(), want);
        }
        assert!(!check_epsilon_sim(&m, t, s, &int(0)).unwrap());
        assert!(!check_epsilon_sim_direct(&m, t, s, &int(0)).unwrap());
        for x in m.states() {
            assert!(check_epsilon_sim_direct(&m, x, x, &int(0)).unwrap());
        }
    }

    #[test]
    fn not_a_hemimetric() {
        // d(a,c) > d(a,b) + d(b,c): relative errors compound multiplicatively.
        let m = parse_model(
            "states: a b c a1 b1 c1\nlabel a x\nlabel b x\nlabel c x\n\
             trans a 1 a1\ntrans b 2 b1\ntrans c 4 c1\n",
        )
        .unwrap();
        let d = compute_distance(&m).unwrap();
        let (a, b, c) = (0, 1, 2);
        assert_eq!(d.get(a, b), &ExtRational::Finite(int(1)));
        assert_eq!(d.get(b, c), &ExtRational::Finite(int(1)));
        assert_eq!(d.get(a, c), &ExtRational::Finite(int(3)));
    }
}

//! Seeded random instances shared by the acceptance suite and the benches.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wbsim::distance::zero_cycle_free;
use wbsim::logic::{Formula, Interval};
use wbsim::model::{Model, Valuation, Weight};
use wbsim::paramdist::strongly_cost_nonzeno;
use wbsim::paramexpr::{Atom, LinExpr, RawExpr};
use wbsim::rational::{int, ratio, Rational};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random structure.
#[derive(Clone, Debug)]
pub struct Shape {
    pub max_states: usize,
    /// Probability of an edge between an ordered pair of states.
    pub density: f64,
    /// Probability that a state carries `b` instead of `a`.
    pub b_label: f64,
    pub halves: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 6,
            density: 0.3,
            b_label: 0.3,
            halves: false,
        }
    }
}

fn concrete_weight(rng: &mut TestRng, halves: bool) -> Rational {
    if halves && rng.gen_bool(0.25) {
        ratio(rng.gen_range(1..=9), 2)
    } else {
        int(rng.gen_range(0..=5))
    }
}

fn skeleton(
    rng: &mut TestRng,
    prefix: &str,
    n: usize,
    shape: &Shape,
    params: &[&str],
) -> wbsim::model::ModelBuilder {
    let mut b = Model::builder();
    for p in params {
        b.param(p).unwrap();
    }
    for i in 0..n {
        let label = if rng.gen_bool(shape.b_label) {
            "b"
        } else {
            "a"
        };
        b.labeled(&format!("{prefix}{i}"), [label]).unwrap();
    }
    b
}

/// A concrete structure without 0-cycles.
pub fn random_wks(rng: &mut TestRng, shape: &Shape) -> Model {
    loop {
        let n = rng.gen_range(1..=shape.max_states);
        let mut b = skeleton(rng, "s", n, shape, &[]);
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(shape.density) {
                    b.edge(u, Weight::Concrete(concrete_weight(rng, shape.halves)), v)
                        .unwrap();
                }
            }
        }
        let m = b.build();
        if zero_cycle_free(&m) {
            return m;
        }
    }
}

/// A parametric structure over `p` and possibly `q` whose cycles all carry
/// positive concrete weight.
pub fn random_pwks(rng: &mut TestRng, max_states: usize) -> Model {
    let shape = Shape {
        max_states,
        ..Shape::default()
    };
    loop {
        let n = rng.gen_range(1..=max_states);
        let params: &[&str] = match rng.gen_range(0..3) {
            0 => &[],
            1 => &["p"],
            _ => &["p", "q"],
        };
        let mut b = skeleton(rng, "t", n, &shape, params);
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(shape.density) {
                    let w = if !params.is_empty() && rng.gen_bool(0.35) {
                        Weight::Param(params.choose(rng).unwrap().to_string())
                    } else {
                        Weight::Concrete(concrete_weight(rng, false))
                    };
                    b.edge(u, w, v).unwrap();
                }
            }
        }
        let m = b.build();
        if strongly_cost_nonzeno(&m).is_ok() {
            return m;
        }
    }
}

/// Values `n/d` with `n ∈ 0..=10`, `d ∈ 1..=3` for each parameter.
pub fn random_valuation(rng: &mut TestRng, params: &[String]) -> Valuation {
    params
        .iter()
        .map(|p| {
            (
                p.clone(),
                ratio(rng.gen_range(0..=10), rng.gen_range(1..=3)),
            )
        })
        .collect()
}

/// Every valuation of `p` and `q` over five sample points: 25 in total.
pub fn grid() -> Vec<Valuation> {
    let points = [int(0), ratio(1, 2), int(1), ratio(7, 5), int(4)];
    let mut out = Vec::new();
    for p in &points {
        for q in &points {
            out.push([("p".to_string(), p.clone()), ("q".to_string(), q.clone())].into());
        }
    }
    out
}

/// Accumulated weights of all paths with at most `len` steps.
pub fn realized_weights(m: &Model, len: usize) -> Vec<Rational> {
    let mut seen = BTreeSet::new();
    let mut frontier: Vec<(usize, Rational)> = m.states().map(|s| (s, int(0))).collect();
    for (_, w) in &frontier {
        seen.insert(w.clone());
    }
    for _ in 0..len {
        let mut next = Vec::new();
        for (s, acc) in &frontier {
            for tr in m.outgoing(*s) {
                let w = acc + tr.weight.concrete().unwrap();
                seen.insert(w.clone());
                next.push((tr.target, w));
            }
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    seen.into_iter().collect()
}

/// A random formula of depth at most `depth` over `a` and `b`, with
/// interval bounds drawn from `weights`.
pub fn random_formula(rng: &mut TestRng, depth: usize, weights: &[Rational]) -> Formula {
    let prop = if rng.gen_bool(0.5) { "a" } else { "b" };
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.3) {
            Formula::neg(prop)
        } else {
            Formula::prop(prop)
        };
    }
    let l = random_formula(rng, depth - 1, weights);
    let r = random_formula(rng, depth - 1, weights);
    match rng.gen_range(0..4) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        _ => {
            let x = weights.choose(rng).unwrap().clone();
            let y = weights.choose(rng).unwrap().clone();
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            Formula::until(l, Interval::new(lo, hi).unwrap(), r)
        }
    }
}

/// A relative deviation atom over `p` and `q`.
pub fn random_rel_diff(rng: &mut TestRng) -> Atom {
    let mut v = LinExpr::constant_only(ratio(rng.gen_range(0..=12), rng.gen_range(1..=2)));
    for p in ["p", "q"] {
        if rng.gen_bool(0.5) {
            v = v.plus(&LinExpr::term(rng.gen_range(1..=3), p));
        }
    }
    let w = [int(1), int(2), int(3), int(5)]
        .choose(rng)
        .unwrap()
        .clone();
    Atom::rel_diff(v, w)
}

pub fn random_atom(rng: &mut TestRng) -> Atom {
    match rng.gen_range(0..10) {
        0 => Atom::Zero,
        1 => Atom::Infinity,
        _ => random_rel_diff(rng),
    }
}

/// A relative deviation atom that dominates `x` under the syntactic order
/// more often than chance: same denominator, coefficients and constant
/// nudged upwards.
pub fn nudged(rng: &mut TestRng, x: &Atom) -> Atom {
    match x {
        Atom::RelDiff { den, num } => {
            let mut v = LinExpr::constant_only(num.constant() + ratio(rng.gen_range(0..=2), 2));
            for (p, a) in num.coeffs() {
                v = v.plus(&LinExpr::term(a + rng.gen_range(0..=1), p));
            }
            if rng.gen_bool(0.3) {
                v = v.plus(&LinExpr::term(1, "q"));
            }
            Atom::rel_diff(v, den.clone())
        }
        _ => random_atom(rng),
    }
}

/// An arbitrary MIN/MAX tree of the given depth.
pub fn random_raw(rng: &mut TestRng, depth: usize) -> RawExpr {
    if depth == 0 || rng.gen_bool(0.2) {
        return RawExpr::Atom(random_atom(rng));
    }
    let kids = (0..rng.gen_range(1..=3))
        .map(|_| random_raw(rng, depth - 1))
        .collect();
    if rng.gen_bool(0.5) {
        RawExpr::Min(kids)
    } else {
        RawExpr::Max(kids)
    }
}

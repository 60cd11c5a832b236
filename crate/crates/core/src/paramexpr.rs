//! Symbolic distance expressions.
//!
//! An [`Expr`] is a MIN over clauses, each clause a MAX over atoms. Atoms are
//! `0`, `∞` and relative deviations `|v/w - 1|` where `v` is a [`LinExpr`]
//! `Σ aᵢ·pᵢ + b` with natural coefficients. Clauses and atoms are kept in
//! ordered sets, so duplicate elimination and element order never matter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Valuation, Weight};
use crate::rational::{int, parse_nonneg, ExtRational, Rational};
use crate::sexpr::{self, SExpr};

/// `Σ aᵢ·pᵢ + b` with `aᵢ ∈ ℕ` and `b ≥ 0`. Zero coefficients are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinExpr {
    coeffs: BTreeMap<String, u64>,
    constant: Rational,
}

impl LinExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant_only(b: Rational) -> Self {
        debug_assert!(!b.is_negative());
        LinExpr {
            coeffs: BTreeMap::new(),
            constant: b,
        }
    }

    pub fn param(p: &str) -> Self {
        Self::term(1, p)
    }

    pub fn term(a: u64, p: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        if a > 0 {
            coeffs.insert(p.to_owned(), a);
        }
        LinExpr {
            coeffs,
            constant: Rational::zero(),
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<String, u64> {
        &self.coeffs
    }

    pub fn coeff(&self, p: &str) -> u64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    /// `self + weight` for a transition weight.
    pub fn plus_weight(&self, w: &Weight) -> LinExpr {
        let mut out = self.clone();
        match w {
            Weight::Concrete(r) => out.constant += r,
            Weight::Param(p) => *out.coeffs.entry(p.clone()).or_insert(0) += 1,
        }
        out
    }

    pub fn plus(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (p, a) in &other.coeffs {
            *out.coeffs.entry(p.clone()).or_insert(0) += a;
        }
        out
    }

    pub fn eval(&self, v: &Valuation) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (p, &a) in &self.coeffs {
            let x = v.get(p).ok_or_else(|| Error::MissingParam(p.clone()))?;
            acc += x * Rational::from_integer(a.into());
        }
        Ok(acc)
    }

    /// Pointwise `aᵢ ≤ aᵢ'` over the union of parameters.
    fn coeffs_le(&self, other: &LinExpr) -> bool {
        self.coeffs.iter().all(|(p, &a)| a <= other.coeff(p))
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "{}", self.constant);
        }
        f.write_str("(+")?;
        for (p, a) in &self.coeffs {
            write!(f, " (* {a} {p})")?;
        }
        write!(f, " {})", self.constant)
    }
}

/// Basic element of an expression.
///
/// The derived order is the canonical one: `Zero < RelDiff < Infinity`,
/// relative deviations ordered by denominator, then coefficients, then
/// constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Zero,
    /// `|num/den - 1|`. A zero denominator only occurs with a parametric
    /// numerator without constant; it denotes 0 when the numerator vanishes
    /// and `∞` otherwise.
    RelDiff {
        den: Rational,
        num: LinExpr,
    },
    Infinity,
}

impl Atom {
    /// Builds `|num/den - 1|`, folding the cases with `den = 0` that do not
    /// depend on the valuation.
    pub fn rel_diff(num: LinExpr, den: Rational) -> Atom {
        if den.is_zero() {
            if num.is_zero() {
                return Atom::Zero;
            }
            if num.constant().is_positive() {
                return Atom::Infinity;
            }
        }
        Atom::RelDiff { den, num }
    }

    pub fn eval(&self, v: &Valuation) -> Result<ExtRational> {
        Ok(match self {
            Atom::Zero => ExtRational::zero(),
            Atom::Infinity => ExtRational::Infinity,
            Atom::RelDiff { den, num } => crate::distance::rel_diff(&num.eval(v)?, den),
        })
    }

    pub fn params(&self) -> impl Iterator<Item = &String> {
        match self {
            Atom::RelDiff { num, .. } => Some(num.coeffs.keys()),
            _ => None,
        }
        .into_iter()
        .flatten()
    }

    /// Parameter-free deviations are replaced by an equal-valued canonical
    /// atom `|(1 + q)/1 - 1|`, or `Zero` when the value is 0.
    fn fold_constant(self) -> Atom {
        match self {
            Atom::RelDiff { den, num } if num.is_constant() && den.is_positive() => {
                let q = (num.constant() / &den - int(1)).abs();
                if q.is_zero() {
                    Atom::Zero
                } else {
                    Atom::RelDiff {
                        den: int(1),
                        num: LinExpr::constant_only(int(1) + q),
                    }
                }
            }
            a => a,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Zero => f.write_str("zero"),
            Atom::Infinity => f.write_str("inf"),
            Atom::RelDiff { den, num } => write!(f, "(reldiff {num} {den})"),
        }
    }
}

/// A MAX over a non-empty set of atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause(BTreeSet<Atom>);

impl Clause {
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        let set: BTreeSet<Atom> = atoms.into_iter().collect();
        assert!(!set.is_empty(), "a clause needs at least one atom");
        Clause(set)
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    fn union(&self, other: &Clause) -> Clause {
        Clause(self.0.union(&other.0).cloned().collect())
    }

    pub fn eval(&self, v: &Valuation) -> Result<ExtRational> {
        let mut best = ExtRational::zero();
        for a in &self.0 {
            best = best.max(a.eval(v)?);
        }
        Ok(best)
    }
}

/// MIN over a non-empty set of [`Clause`]s.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(BTreeSet<Clause>);

impl Expr {
    pub fn new<I: IntoIterator<Item = Clause>>(clauses: I) -> Self {
        let set: BTreeSet<Clause> = clauses.into_iter().collect();
        assert!(!set.is_empty(), "an expression needs at least one clause");
        Expr(set)
    }

    pub fn atom(a: Atom) -> Self {
        Expr::new([Clause::new([a])])
    }

    pub fn zero() -> Self {
        Expr::atom(Atom::Zero)
    }

    pub fn infinity() -> Self {
        Expr::atom(Atom::Infinity)
    }

    pub fn clauses(&self) -> &BTreeSet<Clause> {
        &self.0
    }

    /// `MIN{self, other}`: the union of both clause sets.
    pub fn min_with(&self, other: &Expr) -> Expr {
        Expr(self.0.union(&other.0).cloned().collect())
    }

    /// `MAX{self, other}` distributed back into normal form.
    pub fn max_with(&self, other: &Expr) -> Expr {
        let mut out = BTreeSet::new();
        for a in &self.0 {
            for b in &other.0 {
                out.insert(a.union(b));
            }
        }
        Expr(out)
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.0
            .iter()
            .flat_map(|c| c.0.iter().flat_map(Atom::params))
            .cloned()
            .collect()
    }

    pub fn atom_count(&self) -> usize {
        self.0.iter().map(|c| c.0.len()).sum()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(min")?;
        for c in &self.0 {
            f.write_str(" (max")?;
            for a in &c.0 {
                write!(f, " {a}")?;
            }
            f.write_str(")")?;
        }
        f.write_str(")")
    }
}

/// Arbitrarily nested MIN/MAX tree, as read from text or built by hand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawExpr {
    Atom(Atom),
    Min(Vec<RawExpr>),
    Max(Vec<RawExpr>),
}

impl RawExpr {
    /// Direct evaluation without normalising. MAX of nothing is 0, MIN of
    /// nothing is `∞`.
    pub fn eval(&self, v: &Valuation) -> Result<ExtRational> {
        match self {
            RawExpr::Atom(a) => a.eval(v),
            RawExpr::Min(xs) => xs
                .iter()
                .try_fold(ExtRational::Infinity, |acc, x| Ok(acc.min(x.eval(v)?))),
            RawExpr::Max(xs) => xs
                .iter()
                .try_fold(ExtRational::zero(), |acc, x| Ok(acc.max(x.eval(v)?))),
        }
    }
}

/// MIN-of-MAX normal form of a raw tree, by distributing MAX over MIN.
pub fn normalize(raw: &RawExpr) -> Expr {
    match raw {
        RawExpr::Atom(a) => Expr::atom(a.clone()),
        RawExpr::Min(xs) => xs
            .iter()
            .map(normalize)
            .reduce(|a, b| a.min_with(&b))
            .unwrap_or_else(Expr::infinity),
        RawExpr::Max(xs) => xs
            .iter()
            .map(normalize)
            .reduce(|a, b| a.max_with(&b))
            .unwrap_or_else(Expr::zero),
    }
}

/// Value of `e` under `v`: atoms exactly, clauses by max, the whole by min.
pub fn eval(e: &Expr, v: &Valuation) -> Result<ExtRational> {
    let mut best = ExtRational::Infinity;
    for c in &e.0 {
        best = best.min(c.eval(v)?);
    }
    Ok(best)
}

/// Syntactic ordering on atoms. Deviations are only compared under the same
/// denominator: monotonically in all coefficients when both constants reach
/// the denominator, by equality otherwise.
pub fn atom_leq(x: &Atom, y: &Atom) -> bool {
    match (x, y) {
        (_, Atom::Infinity) | (Atom::Zero, _) => true,
        (Atom::Infinity, _) | (_, Atom::Zero) => false,
        (Atom::RelDiff { den: w, num: v }, Atom::RelDiff { den: w2, num: v2 }) => {
            if w != w2 {
                return false;
            }
            let above = |b: &Rational| w.is_positive() && b >= w;
            if above(&v.constant) && above(&v2.constant) {
                v.coeffs_le(v2) && v.constant <= v2.constant
            } else {
                v == v2
            }
        }
    }
}

/// MAX rule: every atom of `x` is dominated by some atom of `y`.
pub fn clause_leq(x: &Clause, y: &Clause) -> bool {
    x.0.iter().all(|a| y.0.iter().any(|b| atom_leq(a, b)))
}

/// MIN rule: every clause of `y` dominates some clause of `x`.
pub fn expr_leq(x: &Expr, y: &Expr) -> bool {
    y.0.iter().all(|cy| x.0.iter().any(|cx| clause_leq(cx, cy)))
}

fn shadow_infinity(c: &Clause) -> Clause {
    if c.0.contains(&Atom::Infinity) {
        Clause::new([Atom::Infinity])
    } else {
        c.clone()
    }
}

/// Drops every clause that strictly contains another clause.
fn absorb_supersets(clauses: BTreeSet<Clause>) -> BTreeSet<Clause> {
    let mut by_size: Vec<&Clause> = clauses.iter().collect();
    by_size.sort_by_key(|c| c.0.len());
    let mut kept: Vec<&Clause> = Vec::new();
    for c in by_size {
        if !kept
            .iter()
            .any(|k| k.0.len() < c.0.len() && k.0.is_subset(&c.0))
        {
            kept.push(c);
        }
    }
    kept.into_iter().cloned().collect()
}

/// Canonical representative for syntactic equivalence: sorted, duplicate
/// free, `∞`-shadowed clauses collapsed to `{∞}`, and clauses that are
/// supersets of other clauses removed.
pub fn canonicalize(x: &Expr) -> Expr {
    Expr(absorb_supersets(x.0.iter().map(shadow_infinity).collect()))
}

pub fn expr_equiv(x: &Expr, y: &Expr) -> bool {
    canonicalize(x) == canonicalize(y)
}

/// Value-preserving clean-up: [`canonicalize`] plus removal of `Zero` from
/// clauses that have other atoms.
pub fn simplify(x: &Expr) -> Expr {
    let clauses =
        x.0.iter()
            .map(|c| {
                let c = shadow_infinity(c);
                if c.0.len() > 1 && c.0.contains(&Atom::Zero) {
                    Clause(c.0.iter().filter(|a| **a != Atom::Zero).cloned().collect())
                } else {
                    c
                }
            })
            .collect();
    Expr(absorb_supersets(clauses))
}

/// Value-preserving reduction by the syntactic ordering, used to keep the
/// parametric fixed point iteration small:
///
/// * parameter-free deviations are folded to an equal-valued canonical atom,
/// * inside a clause, atoms dominated by another atom are dropped (MAX is
///   unchanged),
/// * clauses dominating another clause are dropped (MIN is unchanged).
///
/// Atom domination is antisymmetric, so after the first two steps no two
/// distinct clauses dominate each other and the result does not depend on
/// the order of removal.
pub fn reduce(x: &Expr) -> Expr {
    let clauses: BTreeSet<Clause> =
        x.0.iter()
            .map(|c| reduce_clause(c.0.iter().cloned().map(Atom::fold_constant).collect()))
            .collect();
    Expr(prune_dominated(clauses))
}

fn reduce_clause(atoms: Vec<Atom>) -> Clause {
    if atoms.contains(&Atom::Infinity) {
        return Clause::new([Atom::Infinity]);
    }
    let set: BTreeSet<Atom> = atoms.into_iter().collect();
    let kept: BTreeSet<Atom> = set
        .iter()
        .filter(|a| !set.iter().any(|b| b != *a && atom_leq(a, b)))
        .cloned()
        .collect();
    Clause(kept)
}

fn prune_dominated(clauses: BTreeSet<Clause>) -> BTreeSet<Clause> {
    // Smaller clauses first: they are the likely dominators.
    let mut order: Vec<Clause> = clauses.into_iter().collect();
    order.sort_by_key(|c| c.0.len());
    let mut kept: Vec<Clause> = Vec::with_capacity(order.len());
    for c in order {
        if kept.iter().any(|k| clause_leq(k, &c)) {
            continue;
        }
        kept.retain(|k| !clause_leq(&c, k));
        kept.push(c);
    }
    kept.into_iter().collect()
}

fn expr_err(msg: impl Into<String>) -> Error {
    Error::Expr(msg.into())
}

fn parse_rat(e: &SExpr) -> Result<Rational> {
    match e {
        SExpr::Atom(tok) => {
            parse_nonneg(tok).ok_or_else(|| expr_err(format!("expected a rational, found `{tok}`")))
        }
        _ => match e.as_call() {
            Some(("/", [n, d])) => {
                let (n, d) = (parse_rat(n)?, parse_rat(d)?);
                if d.is_zero() {
                    return Err(expr_err("division by zero"));
                }
                Ok(n / d)
            }
            _ => Err(expr_err(format!("expected a rational, found `{e}`"))),
        },
    }
}

fn is_param(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

fn parse_nat(e: &SExpr) -> Result<u64> {
    let r = parse_rat(e)?;
    if !r.is_integer() {
        return Err(expr_err(format!(
            "coefficient `{e}` is not a natural number"
        )));
    }
    r.to_integer()
        .to_u64()
        .ok_or_else(|| expr_err(format!("coefficient `{e}` out of range")))
}

fn parse_lin(e: &SExpr) -> Result<LinExpr> {
    if let SExpr::Atom(tok) = e {
        if is_param(tok) {
            return Ok(LinExpr::param(tok));
        }
    }
    match e.as_call() {
        Some(("+", args)) => args
            .iter()
            .try_fold(LinExpr::zero(), |acc, a| Ok(acc.plus(&parse_lin(a)?))),
        Some(("*", [a, b])) => {
            let (coef, p) = match (a.as_atom(), b.as_atom()) {
                (_, Some(p)) if is_param(p) => (a, p),
                (Some(p), _) if is_param(p) => (b, p),
                _ => return Err(expr_err(format!("expected `(* n p)`, found `{e}`"))),
            };
            Ok(LinExpr::term(parse_nat(coef)?, p))
        }
        _ => parse_rat(e).map(LinExpr::constant_only),
    }
}

fn raw_from_sexpr(e: &SExpr) -> Result<RawExpr> {
    match e {
        SExpr::Atom(tok) => match tok.as_str() {
            "zero" => Ok(RawExpr::Atom(Atom::Zero)),
            "inf" => Ok(RawExpr::Atom(Atom::Infinity)),
            _ => Err(expr_err(format!("unexpected token `{tok}`"))),
        },
        SExpr::List(_) => match e.as_call() {
            Some(("reldiff", [v, w])) => {
                Ok(RawExpr::Atom(Atom::rel_diff(parse_lin(v)?, parse_rat(w)?)))
            }
            Some(("min", args)) if !args.is_empty() => Ok(RawExpr::Min(
                args.iter().map(raw_from_sexpr).collect::<Result<_>>()?,
            )),
            Some(("max", args)) if !args.is_empty() => Ok(RawExpr::Max(
                args.iter().map(raw_from_sexpr).collect::<Result<_>>()?,
            )),
            _ => Err(expr_err(format!("malformed expression `{e}`"))),
        },
    }
}

/// Reads an arbitrarily nested MIN/MAX tree.
pub fn parse_raw(text: &str) -> Result<RawExpr> {
    raw_from_sexpr(&sexpr::parse_one(text).map_err(expr_err)?)
}

/// Reads an expression and brings it into normal form.
pub fn parse_expr(text: &str) -> Result<Expr> {
    parse_raw(text).map(|r| normalize(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn rd(a: u64, b: i64, w: i64) -> Atom {
        let mut v = LinExpr::term(a, "p");
        v.constant = int(b);
        Atom::rel_diff(v, int(w))
    }

    fn val(p: Rational) -> Valuation {
        [("p".to_string(), p)].into()
    }

    fn grid() -> Vec<Valuation> {
        (0..=40).map(|i| val(ratio(i, 4))).collect()
    }

    #[test]
    fn sample_param_expression_values() {
        let e = parse_expr(crate::fixtures::SAMPLE_PARAM_EXPR).unwrap();
        assert_eq!(
            eval(&e, &val(int(1))).unwrap(),
            ExtRational::Finite(ratio(1, 2))
        );
        assert_eq!(eval(&e, &val(int(0))).unwrap(), ExtRational::Finite(int(1)));
        assert_eq!(eval(&e, &val(int(2))).unwrap(), ExtRational::Finite(int(1)));
        assert_eq!(
            eval(&Expr::zero(), &val(int(7))).unwrap(),
            ExtRational::zero()
        );
        assert_eq!(
            eval(&e, &Valuation::new()),
            Err(Error::MissingParam("p".into()))
        );
    }

    #[test]
    fn normalize_distributes() {
        let (a, b, c) = (rd(1, 0, 1), rd(1, 2, 5), rd(2, 0, 3));
        let raw = RawExpr::Max(vec![
            RawExpr::Min(vec![RawExpr::Atom(a.clone()), RawExpr::Atom(b.clone())]),
            RawExpr::Atom(c.clone()),
        ]);
        let want = Expr::new([
            Clause::new([a.clone(), c.clone()]),
            Clause::new([b.clone(), c.clone()]),
        ]);
        assert_eq!(normalize(&raw), want);
        assert_eq!(normalize(&RawExpr::Atom(a.clone())), Expr::atom(a.clone()));
        let shadowed = normalize(&RawExpr::Min(vec![RawExpr::Max(vec![
            RawExpr::Atom(a.clone()),
            RawExpr::Atom(Atom::Infinity),
        ])]));
        assert_eq!(simplify(&shadowed), Expr::infinity());
        for v in grid() {
            assert_eq!(eval(&normalize(&raw), &v).unwrap(), raw.eval(&v).unwrap());
            assert_eq!(eval(&shadowed, &v).unwrap(), ExtRational::Infinity);
        }
    }

    #[test]
    fn atom_ordering_examples() {
        // b/w < 1 on the left: only equal atoms compare
        assert!(!atom_leq(&rd(1, 2, 5), &rd(1, 4, 5)));
        assert!(!atom_leq(&rd(1, 4, 5), &rd(1, 2, 5)));
        let grid = grid();
        let vals = |a: &Atom| grid.iter().map(|v| a.eval(v).unwrap()).collect::<Vec<_>>();
        let (l, r) = (vals(&rd(1, 2, 5)), vals(&rd(1, 4, 5)));
        assert!(l.iter().zip(&r).any(|(x, y)| x < y));
        assert!(l.iter().zip(&r).any(|(x, y)| x > y));

        assert!(atom_leq(&rd(2, 6, 5), &rd(3, 7, 5)));
        for v in &grid {
            assert!(rd(2, 6, 5).eval(v).unwrap() <= rd(3, 7, 5).eval(v).unwrap());
        }
        for a in [Atom::Zero, Atom::Infinity, rd(4, 1, 2)] {
            assert!(atom_leq(&a, &Atom::Infinity));
            assert!(atom_leq(&Atom::Zero, &a));
        }
        assert!(!atom_leq(&Atom::Infinity, &rd(1, 0, 1)));
        assert!(!atom_leq(&rd(1, 0, 1), &rd(1, 0, 2)));
    }

    #[test]
    fn expression_ordering() {
        let e = parse_expr(crate::fixtures::SAMPLE_PARAM_EXPR).unwrap();
        assert!(expr_leq(&e, &e));
        assert!(expr_leq(&Expr::zero(), &e));
        assert!(expr_leq(&e, &Expr::infinity()));
        assert!(!expr_leq(&Expr::infinity(), &e));
    }

    #[test]
    fn equivalence_is_set_based() {
        let (e1, e2) = (rd(1, 0, 1), rd(1, 2, 5));
        let dup = Expr::new([Clause::new([e1.clone(), e2.clone(), e2.clone()])]);
        let plain = Expr::new([Clause::new([e1.clone(), e2.clone()])]);
        let swapped = Expr::new([Clause::new([e2.clone(), e1.clone()])]);
        assert!(expr_equiv(&dup, &plain));
        assert!(expr_equiv(&plain, &swapped));
        assert!(!expr_equiv(
            &Expr::atom(Atom::rel_diff(LinExpr::param("p"), int(1))),
            &Expr::atom(Atom::rel_diff(LinExpr::param("p"), int(2)))
        ));
        let absorbed = Expr::new([
            Clause::new([e1.clone()]),
            Clause::new([e1.clone(), e2.clone()]),
        ]);
        assert_eq!(canonicalize(&absorbed), Expr::atom(e1.clone()));
    }

    #[test]
    fn simplify_rules() {
        let (e1, e2) = (rd(1, 0, 1), rd(1, 2, 5));
        let twice = Expr::new([
            Clause::new([e1.clone(), e2.clone()]),
            Clause::new([e2.clone(), e1.clone()]),
        ]);
        assert_eq!(twice.clauses().len(), 1);
        assert_eq!(
            simplify(&Expr::new([Clause::new([Atom::Infinity, e1.clone()])])),
            Expr::infinity()
        );
        assert_eq!(
            simplify(&Expr::new([Clause::new([Atom::Zero, e1.clone()])])),
            Expr::atom(e1.clone())
        );
        let s = simplify(&twice);
        assert_eq!(simplify(&s), s);
    }

    #[test]
    fn reduce_folds_and_prunes() {
        // |3/2 - 1| and |1/2 - 1| are both 1/2, |2/2 - 1| is 0
        let a = Atom::rel_diff(LinExpr::constant_only(int(3)), int(2));
        let b = Atom::rel_diff(LinExpr::constant_only(int(1)), int(2));
        let z = Atom::rel_diff(LinExpr::constant_only(int(2)), int(2));
        assert_eq!(reduce(&Expr::atom(a.clone())), reduce(&Expr::atom(b)));
        assert_eq!(reduce(&Expr::atom(z)), Expr::zero());
        // MIN{|p+6/5 - 1|, |p+8/5 - 1|} keeps the smaller one
        let e = Expr::new([Clause::new([rd(1, 6, 5)]), Clause::new([rd(1, 8, 5)])]);
        assert_eq!(reduce(&e), Expr::atom(rd(1, 6, 5)));
        // MAX keeps the larger one
        let e = Expr::new([Clause::new([rd(1, 6, 5), rd(1, 8, 5)])]);
        assert_eq!(reduce(&e), Expr::atom(rd(1, 8, 5)));
        let r = reduce(&parse_expr(crate::fixtures::SAMPLE_PARAM_EXPR).unwrap());
        assert_eq!(reduce(&r), r);
    }

    #[test]
    fn zero_denominator_atoms() {
        assert_eq!(Atom::rel_diff(LinExpr::zero(), int(0)), Atom::Zero);
        assert_eq!(
            Atom::rel_diff(LinExpr::constant_only(int(1)), int(0)),
            Atom::Infinity
        );
        let a = Atom::rel_diff(LinExpr::param("p"), int(0));
        assert_eq!(a.eval(&val(int(0))).unwrap(), ExtRational::zero());
        assert_eq!(a.eval(&val(int(1))).unwrap(), ExtRational::Infinity);
    }

    #[test]
    fn text_format() {
        let text = "(min (max (reldiff (+ (* 1 p) 2) 5) inf) (max zero))";
        let e = parse_expr(text).unwrap();
        assert_eq!(e.clauses().len(), 2);
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        assert_eq!(Expr::zero().to_string(), "(min (max zero))");
        assert_eq!(rd(1, 2, 5).to_string(), "(reldiff (+ (* 1 p) 2) 5)");
        assert!(parse_expr("(reldiff p -1)").is_err());
        assert!(parse_expr("(min)").is_err());
        assert!(parse_expr("(reldiff (* 1/2 p) 1)").is_err());
        assert!(parse_expr("(foo zero)").is_err());
        let e = parse_expr("(reldiff (+ p (* 2 q) (/ 1 2)) (/ 3 2))").unwrap();
        assert_eq!(e.params().len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn atom() -> impl Strategy<Value = Atom> {
            prop_oneof![
                1 => Just(Atom::Zero),
                1 => Just(Atom::Infinity),
                8 => (0u64..3, 0i64..12, 0i64..4).prop_map(|(a, b, w)| rd(a, b, w)),
            ]
        }

        fn raw() -> impl Strategy<Value = RawExpr> {
            atom()
                .prop_map(RawExpr::Atom)
                .prop_recursive(3, 16, 3, |inner| {
                    prop_oneof![
                        prop::collection::vec(inner.clone(), 1..4).prop_map(RawExpr::Min),
                        prop::collection::vec(inner, 1..4).prop_map(RawExpr::Max),
                    ]
                })
        }

        proptest! {
            #[test]
            fn atom_order_is_sound(x in atom(), y in atom()) {
                if atom_leq(&x, &y) {
                    for v in grid() {
                        prop_assert!(x.eval(&v).unwrap() <= y.eval(&v).unwrap());
                    }
                }
            }

            #[test]
            fn rewrites_preserve_value(r in raw()) {
                let e = normalize(&r);
                for f in [simplify(&e), canonicalize(&e), reduce(&e)] {
                    for v in grid() {
                        prop_assert_eq!(eval(&f, &v).unwrap(), r.eval(&v).unwrap());
                    }
                }
            }

            #[test]
            fn expression_order_is_sound(x in raw(), y in raw()) {
                let (x, y) = (normalize(&x), normalize(&y));
                if expr_leq(&x, &y) {
                    for v in grid() {
                        prop_assert!(eval(&x, &v).unwrap() <= eval(&y, &v).unwrap());
                    }
                }
                prop_assert!(expr_leq(&x, &x));
            }
        }
    }
}

//! SMT-LIB 2 export of the constraint `E ≤ eps`, and a small evaluator for
//! the emitted text.
//!
//! Every parameter becomes a non-negative real constant. `|v/w - 1| ≤ eps`
//! is written without absolute value as `v - w ≤ w·eps ∧ w - v ≤ w·eps`,
//! clauses as conjunctions and the outer MIN as a disjunction.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::model::Valuation;
use crate::paramexpr::{Atom, Clause, Expr, LinExpr};
use crate::rational::{parse_rational, Rational};
use crate::sexpr::{self, SExpr};

/// How the bound on the expression is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsMode {
    Const(Rational),
    /// A free non-negative constant named by [`eps_symbol`].
    Var,
}

/// Rational literal: `n` for integers, `(/ n d)` otherwise.
pub fn rational_literal(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("(/ {} {})", r.numer(), r.denom())
    }
}

fn is_simple_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || "_~!@$%^&*+=<>.?/-".contains(c))
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_~!@$%^&*+=<>.?/-".contains(c))
}

/// The SMT-LIB symbol for a parameter, quoted when necessary.
pub fn symbol(name: &str) -> String {
    if is_simple_symbol(name) {
        name.to_owned()
    } else {
        format!("|{name}|")
    }
}

/// Name of the bound variable: `eps`, with underscores appended while it
/// clashes with a parameter.
pub fn eps_symbol(e: &Expr) -> String {
    let params = e.params();
    let mut name = "eps".to_owned();
    while params.contains(&name) {
        name.push('_');
    }
    name
}

fn lin_term(v: &LinExpr) -> String {
    let mut terms: Vec<String> = v
        .coeffs()
        .iter()
        .map(|(p, &a)| {
            if a == 1 {
                symbol(p)
            } else {
                format!("(* {a} {})", symbol(p))
            }
        })
        .collect();
    if !v.constant().is_zero() || terms.is_empty() {
        terms.push(rational_literal(v.constant()));
    }
    if terms.len() == 1 {
        terms.pop().expect("one term")
    } else {
        format!("(+ {})", terms.join(" "))
    }
}

fn scaled(w: &Rational, eps: &str) -> String {
    if w.is_one() {
        eps.to_owned()
    } else {
        format!("(* {} {eps})", rational_literal(w))
    }
}

fn atom_constraint(a: &Atom, eps: &str) -> String {
    match a {
        Atom::Zero => "true".into(),
        Atom::Infinity => "false".into(),
        Atom::RelDiff { den, num } if den.is_zero() => format!("(= {} 0)", lin_term(num)),
        Atom::RelDiff { den, num } => {
            let (v, w) = (lin_term(num), rational_literal(den));
            let bound = scaled(den, eps);
            format!("(and (<= (- {v} {w}) {bound}) (<= (- {w} {v}) {bound}))")
        }
    }
}

fn junction(op: &str, mut parts: Vec<String>) -> String {
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        format!("({op} {})", parts.join(" "))
    }
}

fn clause_constraint(c: &Clause, eps: &str) -> String {
    junction(
        "and",
        c.atoms().iter().map(|a| atom_constraint(a, eps)).collect(),
    )
}

/// The assertion body `E ≤ eps`.
pub fn constraint(e: &Expr, eps: &str) -> String {
    junction(
        "or",
        e.clauses()
            .iter()
            .map(|c| clause_constraint(c, eps))
            .collect(),
    )
}

/// A complete SMT-LIB 2 script in QF_LRA.
pub fn emit(e: &Expr, mode: &EpsMode) -> String {
    let mut out = String::new();
    out.push_str("(set-option :produce-models true)\n(set-logic QF_LRA)\n");
    for p in e.params() {
        let p = symbol(&p);
        let _ = writeln!(out, "(declare-fun {p} () Real)\n(assert (>= {p} 0))");
    }
    let eps = match mode {
        EpsMode::Const(r) => rational_literal(r),
        EpsMode::Var => {
            let eps = eps_symbol(e);
            let _ = writeln!(out, "(declare-fun {eps} () Real)\n(assert (>= {eps} 0))");
            eps
        }
    };
    let _ = writeln!(out, "(assert {})", constraint(e, &eps));
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Real(Rational),
    Bool(bool),
}

fn unquote(s: &str) -> &str {
    s.strip_prefix('|')
        .and_then(|x| x.strip_suffix('|'))
        .unwrap_or(s)
}

struct Evaluator<'a> {
    consts: &'a BTreeMap<String, Rational>,
}

impl Evaluator<'_> {
    fn real(&self, e: &SExpr) -> Result<Rational, String> {
        match self.value(e)? {
            Value::Real(r) => Ok(r),
            Value::Bool(_) => Err(format!("expected a real term: {e}")),
        }
    }

    fn boolean(&self, e: &SExpr) -> Result<bool, String> {
        match self.value(e)? {
            Value::Bool(b) => Ok(b),
            Value::Real(_) => Err(format!("expected a formula: {e}")),
        }
    }

    fn value(&self, e: &SExpr) -> Result<Value, String> {
        if let SExpr::Atom(tok) = e {
            return match tok.as_str() {
                "true" => Ok(Value::Bool(true)),
                "false" => Ok(Value::Bool(false)),
                _ => {
                    if let Some(r) = parse_rational(tok) {
                        return Ok(Value::Real(r));
                    }
                    if let Some(r) = decimal(tok) {
                        return Ok(Value::Real(r));
                    }
                    self.consts
                        .get(unquote(tok))
                        .cloned()
                        .map(Value::Real)
                        .ok_or_else(|| format!("unassigned symbol `{tok}`"))
                }
            };
        }
        let (op, args) = e.as_call().ok_or_else(|| format!("bad term {e}"))?;
        let reals = || {
            args.iter()
                .map(|a| self.real(a))
                .collect::<Result<Vec<_>, _>>()
        };
        let bools = || {
            args.iter()
                .map(|a| self.boolean(a))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(match op {
            "and" => Value::Bool(bools()?.into_iter().all(|b| b)),
            "or" => Value::Bool(bools()?.into_iter().any(|b| b)),
            "not" => match bools()?.as_slice() {
                [b] => Value::Bool(!b),
                _ => return Err(format!("`not` takes one argument: {e}")),
            },
            "<=" | ">=" | "<" | ">" | "=" => {
                let xs = reals()?;
                if xs.len() < 2 {
                    return Err(format!("comparison needs two arguments: {e}"));
                }
                Value::Bool(xs.windows(2).all(|w| match op {
                    "<=" => w[0] <= w[1],
                    ">=" => w[0] >= w[1],
                    "<" => w[0] < w[1],
                    ">" => w[0] > w[1],
                    _ => w[0] == w[1],
                }))
            }
            "+" => Value::Real(reals()?.into_iter().sum()),
            "*" => Value::Real(reals()?.into_iter().product()),
            "-" => {
                let xs = reals()?;
                match xs.split_first() {
                    Some((x, [])) => Value::Real(-x),
                    Some((x, rest)) => Value::Real(rest.iter().fold(x.clone(), |a, b| a - b)),
                    None => return Err("`-` needs arguments".into()),
                }
            }
            "/" => {
                let xs = reals()?;
                match xs.as_slice() {
                    [x, y] if !y.is_zero() => Value::Real(x / y),
                    _ => return Err(format!("bad division {e}")),
                }
            }
            _ => return Err(format!("unsupported operator `{op}`")),
        })
    }
}

fn decimal(tok: &str) -> Option<Rational> {
    let (int, frac) = tok.split_once('.')?;
    if int.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let scale = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
    let n: num_bigint::BigInt = format!("{int}{frac}").parse().ok()?;
    Some(Rational::new(n, scale))
}

/// Evaluates an emitted script under a full assignment of its declared
/// constants (parameters and, if declared, the bound variable). Returns
/// whether every assertion holds.
pub fn check_assignment(text: &str, assignment: &Valuation) -> Result<bool, String> {
    let forms = sexpr::parse_all(text)?;
    let mut declared: Vec<String> = Vec::new();
    let mut asserts = Vec::new();
    for f in &forms {
        let (cmd, args) = f.as_call().ok_or_else(|| format!("not a command: {f}"))?;
        match (cmd, args) {
            ("set-option" | "set-logic" | "check-sat" | "get-model" | "set-info" | "exit", _) => {}
            ("declare-fun", [SExpr::Atom(name), SExpr::List(dom), SExpr::Atom(sort)])
                if dom.is_empty() && sort == "Real" =>
            {
                declared.push(unquote(name).to_owned());
            }
            ("declare-const", [SExpr::Atom(name), SExpr::Atom(sort)]) if sort == "Real" => {
                declared.push(unquote(name).to_owned());
            }
            ("assert", [body]) => asserts.push(body),
            _ => return Err(format!("unsupported command: {f}")),
        }
    }
    let mut consts = BTreeMap::new();
    for d in declared {
        let v = assignment
            .get(&d)
            .ok_or_else(|| format!("no value for `{d}`"))?;
        consts.insert(d, v.clone());
    }
    let ev = Evaluator { consts: &consts };
    for a in asserts {
        if !ev.boolean(a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

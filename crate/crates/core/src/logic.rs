//! Existential weighted CTL without next.
//!
//! ```text
//! φ ::= a | !a | φ & φ | φ | φ | E(φ U[l,u] φ)
//! ```
//!
//! `E(φ1 U[l,u] φ2)` holds in `s` when some path from `s` reaches a
//! `φ2`-state with accumulated weight in `[l,u]` and every earlier state on
//! it satisfies `φ1`. The path may be empty when `0 ∈ [l,u]`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::distance::require_distance_domain;
use crate::error::{Error, Result};
use crate::model::{Model, StateId};
use crate::rational::{int, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    /// `None` unless `0 ≤ lo ≤ hi`.
    pub fn new(lo: Rational, hi: Rational) -> Option<Self> {
        (!lo.is_negative() && lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `[max(0, l(1-ε)), u(1+ε)]`.
    pub fn expand(&self, eps: &Rational) -> Interval {
        let lo = (&self.lo * (int(1) - eps)).max(Rational::zero());
        Interval {
            lo,
            hi: &self.hi * (int(1) + eps),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Prop(String),
    NegProp(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ExistsUntil(Box<Formula>, Interval, Box<Formula>),
}

impl Formula {
    pub fn prop(a: &str) -> Self {
        Formula::Prop(a.to_owned())
    }

    pub fn neg(a: &str) -> Self {
        Formula::NegProp(a.to_owned())
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn until(l: Formula, i: Interval, r: Formula) -> Self {
        Formula::ExistsUntil(Box::new(l), i, Box::new(r))
    }

    /// Nesting depth of connectives and untils; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::NegProp(_) => 0,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::ExistsUntil(l, _, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Prop(a) => f.write_str(a),
            Formula::NegProp(a) => write!(f, "!{a}"),
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} | {r})"),
            Formula::ExistsUntil(l, i, r) => write!(f, "E({l} U{i} {r})"),
        }
    }
}

/// Relaxes every interval by `eps` in both directions.
pub fn eps_expand(phi: &Formula, eps: &Rational) -> Formula {
    match phi {
        Formula::Prop(_) | Formula::NegProp(_) => phi.clone(),
        Formula::And(l, r) => Formula::and(eps_expand(l, eps), eps_expand(r, eps)),
        Formula::Or(l, r) => Formula::or(eps_expand(l, eps), eps_expand(r, eps)),
        Formula::ExistsUntil(l, i, r) => {
            Formula::until(eps_expand(l, eps), i.expand(eps), eps_expand(r, eps))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if "()[],!&|".contains(c) {
            out.push((col, Tok::Sym(c)));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            out.push((col, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
        } else {
            return Err(Error::Formula {
                col,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Formula {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.eat('|') {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat('&') {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn ident(&mut self) -> Option<String> {
        match self.peek() {
            Some(Tok::Ident(a)) => {
                let a = a.clone();
                self.pos += 1;
                Some(a)
            }
            _ => None,
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat('!') {
            return match self.ident() {
                Some(a) => Ok(Formula::NegProp(a)),
                None => self.err("negation applies to atomic propositions only"),
            };
        }
        if self.eat('(') {
            let f = self.or()?;
            self.expect(')')?;
            return Ok(f);
        }
        if self.peek() == Some(&Tok::Ident("E".into())) && self.peek2() == Some(&Tok::Sym('(')) {
            self.pos += 2;
            let l = self.or()?;
            if self.ident().as_deref() != Some("U") {
                return self.err("expected `U`");
            }
            let i = self.interval()?;
            let r = self.or()?;
            self.expect(')')?;
            return Ok(Formula::until(l, i, r));
        }
        match self.ident() {
            Some(a) => Ok(Formula::Prop(a)),
            None => self.err("expected a formula"),
        }
    }

    fn number(&mut self) -> Result<Rational> {
        if let Some(Tok::Num(n)) = self.peek() {
            if let Some(r) = parse_rational(n) {
                self.pos += 1;
                return Ok(r);
            }
        }
        self.err("expected a non-negative rational")
    }

    fn interval(&mut self) -> Result<Interval> {
        self.expect('[')?;
        let col = self.col();
        let lo = self.number()?;
        self.expect(',')?;
        let hi = self.number()?;
        self.expect(']')?;
        Interval::new(lo, hi).ok_or(Error::Formula {
            col,
            msg: "interval lower bound exceeds upper bound".into(),
        })
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let f = p.or()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// The states of `m` satisfying `phi`.
pub fn satisfying_states(m: &Model, phi: &Formula) -> Result<Vec<bool>> {
    require_distance_domain(m)?;
    Ok(sat(m, phi))
}

fn sat(m: &Model, phi: &Formula) -> Vec<bool> {
    match phi {
        Formula::Prop(a) => m.states().map(|s| m.labels(s).contains(a)).collect(),
        Formula::NegProp(a) => m.states().map(|s| !m.labels(s).contains(a)).collect(),
        Formula::And(l, r) => zip(sat(m, l), sat(m, r), |x, y| x && y),
        Formula::Or(l, r) => zip(sat(m, l), sat(m, r), |x, y| x || y),
        Formula::ExistsUntil(l, i, r) => {
            let (hold, goal) = (sat(m, l), sat(m, r));
            m.states()
                .map(|s| until_from(m, s, &hold, i, &goal))
                .collect()
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

// Search over (state, accumulated weight). Without 0-cycles and with the
// weight capped by the upper bound there are finitely many configurations.
fn until_from(m: &Model, s: StateId, hold: &[bool], i: &Interval, goal: &[bool]) -> bool {
    let mut seen: HashSet<(StateId, Rational)> = HashSet::new();
    let mut stack = vec![(s, Rational::zero())];
    seen.insert((s, Rational::zero()));
    while let Some((x, acc)) = stack.pop() {
        if goal[x] && i.contains(&acc) {
            return true;
        }
        if !hold[x] {
            continue;
        }
        for tr in m.outgoing(x) {
            let next = &acc + tr.weight.concrete().expect("concrete model");
            if &next <= i.hi() && seen.insert((tr.target, next.clone())) {
                stack.push((tr.target, next));
            }
        }
    }
    false
}

/// `m, s ⊨ phi`.
pub fn model_check(m: &Model, s: StateId, phi: &Formula) -> Result<bool> {
    Ok(satisfying_states(m, phi)?[s])
}

//! Weighted Kripke structures, optionally with parametric weights.
//!
//! A [`Model`] without parameters is a plain weighted Kripke structure; with
//! parameters it is parametric and must be [instantiated](instantiate) before
//! any semantic distance computation. States are addressed by dense indices;
//! names are kept only for parsing and reporting.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// Dense index into a model's state table.
pub type StateId = usize;

/// Total map from parameter names to non-negative rationals.
pub type Valuation = BTreeMap<String, Rational>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Concrete(Rational),
    Param(String),
}

impl Weight {
    pub fn concrete(&self) -> Option<&Rational> {
        match self {
            Weight::Concrete(r) => Some(r),
            Weight::Param(_) => None,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Concrete(r) => write!(f, "{r}"),
            Weight::Param(p) => f.write_str(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub weight: Weight,
    pub target: StateId,
}

#[derive(Clone, Debug)]
pub struct Model {
    names: Vec<String>,
    index: HashMap<String, StateId>,
    labels: Vec<BTreeSet<String>>,
    label_class: Vec<usize>,
    params: Vec<String>,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<usize>>,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.labels == other.labels
            && self.params == other.params
            && self.transitions == other.transitions
    }
}

impl Eq for Model {}

impl Model {
    pub fn builder() -> ModelBuilder {
        ModelBuilder::default()
    }

    fn assemble(
        names: Vec<String>,
        labels: Vec<BTreeSet<String>>,
        params: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Model {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut classes: HashMap<&BTreeSet<String>, usize> = HashMap::new();
        let label_class = labels
            .iter()
            .map(|l| {
                let next = classes.len();
                *classes.entry(l).or_insert(next)
            })
            .collect();
        let mut outgoing = vec![Vec::new(); names.len()];
        for (i, t) in transitions.iter().enumerate() {
            outgoing[t.source].push(i);
        }
        Model {
            names,
            index,
            labels,
            label_class,
            params,
            transitions,
            outgoing,
        }
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn state_or_err(&self, name: &str) -> Result<StateId> {
        self.state(name)
            .ok_or_else(|| Error::UnknownState(name.to_owned()))
    }

    pub fn labels(&self, s: StateId) -> &BTreeSet<String> {
        &self.labels[s]
    }

    /// Two states of this model carry the same label set.
    pub fn same_labels(&self, a: StateId, b: StateId) -> bool {
        self.label_class[a] == self.label_class[b]
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = &Transition> + '_ {
        self.outgoing[s].iter().map(move |&i| &self.transitions[i])
    }

    pub fn is_deadlocked(&self, s: StateId) -> bool {
        self.outgoing[s].is_empty()
    }

    /// True when no transition carries a parameter.
    pub fn is_concrete(&self) -> bool {
        self.first_param_edge().is_none()
    }

    fn first_param_edge(&self) -> Option<&str> {
        self.transitions.iter().find_map(|t| match &t.weight {
            Weight::Param(p) => Some(p.as_str()),
            Weight::Concrete(_) => None,
        })
    }

    /// Fails with [`Error::Parametric`] when any weight is a parameter.
    pub fn require_concrete(&self) -> Result<()> {
        match self.first_param_edge() {
            Some(p) => Err(Error::Parametric(p.to_owned())),
            None => Ok(()),
        }
    }

    /// Largest concrete weight, or 0 for a model without concrete transitions.
    pub fn max_weight(&self) -> Rational {
        self.transitions
            .iter()
            .filter_map(|t| t.weight.concrete())
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Largest concrete weight leaving `s`.
    pub fn max_weight_from(&self, s: StateId) -> Rational {
        self.outgoing(s)
            .filter_map(|t| t.weight.concrete())
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Writes the model in the line-oriented text format read by [`parse_model`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("states:")?;
        for n in &self.names {
            write!(f, " {n}")?;
        }
        writeln!(f)?;
        if !self.params.is_empty() {
            writeln!(f, "params: {}", self.params.join(" "))?;
        }
        for (s, labels) in self.labels.iter().enumerate() {
            write!(f, "label {}", self.names[s])?;
            for l in labels {
                write!(f, " {l}")?;
            }
            writeln!(f)?;
        }
        for t in &self.transitions {
            writeln!(
                f,
                "trans {} {} {}",
                self.names[t.source], t.weight, self.names[t.target]
            )?;
        }
        Ok(())
    }
}

/// Incremental construction of a [`Model`]. Transitions form a set, so
/// repeated `(source, weight, target)` triples collapse.
#[derive(Default, Debug, Clone)]
pub struct ModelBuilder {
    names: Vec<String>,
    index: HashMap<String, StateId>,
    labels: Vec<BTreeSet<String>>,
    params: Vec<String>,
    transitions: BTreeSet<Transition>,
}

impl ModelBuilder {
    pub fn state(&mut self, name: &str) -> Result<StateId> {
        if self.index.contains_key(name) {
            return Err(Error::Duplicate(name.to_owned()));
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        self.labels.push(BTreeSet::new());
        Ok(id)
    }

    /// Declares a state together with its label set.
    pub fn labeled<I, S>(&mut self, name: &str, props: I) -> Result<StateId>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let id = self.state(name)?;
        self.labels[id].extend(props.into_iter().map(Into::into));
        Ok(id)
    }

    pub fn label(&mut self, state: &str, prop: &str) -> Result<()> {
        let id = self.lookup(state)?;
        self.labels[id].insert(prop.to_owned());
        Ok(())
    }

    pub fn param(&mut self, name: &str) -> Result<()> {
        if self.params.iter().any(|p| p == name) {
            return Err(Error::Duplicate(name.to_owned()));
        }
        self.params.push(name.to_owned());
        Ok(())
    }

    fn lookup(&self, state: &str) -> Result<StateId> {
        self.index
            .get(state)
            .copied()
            .ok_or_else(|| Error::UnknownState(state.to_owned()))
    }

    pub fn transition(&mut self, source: &str, weight: Weight, target: &str) -> Result<()> {
        let source = self.lookup(source)?;
        let target = self.lookup(target)?;
        self.edge(source, weight, target)
    }

    /// Adds a transition between already declared state indices.
    pub fn edge(&mut self, source: StateId, weight: Weight, target: StateId) -> Result<()> {
        for s in [source, target] {
            if s >= self.names.len() {
                return Err(Error::UnknownState(format!("#{s}")));
            }
        }
        match &weight {
            Weight::Concrete(r) if r.is_negative() => {
                return Err(Error::NegativeWeight {
                    line: 0,
                    col: 0,
                    text: r.to_string(),
                })
            }
            Weight::Param(p) if !self.params.contains(p) => {
                return Err(Error::UnknownParam(p.clone()))
            }
            _ => {}
        }
        self.transitions.insert(Transition {
            source,
            weight,
            target,
        });
        Ok(())
    }

    pub fn build(self) -> Model {
        Model::assemble(
            self.names,
            self.labels,
            self.params,
            self.transitions.into_iter().collect(),
        )
    }
}

fn is_ident(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

/// Splits a line into tokens with their 1-based columns, dropping comments.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((st, &line[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &line[st..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

/// Parses the line-oriented model format:
///
/// ```text
/// states: s s1 t
/// params: p
/// label s a
/// trans s 1/2 s1
/// trans t p s
/// ```
pub fn parse_model(text: &str) -> Result<Model> {
    let mut b = ModelBuilder::default();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        let syntax = |col: usize, msg: String| Error::Syntax {
            line: line_no,
            col,
            msg,
        };
        let (keyword, rest): (&str, Vec<(usize, &str)>) = match head.split_once(':') {
            Some((kw, "")) => (kw, toks[1..].to_vec()),
            Some((kw, tail)) => {
                let mut rest = vec![(col + kw.chars().count() + 1, tail)];
                rest.extend_from_slice(&toks[1..]);
                (kw, rest)
            }
            None => match toks.get(1) {
                Some(&(_, ":")) => (head, toks[2..].to_vec()),
                _ => (head, toks[1..].to_vec()),
            },
        };
        match keyword {
            "states" | "params" => {
                for &(c, name) in &rest {
                    if !is_ident(name) {
                        return Err(syntax(c, format!("invalid identifier `{name}`")));
                    }
                    if keyword == "states" {
                        b.state(name)?;
                    } else {
                        b.param(name)?;
                    }
                }
            }
            "label" => {
                let Some((&(_, state), props)) = rest.split_first() else {
                    return Err(syntax(col, "expected `label <state> <prop>*`".into()));
                };
                let id = b.lookup(state)?;
                for &(c, prop) in props {
                    if !is_ident(prop) {
                        return Err(syntax(c, format!("invalid proposition `{prop}`")));
                    }
                    b.labels[id].insert(prop.to_owned());
                }
            }
            "trans" => {
                let [(_, src), (wcol, weight), (_, dst)] = rest[..] else {
                    return Err(syntax(col, "expected `trans <src> <weight> <dst>`".into()));
                };
                let weight = if is_ident(weight) {
                    if !b.params.iter().any(|p| p == weight) {
                        return Err(Error::UnknownParam(weight.to_owned()));
                    }
                    Weight::Param(weight.to_owned())
                } else {
                    let r = parse_rational(weight)
                        .ok_or_else(|| syntax(wcol, format!("invalid weight `{weight}`")))?;
                    if r.is_negative() {
                        return Err(Error::NegativeWeight {
                            line: line_no,
                            col: wcol,
                            text: weight.to_owned(),
                        });
                    }
                    Weight::Concrete(r)
                };
                b.transition(src, weight, dst)?;
            }
            other => return Err(syntax(col, format!("unknown directive `{other}`"))),
        }
    }
    Ok(b.build())
}

/// Replaces every parametric weight by its value under `v`. The transition
/// list keeps a one-to-one correspondence with the input, so state and
/// transition indices are unchanged.
pub fn instantiate(m: &Model, v: &Valuation) -> Result<Model> {
    for p in &m.params {
        match v.get(p) {
            None => return Err(Error::MissingParam(p.clone())),
            Some(r) if r.is_negative() => return Err(Error::NegativeValue(p.clone())),
            Some(_) => {}
        }
    }
    let transitions = m
        .transitions
        .iter()
        .map(|t| Transition {
            source: t.source,
            target: t.target,
            weight: match &t.weight {
                Weight::Param(p) => Weight::Concrete(v[p].clone()),
                w => w.clone(),
            },
        })
        .collect();
    Ok(Model::assemble(
        m.names.clone(),
        m.labels.clone(),
        Vec::new(),
        transitions,
    ))
}

/// Result of [`disjoint_union`]: the combined model and, for each input, the
/// index of each of its states inside the union.
#[derive(Clone, Debug)]
pub struct Union {
    pub model: Model,
    pub left: Vec<StateId>,
    pub right: Vec<StateId>,
}

/// Places `a` and `b` side by side. States of `a` keep their names and
/// indices; states of `b` are shifted past them and primed when a name
/// clashes. Parameters with the same name are shared.
pub fn disjoint_union(a: &Model, b: &Model) -> Union {
    let offset = a.num_states();
    let mut names = a.names.clone();
    let mut taken: BTreeSet<String> = names.iter().cloned().collect();
    for n in &b.names {
        let mut name = n.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        names.push(name);
    }
    let mut labels = a.labels.clone();
    labels.extend(b.labels.iter().cloned());
    let mut params = a.params.clone();
    for p in &b.params {
        if !params.contains(p) {
            params.push(p.clone());
        }
    }
    let mut transitions = a.transitions.clone();
    transitions.extend(b.transitions.iter().map(|t| Transition {
        source: t.source + offset,
        weight: t.weight.clone(),
        target: t.target + offset,
    }));
    Union {
        model: Model::assemble(names, labels, params, transitions),
        left: (0..offset).collect(),
        right: (offset..offset + b.num_states()).collect(),
    }
}

//! Weighted branching simulation distance for weighted Kripke structures.
//!
//! * [`model`]: structures with concrete or parametric transition weights.
//! * [`distance`]: the least fixed point distance on concrete structures and
//!   the weighted branching ε-simulation it characterises.
//! * [`paramexpr`]: MIN-of-MAX expressions over relative deviation atoms.
//! * [`paramdist`]: the distance from a concrete structure to a parametric
//!   one as a symbolic expression in the parameters.
//! * [`logic`]: the existential weighted CTL fragment without next.
//! * [`smt`]: SMT-LIB export of `E ≤ ε` constraints.

pub mod cli;
pub mod distance;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod graph;
pub mod logic;
pub mod model;
pub mod paramdist;
pub mod paramexpr;
pub mod rational;
pub mod sexpr;
pub mod smt;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{Model, StateId, Valuation, Weight};
pub use rational::{ExtRational, Rational};

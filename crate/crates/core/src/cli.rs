//! The `wbsim` command line.
//!
//! Exit codes: 0 success or a positive verdict, 1 malformed input, 2 input
//! outside the supported domain (0-cycles, zeno parametric structures,
//! parameters where concrete weights are required), 3 negative verdict.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};

use crate::distance::{compute_distance, cycle_min_weight, sequence_bound, zero_cycle};
use crate::error::Error;
use crate::logic::{model_check, parse_formula};
use crate::model::{parse_model, Model, Valuation};
use crate::paramdist::{compute_param_distance, missing_params, strongly_cost_nonzeno};
use crate::paramexpr::{eval, parse_expr, Expr};
use crate::rational::{parse_nonneg, Rational};
use crate::smt::{emit, EpsMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wbsim",
    version,
    about = "Weighted branching simulation distances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance d(s, t) in a concrete model.
    Dist {
        model: PathBuf,
        s: String,
        t: String,
    },
    /// Distance from s in a concrete model to t in a parametric one, as an expression.
    Pdist {
        lhs: PathBuf,
        rhs: PathBuf,
        s: String,
        t: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluates an expression file under a valuation.
    Eval {
        expr: PathBuf,
        /// Parameter value `name=n/d`; repeatable.
        #[arg(short = 'p', long = "param", value_parser = parse_assignment)]
        params: Vec<(String, Rational)>,
    },
    /// Decides whether s is eps-simulated by t.
    Check {
        model: PathBuf,
        s: String,
        t: String,
        #[arg(long, value_parser = parse_eps)]
        eps: Rational,
    },
    /// Model checks a formula at a state.
    Mc {
        model: PathBuf,
        s: String,
        formula: String,
    },
    /// Writes the constraint `E <= eps` as an SMT-LIB 2 script.
    #[command(group(ArgGroup::new("bound").required(true).args(["eps", "eps_var"])))]
    Smt {
        expr: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_parser = parse_eps)]
        eps: Option<Rational>,
        /// Leave eps free, to be minimised by the solver.
        #[arg(long)]
        eps_var: bool,
    },
    /// Summarises a model.
    Info { model: PathBuf },
}

fn parse_eps(s: &str) -> Result<Rational, String> {
    parse_nonneg(s).ok_or_else(|| format!("`{s}` is not a non-negative rational"))
}

fn parse_assignment(s: &str) -> Result<(String, Rational), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected `name=value`, found `{s}`"))?;
    if name.is_empty() {
        return Err(format!("missing parameter name in `{s}`"));
    }
    Ok((name.to_owned(), parse_eps(value)?))
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model, Failure> {
    parse_model(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_expr(path: &Path) -> Result<Expr, Failure> {
    parse_expr(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn verdict(out: &mut dyn Write, yes: bool) -> Outcome {
    let _ = writeln!(out, "{}", if yes { "yes" } else { "no" });
    Ok(if yes { EXIT_OK } else { EXIT_NO })
}

fn run_command(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Dist { model, s, t } => {
            let m = load_model(&model)?;
            let (s, t) = (m.state_or_err(&s)?, m.state_or_err(&t)?);
            let _ = writeln!(out, "{}", compute_distance(&m)?.get(s, t));
            Ok(EXIT_OK)
        }
        Command::Pdist {
            lhs,
            rhs,
            s,
            t,
            output,
        } => {
            let (l, r) = (load_model(&lhs)?, load_model(&rhs)?);
            let (s, t) = (l.state_or_err(&s)?, r.state_or_err(&t)?);
            let result = compute_param_distance(&l, &r)?;
            write_file(&output, &format!("{}\n", result.table.get(s, t)))?;
            let _ = writeln!(out, "iterations: {}", result.iterations);
            Ok(EXIT_OK)
        }
        Command::Eval { expr, params } => {
            let e = load_expr(&expr)?;
            let mut v = Valuation::new();
            for (name, value) in params {
                if v.insert(name.clone(), value).is_some() {
                    return Err(Error::Duplicate(name).into());
                }
            }
            let missing = missing_params(&e, &v);
            if !missing.is_empty() {
                return Err(Error::MissingParam(missing.join(", ")).into());
            }
            let _ = writeln!(out, "{}", eval(&e, &v)?);
            Ok(EXIT_OK)
        }
        Command::Check { model, s, t, eps } => {
            let m = load_model(&model)?;
            let (s, t) = (m.state_or_err(&s)?, m.state_or_err(&t)?);
            verdict(out, compute_distance(&m)?.get(s, t).le_rational(&eps))
        }
        Command::Mc { model, s, formula } => {
            let m = load_model(&model)?;
            let s = m.state_or_err(&s)?;
            let phi = parse_formula(&formula)?;
            verdict(out, model_check(&m, s, &phi)?)
        }
        Command::Smt {
            expr,
            output,
            eps,
            eps_var: _,
        } => {
            let e = load_expr(&expr)?;
            let mode = eps.map_or(EpsMode::Var, EpsMode::Const);
            write_file(&output, &emit(&e, &mode))?;
            Ok(EXIT_OK)
        }
        Command::Info { model } => {
            let m = load_model(&model)?;
            info(&m, out);
            Ok(EXIT_OK)
        }
    }
}

fn names(m: &Model, cycle: &[usize]) -> String {
    cycle
        .iter()
        .map(|&s| m.name(s))
        .collect::<Vec<_>>()
        .join(" -> ")
}

fn info(m: &Model, out: &mut dyn Write) {
    let list = |xs: &[String]| {
        if xs.is_empty() {
            "none".to_owned()
        } else {
            xs.join(" ")
        }
    };
    let _ = writeln!(out, "states: {} ({})", m.num_states(), list(m.names()));
    let _ = writeln!(out, "params: {}", list(m.params()));
    let _ = writeln!(out, "transitions: {}", m.transitions().len());
    if m.is_concrete() {
        match zero_cycle(m) {
            Some(c) => {
                let _ = writeln!(out, "0-cycle: {}", names(m, &c));
            }
            None => {
                let _ = writeln!(out, "0-cycle: none");
                if let Ok(w_min) = cycle_min_weight(m) {
                    let w = w_min.map_or("none (acyclic)".to_owned(), |w| w.to_string());
                    let _ = writeln!(out, "w_min: {w}");
                }
                if let Ok(n) = sequence_bound(m, None) {
                    let _ = writeln!(out, "sequence bound: {n}");
                }
            }
        }
    }
    match strongly_cost_nonzeno(m) {
        Err(Error::NotNonZeno { cycle }) => {
            let _ = writeln!(out, "strongly cost non-zeno: no ({})", cycle.join(" -> "));
        }
        Err(_) => {}
        Ok(w_min) => {
            let _ = writeln!(out, "strongly cost non-zeno: yes");
            if !m.is_concrete() {
                let n = m.num_states();
                let (w, bound) = match w_min {
                    None => ("none (acyclic)".to_owned(), n.saturating_sub(1).to_string()),
                    Some(w) => (
                        w.to_string(),
                        format!("ceil(2*W/{w})*{n} + {n}, W = heaviest left-hand weight"),
                    ),
                };
                let _ = writeln!(out, "w_min: {w}");
                let _ = writeln!(out, "parametric sequence bound: {bound}");
            }
        }
    }
}

/// Runs `wbsim` on the given arguments and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match run_command(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                EXIT_DOMAIN
            } else {
                EXIT_INPUT
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

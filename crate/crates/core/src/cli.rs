//! Command-line front end.
//!
//! `logopt <subcommand> <action> <input> [flags]`. Reports are plain
//! line-oriented text, or a JSON object with `--json`. Exit codes: 0 on
//! success, 2 on usage, file or parse errors, 3 when a solver rejects the
//! instance.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, ValueEnum};
use serde_json::{json, Value};

use crate::clausal::cnf::parse_cnf;
use crate::clausal::{
    cg_round, clause_to_inequality, input_resolution_derive, is_consistent_partial, is_consistent_set,
    is_lp_consistent_partial, is_lp_consistent_set, resolution_closure, resolve, unit_propagate, Clause, Constraint,
    PartialAssignment,
};
use crate::dd::sequencing::{job_sequencing_model, parse_sequencing, SequencingInstance};
use crate::dd::{
    compile_exact, compile_relaxed, compile_restricted, enumerate_near_optimal, export_dot, shortest_path, solve_bnb,
    BnbOutcome, DEFAULT_EXACT_CAP,
};
use crate::lbbd::{parse_scheduling, solve_lbbd, LbbdMode};
use crate::lp::text::{parse_lp, LpFile};
use crate::lp::{lp_solve, milp_solve, LpStatus, MilpStatus};
use crate::problogic::text::parse_instance;
use crate::problogic::{colgen_solve, query_bounds, query_bounds_colgen, ProbLogicError};
use crate::rational::{parse_rational, to_decimal, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Resolution rounds used by `clause closure`.
const CLOSURE_ROUNDS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Problogic,
    Clause,
    Lp,
    Dd,
    Lbbd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Bounds,
    BoundsCg,
    Resolve,
    Closure,
    InputDerive,
    Unitprop,
    ToIneq,
    Cground,
    Consistent,
    LpConsistent,
    Solve,
    Milp,
    Exact,
    Relax,
    Restrict,
    Bnb,
    NearOpt,
    Dot,
}

impl Action {
    const ALL: [(&'static str, Action); 18] = [
        ("bounds", Action::Bounds),
        ("bounds-cg", Action::BoundsCg),
        ("resolve", Action::Resolve),
        ("closure", Action::Closure),
        ("input-derive", Action::InputDerive),
        ("unitprop", Action::Unitprop),
        ("to-ineq", Action::ToIneq),
        ("cground", Action::Cground),
        ("consistent", Action::Consistent),
        ("lp-consistent", Action::LpConsistent),
        ("solve", Action::Solve),
        ("milp", Action::Milp),
        ("exact", Action::Exact),
        ("relax", Action::Relax),
        ("restrict", Action::Restrict),
        ("bnb", Action::Bnb),
        ("near-opt", Action::NearOpt),
        ("dot", Action::Dot),
    ];

    pub fn name(self) -> &'static str {
        Action::ALL.iter().find(|(_, a)| *a == self).map(|(n, _)| *n).expect("every action is listed")
    }

    fn allowed(sub: Subcommand) -> &'static [Action] {
        use Action::*;
        match sub {
            Subcommand::Problogic => &[Bounds, BoundsCg],
            Subcommand::Clause => &[Resolve, Closure, InputDerive, Unitprop, ToIneq, Cground, Consistent, LpConsistent],
            Subcommand::Lp => &[Solve, Milp],
            Subcommand::Dd => &[Exact, Relax, Restrict, Bnb, NearOpt, Dot],
            Subcommand::Lbbd => &[Solve],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Iter,
    Bcheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Options {
    pub width: Option<usize>,
    pub delta: Option<Rational>,
    pub mode: Option<LbbdMode>,
    pub out: Option<PathBuf>,
    pub json: bool,
    pub assign: Option<PartialAssignment>,
    pub target: Option<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub subcommand: Subcommand,
    pub action: Action,
    pub input: PathBuf,
    pub options: Options,
}

#[derive(Debug, Parser)]
#[command(name = "logopt", version, about = "Logic-based optimization toolkit")]
#[command(after_help = "Actions:\n  problogic: bounds, bounds-cg\n  clause: resolve, closure, input-derive, unitprop, to-ineq, cground, consistent, lp-consistent\n  lp: solve, milp\n  dd: exact, relax, restrict, bnb, near-opt, dot\n  lbbd: solve")]
struct Args {
    #[arg(value_enum)]
    subcommand: Subcommand,
    action: String,
    input: PathBuf,
    /// Maximum diagram width (dd relax, restrict, bnb, dot).
    #[arg(long)]
    width: Option<usize>,
    /// Optimality gap for dd near-opt, e.g. 1 or 1/2.
    #[arg(long)]
    delta: Option<String>,
    /// LBBD strategy.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Write the report to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Machine-readable report.
    #[arg(long)]
    json: bool,
    /// Partial assignment for clause consistent / lp-consistent, e.g. x1=0,x2=1.
    #[arg(long)]
    assign: Option<String>,
    /// Target clause for clause input-derive, e.g. "x1 -x2"; default is the empty clause.
    #[arg(long)]
    target: Option<String>,
}

fn usage(kind: ErrorKind, message: impl std::fmt::Display) -> clap::Error {
    Args::command().error(kind, message)
}

fn parse_assignment(text: &str) -> Result<PartialAssignment, String> {
    text.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (var, value) = part.split_once('=').ok_or_else(|| format!("expected var=0|1, got {part:?}"))?;
            let value = match value.trim() {
                "0" => false,
                "1" => true,
                other => return Err(format!("value {other:?} is not 0 or 1")),
            };
            Ok((var.trim().to_string(), value))
        })
        .collect()
}

/// Parses `argv` (without the program name). `--help` and `--version`
/// come back as errors whose exit code is 0.
pub fn parse_args<I, T>(argv: I) -> Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(std::iter::once("logopt".into()).chain(argv.into_iter().map(Into::into)))?;
    let action = Action::ALL
        .iter()
        .find(|(name, _)| *name == args.action)
        .map(|(_, a)| *a)
        .filter(|a| Action::allowed(args.subcommand).contains(a))
        .ok_or_else(|| {
            let names: Vec<&str> = Action::allowed(args.subcommand).iter().map(|a| a.name()).collect();
            usage(
                ErrorKind::InvalidValue,
                format!("unknown action {:?}; expected one of {}", args.action, names.join(", ")),
            )
        })?;

    let reject = |flag: &str| usage(ErrorKind::ArgumentConflict, format!("--{flag} does not apply to {}", action.name()));
    let dd = args.subcommand == Subcommand::Dd;
    let width_required = dd && matches!(action, Action::Relax | Action::Restrict | Action::Bnb);
    if args.width.is_some() && !(width_required || (dd && action == Action::Dot)) {
        return Err(reject("width"));
    }
    if width_required && args.width.is_none() {
        return Err(usage(ErrorKind::MissingRequiredArgument, format!("{} needs --width", action.name())));
    }
    if args.width == Some(0) {
        return Err(usage(ErrorKind::InvalidValue, "--width must be at least 1"));
    }
    if args.delta.is_some() && action != Action::NearOpt {
        return Err(reject("delta"));
    }
    if args.mode.is_some() && args.subcommand != Subcommand::Lbbd {
        return Err(reject("mode"));
    }
    if args.assign.is_some() && !matches!(action, Action::Consistent | Action::LpConsistent) {
        return Err(reject("assign"));
    }
    if args.target.is_some() && action != Action::InputDerive {
        return Err(reject("target"));
    }

    let delta = match &args.delta {
        Some(text) => {
            let q = parse_rational(text).map_err(|e| usage(ErrorKind::InvalidValue, format!("--delta: {e}")))?;
            if q < Rational::from_integer(0.into()) {
                return Err(usage(ErrorKind::InvalidValue, "--delta must be nonnegative"));
            }
            Some(q)
        }
        None => None,
    };
    let assign = match &args.assign {
        Some(text) => Some(parse_assignment(text).map_err(|e| usage(ErrorKind::InvalidValue, format!("--assign: {e}")))?),
        None => None,
    };
    let target = match &args.target {
        Some(text) => Some(Clause::parse(text).map_err(|e| usage(ErrorKind::InvalidValue, format!("--target: {e}")))?),
        None => None,
    };
    let mode = args.mode.map(|m| match m {
        ModeArg::Iter => LbbdMode::Iterative,
        ModeArg::Bcheck => LbbdMode::BranchAndCheck,
    });
    Ok(Command {
        subcommand: args.subcommand,
        action,
        input: args.input,
        options: Options { width: args.width, delta, mode, out: args.out, json: args.json, assign, target },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub text: String,
}

enum Failure {
    Input(String),
    Solver(String),
}

impl Failure {
    fn solver(e: impl std::fmt::Display) -> Self {
        Failure::Solver(e.to_string())
    }
}

/// Text lines plus the JSON fields of one report.
#[derive(Default)]
struct Out {
    lines: Vec<String>,
    fields: serde_json::Map<String, Value>,
}

impl Out {
    fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn field(&mut self, key: &str, value: Value) {
        self.fields.insert(key.to_string(), value);
    }
}

fn q(value: &Rational) -> Value {
    Value::String(value.to_string())
}

fn dec(value: &Rational) -> String {
    to_decimal(value, 6)
}

fn labels(seq: &[i64]) -> String {
    seq.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_with<T, E: std::fmt::Display>(path: &Path, parse: impl FnOnce(&str) -> Result<T, E>) -> Result<T, Failure> {
    let text = read_input(path)?;
    parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Runs one command. Never panics on bad input; the report carries the exit
/// code and the text meant for standard output (or standard error when the
/// code is nonzero).
pub fn run(cmd: &Command) -> Report {
    let mut out = Out::default();
    out.field("subcommand", json!(format!("{:?}", cmd.subcommand).to_lowercase()));
    out.field("action", json!(cmd.action.name()));
    let result = match cmd.subcommand {
        Subcommand::Problogic => run_problogic(cmd, &mut out),
        Subcommand::Clause => run_clause(cmd, &mut out),
        Subcommand::Lp => run_lp(cmd, &mut out),
        Subcommand::Dd => run_dd(cmd, &mut out),
        Subcommand::Lbbd => run_lbbd(cmd, &mut out),
    };
    let (code, error) = match result {
        Ok(()) => (EXIT_OK, None),
        Err(Failure::Input(e)) => (EXIT_INPUT, Some(e)),
        Err(Failure::Solver(e)) => (EXIT_SOLVER, Some(e)),
    };
    if let Some(e) = &error {
        out.line(format!("error: {e}"));
        out.field("error", json!(e));
    }
    out.field("exit_code", json!(code));
    let text = if cmd.options.json {
        let mut s = serde_json::to_string_pretty(&Value::Object(out.fields)).expect("plain JSON values");
        s.push('\n');
        s
    } else {
        let mut s = out.lines.join("\n");
        s.push('\n');
        s
    };
    if code == EXIT_OK {
        if let Some(path) = &cmd.options.out {
            return match std::fs::write(path, &text) {
                Ok(()) => Report { code, text: format!("wrote {}\n", path.display()) },
                Err(e) => Report { code: EXIT_INPUT, text: format!("error: {}: {e}\n", path.display()) },
            };
        }
    }
    Report { code, text }
}

/// Entry point shared by the binary: parse, run, print, return the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cmd) => {
            let report = run(&cmd);
            if report.code == EXIT_OK {
                print!("{}", report.text);
            } else {
                eprint!("{}", report.text);
            }
            report.code
        }
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}

fn run_problogic(cmd: &Command, out: &mut Out) -> Result<(), Failure> {
    let inst = parse_with(&cmd.input, parse_instance)?;
    let bounds = match cmd.action {
        Action::Bounds => query_bounds(&inst),
        _ => query_bounds_colgen(&inst),
    };
    let interval = match bounds {
        Ok(interval) => interval,
        Err(ProbLogicError::Inconsistent(cert)) => {
            let weights: Vec<String> = cert.premise_weights.iter().map(ToString::to_string).collect();
            out.field("premise_weights", json!(weights));
            out.field("normalization_weight", q(&cert.normalization_weight));
            return Err(Failure::Solver(format!(
                "premises are inconsistent; certificate weights [{}] normalization {}",
                weights.join(", "),
                cert.normalization_weight
            )));
        }
        Err(e) => return Err(Failure::solver(e)),
    };
    out.line(format!("interval {interval}"));
    out.line(format!("decimal [{}, {}]", dec(&interval.lo), dec(&interval.hi)));
    out.field("lo", q(&interval.lo));
    out.field("hi", q(&interval.hi));
    out.field("lo_decimal", json!(crate::rational::to_f64(&interval.lo)));
    out.field("hi_decimal", json!(crate::rational::to_f64(&interval.hi)));
    if cmd.action == Action::BoundsCg {
        for (name, sense) in [("min", crate::lp::Sense::Min), ("max", crate::lp::Sense::Max)] {
            let outcome = colgen_solve(&inst, sense).map_err(Failure::solver)?;
            out.line(format!(
                "{name}: {} columns of {} after {} master solves",
                outcome.columns.len(),
                inst.assignment_count(),
                outcome.iterations
            ));
            out.field(&format!("{name}_columns"), json!(outcome.columns.len()));
            out.field(&format!("{name}_iterations"), json!(outcome.iterations));
        }
    }
    Ok(())
}

/// Clause files are CNF when they carry a `p cnf` header, LP text otherwise.
fn read_constraints(path: &Path) -> Result<(Vec<Constraint>, Vec<String>), Failure> {
    let text = read_input(path)?;
    let is_cnf = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("p "));
    if is_cnf {
        let file = parse_cnf(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let mut universe: BTreeSet<String> = file.variables.into_iter().collect();
        universe.extend(file.clauses.iter().flat_map(|c| c.variables().map(str::to_string)));
        Ok((file.clauses.into_iter().map(Constraint::from).collect(), universe.into_iter().collect()))
    } else {
        let file = parse_lp(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let universe = file.problem.variables().into_iter().collect();
        Ok((file.problem.constraints.into_iter().map(Constraint::from).collect(), universe))
    }
}

fn read_clauses(path: &Path) -> Result<Vec<Clause>, Failure> {
    Ok(parse_with(path, parse_cnf)?.clauses)
}

fn clause_list(clauses: impl IntoIterator<Item = impl ToString>) -> Value {
    json!(clauses.into_iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn run_clause(cmd: &Command, out: &mut Out) -> Result<(), Failure> {
    match cmd.action {
        Action::Resolve => {
            let clauses = read_clauses(&cmd.input)?;
            let mut found = Vec::new();
            for a in 0..clauses.len() {
                for b in a + 1..clauses.len() {
                    if let Some(r) = resolve(&clauses[a], &clauses[b]) {
                        out.line(format!("{} {}: {r}", a + 1, b + 1));
                        found.push(json!({"left": a + 1, "right": b + 1, "resolvent": r.to_string()}));
                    }
                }
            }
            if found.is_empty() {
                out.line("no resolvents");
            }
            out.field("resolvents", Value::Array(found));
        }
        Action::Closure => {
            let clauses = read_clauses(&cmd.input)?;
            let closure = resolution_closure(&clauses, CLOSURE_ROUNDS);
            for c in &closure.clauses {
                out.line(c.to_string());
            }
            out.line(format!(
                "{} clauses after {} rounds{}",
                closure.clauses.len(),
                closure.rounds,
                if closure.truncated { " (truncated)" } else { "" }
            ));
            if closure.contains_empty() {
                out.line("unsatisfiable");
            }
            out.field("clauses", clause_list(&closure.clauses));
            out.field("rounds", json!(closure.rounds));
            out.field("truncated", json!(closure.truncated));
            out.field("unsatisfiable", json!(closure.contains_empty()));
        }
        Action::InputDerive => {
            let clauses = read_clauses(&cmd.input)?;
            let target = cmd.options.target.clone().unwrap_or_else(Clause::empty);
            match input_resolution_derive(&clauses, &target) {
                Some(d) => {
                    for (k, step) in d.steps.iter().enumerate() {
                        out.line(format!("{}. {} with {} gives {}", k + 1, step.left, step.right, step.resolvent));
                    }
                    out.line(format!("derived {}", d.result));
                    out.field("derived", json!(true));
                    out.field("result", json!(d.result.to_string()));
                    out.field("steps", json!(d.steps.len()));
                }
                None => {
                    out.line(format!("{target} has no input-resolution derivation"));
                    out.field("derived", json!(false));
                }
            }
        }
        Action::Unitprop => {
            let clauses = read_clauses(&cmd.input)?;
            let up = unit_propagate(&clauses);
            let units: Vec<String> = up.units.iter().map(ToString::to_string).collect();
            out.line(if units.is_empty() { "units none".to_string() } else { format!("units {}", units.join(" ")) });
            if up.conflict {
                out.line("conflict");
            }
            for c in &up.clauses {
                out.line(c.to_string());
            }
            out.field("units", json!(units));
            out.field("conflict", json!(up.conflict));
            out.field("clauses", clause_list(&up.clauses));
        }
        Action::ToIneq => {
            let clauses = read_clauses(&cmd.input)?;
            let rows: Vec<String> = clauses.iter().map(|c| clause_to_inequality(c).to_string()).collect();
            for row in &rows {
                out.line(row.clone());
            }
            out.field("inequalities", json!(rows));
        }
        Action::Cground => {
            let file: LpFile = parse_with(&cmd.input, parse_lp)?;
            let multipliers = file
                .multipliers
                .ok_or_else(|| Failure::Input(format!("{}: no multipliers line", cmd.input.display())))?;
            let cut = cg_round(&file.problem.constraints, &multipliers).map_err(Failure::solver)?;
            out.line(format!("cut {cut}"));
            out.field("cut", json!(cut.to_string()));
        }
        Action::Consistent | Action::LpConsistent => {
            let (constraints, universe) = read_constraints(&cmd.input)?;
            let lp = cmd.action == Action::LpConsistent;
            if let Some(pa) = &cmd.options.assign {
                let ok = if lp {
                    is_lp_consistent_partial(&constraints, pa)
                } else {
                    is_consistent_partial(&constraints, pa, &universe).map_err(Failure::solver)?
                };
                let word = if lp { "LP-consistent" } else { "consistent" };
                out.line(format!("{pa} is {}{word}", if ok { "" } else { "not " }));
                out.field("assignment", json!(pa.to_string()));
                out.field("result", json!(ok));
            } else {
                let (ok, witness) = if lp {
                    is_lp_consistent_set(&constraints, &universe)
                } else {
                    is_consistent_set(&constraints, &universe)
                }
                .map_err(Failure::solver)?;
                let word = if lp { "LP-consistent" } else { "consistent" };
                match &witness {
                    Some(w) => out.line(format!("not {word}; witness {w}")),
                    None => out.line(word),
                }
                out.field("result", json!(ok));
                out.field("witness", witness.map_or(Value::Null, |w| json!(w.to_string())));
            }
        }
        _ => unreachable!("parse_args only admits clause actions here"),
    }
    Ok(())
}

fn values_text(values: &BTreeMap<String, Rational>) -> String {
    values.iter().map(|(v, x)| format!("{v}={x}")).collect::<Vec<_>>().join(" ")
}

fn values_json(values: &BTreeMap<String, Rational>) -> Value {
    Value::Object(values.iter().map(|(v, x)| (v.clone(), q(x))).collect())
}

fn run_lp(cmd: &Command, out: &mut Out) -> Result<(), Failure> {
    let file: LpFile = parse_with(&cmd.input, parse_lp)?;
    if cmd.action == Action::Milp {
        let result = milp_solve(&file.problem, &file.integral).map_err(Failure::solver)?;
        let status = match result.status {
            MilpStatus::Optimal => "optimal",
            MilpStatus::Infeasible => "infeasible",
        };
        out.line(format!("status {status}"));
        out.field("status", json!(status));
        if let Some(value) = &result.value {
            out.line(format!("value {value} ({})", dec(value)));
            out.line(format!("values {}", values_text(&result.values)));
            out.field("value", q(value));
            out.field("values", values_json(&result.values));
        }
        out.line(format!("nodes {}", result.node_count));
        out.field("nodes", json!(result.node_count));
        return Ok(());
    }
    let result = lp_solve(&file.problem).map_err(Failure::solver)?;
    let status = match result.status {
        LpStatus::Optimal => "optimal",
        LpStatus::Infeasible => "infeasible",
        LpStatus::Unbounded => "unbounded",
    };
    out.line(format!("status {status}"));
    out.field("status", json!(status));
    if let Some(value) = &result.value {
        let duals: Vec<String> = result.duals.iter().map(ToString::to_string).collect();
        out.line(format!("value {value} ({})", dec(value)));
        out.line(format!("primal {}", values_text(&result.primal)));
        out.line(format!("duals {}", duals.join(" ")));
        out.line(format!("reduced {}", values_text(&result.reduced_costs)));
        out.field("value", q(value));
        out.field("primal", values_json(&result.primal));
        out.field("duals", json!(duals));
        out.field("reduced_costs", values_json(&result.reduced_costs));
    }
    if let Some(cert) = &result.farkas {
        let rows: Vec<String> = cert.rows.iter().map(ToString::to_string).collect();
        out.line(format!("farkas rows {}", rows.join(" ")));
        if !cert.lower.is_empty() {
            out.line(format!("farkas lower {}", values_text(&cert.lower)));
        }
        if !cert.upper.is_empty() {
            out.line(format!("farkas upper {}", values_text(&cert.upper)));
        }
        out.field("farkas_rows", json!(rows));
        out.field("farkas_lower", values_json(&cert.lower));
        out.field("farkas_upper", values_json(&cert.upper));
    }
    Ok(())
}

fn run_dd(cmd: &Command, out: &mut Out) -> Result<(), Failure> {
    let inst: SequencingInstance = parse_with(&cmd.input, parse_sequencing)?;
    let model = job_sequencing_model(&inst);
    out.field("objective", json!(inst.objective.name()));
    let optimum = |out: &mut Out, word: &str, value: &Rational, seq: &[i64]| {
        out.line(format!("{word} {value}"));
        out.line(format!("sequence {}", labels(seq)));
        out.field(word, q(value));
        out.field("sequence", json!(seq));
    };
    match cmd.action {
        Action::Exact => {
            let d = compile_exact(&model, DEFAULT_EXACT_CAP).map_err(Failure::solver)?;
            let (value, seq) = shortest_path(&d).map_err(Failure::solver)?;
            optimum(out, "optimum", &value, &seq);
            out.line(format!("nodes {} arcs {} paths {}", d.node_count(), d.arc_count(), d.path_count()));
            out.field("nodes", json!(d.node_count()));
            out.field("paths", json!(d.path_count().to_string()));
        }
        Action::Relax => {
            let width = cmd.options.width.expect("checked by parse_args");
            let (d, bound) = compile_relaxed(&model, width).map_err(Failure::solver)?;
            out.line(format!("lower bound {bound}"));
            out.line(format!("width {} nodes {} exact {}", d.width(), d.node_count(), d.is_exact()));
            out.field("lower_bound", q(&bound));
            out.field("exact", json!(d.is_exact()));
        }
        Action::Restrict => {
            let width = cmd.options.width.expect("checked by parse_args");
            let (d, best) = compile_restricted(&model, width).map_err(Failure::solver)?;
            match best {
                Some((value, seq)) => optimum(out, "upper_bound", &value, &seq),
                None => out.line("no feasible path"),
            }
            out.line(format!("width {} nodes {}", d.width(), d.node_count()));
        }
        Action::Bnb => {
            let width = cmd.options.width.expect("checked by parse_args");
            let result = solve_bnb(&model, width).map_err(Failure::solver)?;
            let mut log = Vec::new();
            for e in &result.log {
                let outcome = match &e.outcome {
                    BnbOutcome::Pruned => "pruned".to_string(),
                    BnbOutcome::Solved => "solved".to_string(),
                    BnbOutcome::Infeasible => "infeasible".to_string(),
                    BnbOutcome::Branched(k) => format!("branched {k}"),
                };
                let inc = e.incumbent.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
                out.line(format!("node layer {} state {} bound {} incumbent {inc} {outcome}", e.layer, e.state, e.bound));
                log.push(json!({"layer": e.layer, "state": e.state, "bound": e.bound.to_string(), "incumbent": inc, "outcome": outcome}));
            }
            out.field("log", Value::Array(log));
            match &result.value {
                Some(value) => optimum(out, "optimum", value, &result.solution),
                None => out.line("infeasible"),
            }
        }
        Action::NearOpt => {
            let d = compile_exact(&model, DEFAULT_EXACT_CAP).map_err(Failure::solver)?;
            let delta = cmd.options.delta.clone().unwrap_or_else(|| Rational::from_integer(0.into()));
            let paths = enumerate_near_optimal(&d, Some(&delta)).map_err(Failure::solver)?;
            for (seq, cost) in &paths {
                out.line(format!("{cost}: {}", labels(seq)));
            }
            out.line(format!("{} sequences within {delta}", paths.len()));
            out.field(
                "paths",
                Value::Array(paths.iter().map(|(s, c)| json!({"sequence": s, "cost": c.to_string()})).collect()),
            );
        }
        Action::Dot => {
            let d = match cmd.options.width {
                Some(w) => compile_relaxed(&model, w).map_err(Failure::solver)?.0,
                None => compile_exact(&model, DEFAULT_EXACT_CAP).map_err(Failure::solver)?,
            };
            let dot = export_dot(&d);
            out.field("dot", json!(dot));
            out.line(dot.trim_end());
        }
        _ => unreachable!("parse_args only admits dd actions here"),
    }
    Ok(())
}

fn run_lbbd(cmd: &Command, out: &mut Out) -> Result<(), Failure> {
    let inst = parse_with(&cmd.input, parse_scheduling)?;
    let mode = cmd.options.mode.unwrap_or(LbbdMode::Iterative);
    let result = solve_lbbd(&inst, mode).map_err(Failure::solver)?;
    for t in &result.trace {
        out.line(t.to_string());
    }
    out.field(
        "trace",
        Value::Array(
            result
                .trace
                .iter()
                .map(|t| json!({"iteration": t.iteration, "lower_bound": t.lower_bound.to_string(), "upper_bound": t.upper_bound, "cuts": t.cuts_added}))
                .collect(),
        ),
    );
    out.field("cuts", json!(result.cuts.len()));
    let Some(makespan) = result.makespan else {
        out.line("infeasible: some job fits no facility");
        out.field("makespan", Value::Null);
        return Ok(());
    };
    out.line(format!("makespan {makespan}"));
    let assignment: Vec<usize> = result.assignment.iter().map(|i| i + 1).collect();
    out.line(format!("assignment {}", assignment.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")));
    for s in &result.schedules {
        let starts: Vec<String> = s.starts.iter().map(|(j, t)| format!("{}@{t}", j + 1)).collect();
        out.line(format!("facility {} makespan {} starts {}", s.facility + 1, s.makespan, starts.join(" ")));
    }
    out.field("makespan", json!(makespan));
    out.field("assignment", json!(assignment));
    Ok(())
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use psicalc::algebra::check_hypotheses;
use psicalc::bisingular::{
    apply_operator_1d, apply_operator_2d, principal_symbol, BisingularData,
};
use psicalc::dsl::{
    build_unchecked, evaluate, load_session, parse, parse_spec, to_element, to_symbol, EvalError,
    LoadError, ParseError, Session, Value,
};
use psicalc::error::Error;
use psicalc::instances::{torus4, TrigPoly};
use psicalc::json::{
    element_json, error_json, report_json, symbol1d_json, symbol2d_json,
    trig_poly_json,
};
use psicalc::scalar::GaussianRational;
use psicalc::symbols::Floor;

/// Exact calculus for formal twisted pseudodifferential symbols: products,
/// commutators, noncommutative residues, hypothesis checks and operator
/// application, as JSON on standard output.
#[derive(Parser)]
#[command(name = "psicalc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two symbol expressions.
    Mul {
        /// Context file (JSON).
        #[arg(long)]
        ctx: PathBuf,
        /// Truncation floor override, e.g. "-8" or "-8,-6".
        #[arg(long)]
        floor: Option<String>,
        expr1: String,
        expr2: String,
    },
    /// Commutator of two symbol expressions.
    Commutator {
        #[arg(long)]
        ctx: PathBuf,
        #[arg(long)]
        floor: Option<String>,
        expr1: String,
        expr2: String,
    },
    /// Noncommutative residue of a symbol expression.
    Res {
        #[arg(long)]
        ctx: PathBuf,
        /// Trace selector: "11".."22" on torus4, "1"/"2" on circle2, "w" on
        /// the quantum torus.
        #[arg(long)]
        trace: Option<String>,
        #[arg(long)]
        floor: Option<String>,
        expr: String,
    },
    /// Run the hypothesis checker on a context file and report each law.
    Check {
        #[arg(long)]
        ctx: PathBuf,
    },
    /// Apply an exact symbol to a trigonometric polynomial.
    Apply {
        #[arg(long)]
        ctx: PathBuf,
        /// The operand as a JSON frequency map, inline or a file path:
        /// {"0": "1", "3": "1/2+1*i"} (circle) or {"1,-2": "2"} (torus).
        #[arg(long)]
        u: String,
        expr: String,
    },
    /// Principal symbol of a bi-singular operator from its four kernel
    /// restrictions; emits the four quadrant components.
    Principal {
        #[arg(long, default_value = "0")]
        b0: String,
        #[arg(long, default_value = "0")]
        b1: String,
        #[arg(long, default_value = "0")]
        b2: String,
        #[arg(long, default_value = "0")]
        b12: String,
    },
}

struct CliError {
    code: i32,
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            kind,
            message: message.into(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::new(2, "parse", e.to_string())
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Hypothesis(inner) => CliError::new(3, "hypothesis", inner.to_string()),
            other => CliError::new(3, "context", other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::new(3, "type", e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UncertifiedResidue { .. } | Error::InexactSymbol { .. } => {
                CliError::new(4, "uncertified", e.to_string())
            }
            other => CliError::new(3, "context", other.to_string()),
        }
    }
}

struct Output {
    doc: Json,
    code: i32,
}

impl Output {
    fn ok(doc: Json) -> Self {
        Output { doc, code: 0 }
    }
}

fn apply_floor_override(session: &mut Session, floor: &Option<String>) -> Result<(), CliError> {
    let Some(text) = floor else { return Ok(()) };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let dims = session.ctx.num_deltas();
    if parts.is_empty() || parts.len() > dims {
        return Err(CliError::new(
            3,
            "context",
            format!("--floor takes 1..={dims} comma-separated integers"),
        ));
    }
    let mut values = Vec::new();
    for p in &parts {
        let v: i64 = p.parse().map_err(|_| {
            CliError::new(3, "context", format!("bad floor value {p:?}"))
        })?;
        values.push(v);
    }
    session.floors[0] = Floor::At(values[0]);
    session.floors[1] = Floor::At(*values.get(1).unwrap_or(&values[0]));
    Ok(())
}

fn parse_trace(session: &Session, text: &str) -> Result<usize, CliError> {
    let ctx = &session.ctx;
    let err = || {
        CliError::new(
            3,
            "context",
            format!(
                "unknown trace {text:?} for context {}; available: {}",
                ctx.label(),
                (0..ctx.num_traces())
                    .map(|t| ctx.trace_info(t).name.clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        )
    };
    let lookup: &[(&str, usize)] = if ctx.is_torus4() {
        &[("11", 0), ("12", 1), ("21", 2), ("22", 3)]
    } else if ctx.is_circle2() {
        &[("1", 0), ("2", 1)]
    } else {
        &[("w", 0), ("W", 0), ("1", 0)]
    };
    lookup
        .iter()
        .find(|(name, _)| *name == text)
        .map(|(_, idx)| *idx)
        .filter(|idx| *idx < ctx.num_traces())
        .ok_or_else(err)
}

/// Accepts `res(expr)`, `Res(expr)` and `res_sigma(expr)` as top-level sugar
/// in the `res` command, with an optional trailing `, t=...` trace selector.
/// Returns the inner expression, the selector, and whether the twisted
/// variant was requested explicitly.
fn strip_residue_wrapper(text: &str) -> (String, Option<String>, Option<bool>) {
    let trimmed = text.trim();
    for (prefix, twisted) in [("res_sigma(", true), ("res(", false), ("Res(", false)] {
        if let Some(rest) = trimmed.strip_prefix(prefix) {
            if let Some(inner) = rest.strip_suffix(')') {
                // peel a top-level trailing ", t=..." if present
                let mut depth = 0i32;
                let mut split = None;
                for (idx, c) in inner.char_indices() {
                    match c {
                        '(' | '[' => depth += 1,
                        ')' | ']' => depth -= 1,
                        ',' if depth == 0 => split = Some(idx),
                        _ => {}
                    }
                }
                if let Some(idx) = split {
                    let tail = inner[idx + 1..].trim();
                    if let Some(value) = tail.strip_prefix("t=").or_else(|| tail.strip_prefix("t =")) {
                        let cleaned = value.trim().trim_matches('"').trim_matches('\'');
                        return (
                            inner[..idx].to_string(),
                            Some(cleaned.to_string()),
                            Some(twisted),
                        );
                    }
                }
                return (inner.to_string(), None, Some(twisted));
            }
        }
    }
    (trimmed.to_string(), None, None)
}

fn parse_u_map(session: &Session, text: &str) -> Result<TrigPoly, CliError> {
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text)
            .map_err(|e| CliError::new(3, "context", format!("cannot read operand file: {e}")))?
    };
    let map: std::collections::BTreeMap<String, String> = serde_json::from_str(&body)
        .map_err(|e| CliError::new(3, "context", format!("malformed operand JSON: {e}")))?;
    let dim: u8 = if session.ctx.is_circle2() { 1 } else { 2 };
    let mut terms = Vec::new();
    for (key, value) in map {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        if parts.len() != usize::from(dim) {
            return Err(CliError::new(
                3,
                "context",
                format!("frequency key {key:?} needs {dim} integer(s)"),
            ));
        }
        let mut freq = [0i64; 2];
        for (i, p) in parts.iter().enumerate() {
            freq[i] = p.parse().map_err(|_| {
                CliError::new(3, "context", format!("bad frequency {p:?} in key {key:?}"))
            })?;
        }
        let coeff: GaussianRational = value
            .parse()
            .map_err(|e| CliError::new(3, "context", format!("bad coefficient {value:?}: {e}")))?;
        terms.push((freq, coeff));
    }
    Ok(TrigPoly::from_terms(dim, terms))
}

fn eval_symbol(session: &Session, text: &str) -> Result<Value, CliError> {
    let expr = parse(text)?;
    let value = evaluate(&expr, session)?;
    Ok(to_symbol(session, value)?)
}

fn plain_function(session: &Session, text: &str) -> Result<TrigPoly, CliError> {
    let expr = parse(text)?;
    let value = evaluate(&expr, session)?;
    let element = to_element(session, value)?;
    let tuple = element
        .as_tuple()
        .expect("torus context elements are tuples");
    if !tuple.is_diagonal() {
        return Err(CliError::new(
            3,
            "type",
            "kernel restrictions are plain functions; component-pinned modes are not allowed",
        ));
    }
    Ok(tuple.component(0).clone())
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Mul {
            ctx,
            floor,
            expr1,
            expr2,
        } => {
            let mut session = load_session(&ctx)?;
            apply_floor_override(&mut session, &floor)?;
            let lhs = eval_symbol(&session, &expr1)?;
            let rhs = eval_symbol(&session, &expr2)?;
            let doc = match (lhs, rhs) {
                (Value::Sym1(a), Value::Sym1(b)) => symbol1d_json(&a.mul(&b)),
                (Value::Sym2(a), Value::Sym2(b)) => symbol2d_json(&a.mul(&b)),
                _ => unreachable!(),
            };
            Ok(Output::ok(doc))
        }
        Command::Commutator {
            ctx,
            floor,
            expr1,
            expr2,
        } => {
            let mut session = load_session(&ctx)?;
            apply_floor_override(&mut session, &floor)?;
            let lhs = eval_symbol(&session, &expr1)?;
            let rhs = eval_symbol(&session, &expr2)?;
            let doc = match (lhs, rhs) {
                (Value::Sym1(a), Value::Sym1(b)) => symbol1d_json(&a.commutator(&b)),
                (Value::Sym2(a), Value::Sym2(b)) => symbol2d_json(&a.commutator(&b)),
                _ => unreachable!(),
            };
            Ok(Output::ok(doc))
        }
        Command::Res {
            ctx,
            trace,
            floor,
            expr,
        } => {
            let mut session = load_session(&ctx)?;
            apply_floor_override(&mut session, &floor)?;
            let (inner, wrapper_trace, wrapper_twisted) = strip_residue_wrapper(&expr);
            let trace_text = wrapper_trace.or(trace);
            let trace_index = match trace_text {
                Some(t) => parse_trace(&session, &t)?,
                None => 0,
            };
            let value = eval_symbol(&session, &inner)?;
            let scalar = match value {
                Value::Sym1(s) => {
                    let twisted = wrapper_twisted.unwrap_or_else(|| {
                        session.ctx.trace_info(trace_index).kind.twist_power == 1
                    });
                    if twisted {
                        s.residue_twisted(trace_index)?
                    } else {
                        s.residue(trace_index)?
                    }
                }
                Value::Sym2(s) => s.residue(trace_index)?,
                _ => unreachable!(),
            };
            Ok(Output::ok(json!({ "value": scalar.to_string() })))
        }
        Command::Check { ctx } => {
            let text = std::fs::read_to_string(&ctx)
                .map_err(|e| CliError::new(3, "context", format!("cannot read context file: {e}")))?;
            let spec = parse_spec(&text)?;
            let context = build_unchecked(&spec)?;
            let report = check_hypotheses(&context, &context.default_sample());
            let code = if report.all_passed() { 0 } else { 3 };
            Ok(Output {
                doc: report_json(&report),
                code,
            })
        }
        Command::Apply { ctx, u, expr } => {
            let session = load_session(&ctx)?;
            if session.ctx.is_qtorus() {
                return Err(CliError::new(
                    3,
                    "context",
                    "apply works on the trig-polynomial contexts (circle2, torus4)",
                ));
            }
            let operand = parse_u_map(&session, &u)?;
            let value = eval_symbol(&session, &expr)?;
            let result = match value {
                Value::Sym1(s) => apply_operator_1d(&s, &operand)?,
                Value::Sym2(s) => apply_operator_2d(&s, &operand)?,
                _ => unreachable!(),
            };
            Ok(Output::ok(trig_poly_json(&result)))
        }
        Command::Principal { b0, b1, b2, b12 } => {
            let session = Session::new(torus4());
            let data = BisingularData::new(
                plain_function(&session, &b0)?,
                plain_function(&session, &b1)?,
                plain_function(&session, &b2)?,
                plain_function(&session, &b12)?,
            );
            let element = principal_symbol(&data);
            Ok(Output::ok(json!({
                "components": element_json(&element),
                "component_order": ["11", "12", "21", "22"],
            })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Output { doc, code }) => {
            println!("{doc}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            println!("{}", error_json(e.code, e.kind, &e.message));
            ExitCode::from(e.code as u8)
        }
    }
}

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::eval::{eval_qtorus_element, evaluate, to_element, Session};
use super::parser::parse;
use crate::algebra::Context;
use crate::instances;
use crate::scalar::cyclo_field;
use crate::symbols::Floor;

/// The JSON shape of a context file.
///
/// ```json
/// {
///   "kind": "qtorus",
///   "dimension": 2,
///   "parameters": { "N": 2, "r": 1, "s": 1, "x1": "U^2", "x2": "V^2" },
///   "elements": { "a": "U", "b": "U^-1" },
///   "floors": [-8, -8]
/// }
/// ```
///
/// `kind` is one of `circle2`, `torus4`, `qtorus`. `dimension` (quantum
/// torus only, default 2) selects the one-delta restriction with the
/// once-twisted trace. `elements` binds names to element-valued
/// expressions. `floors` overrides the default truncation floors of -8.
#[derive(Debug, Clone, Deserialize)]
pub struct ContextFileSpec {
    pub kind: String,
    #[serde(default)]
    pub dimension: Option<u8>,
    #[serde(default)]
    pub parameters: Option<QTorusParams>,
    #[serde(default)]
    pub elements: BTreeMap<String, String>,
    #[serde(default)]
    pub floors: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct QTorusParams {
    #[serde(rename = "N")]
    pub n: u32,
    pub r: i64,
    pub s: i64,
    pub x1: String,
    pub x2: String,
}

/// Errors while loading a context file, kept separate so the command-line
/// front end can map them to exit codes.
#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Json(String),
    Spec(String),
    Hypothesis(crate::error::Error),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Io(m) => write!(f, "cannot read context file: {m}"),
            LoadError::Json(m) => write!(f, "malformed context file: {m}"),
            LoadError::Spec(m) => write!(f, "invalid context file: {m}"),
            LoadError::Hypothesis(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

fn qtorus_parts(params: &QTorusParams) -> Result<(u32, i64, i64, instances::QTorusElement, instances::QTorusElement), LoadError> {
    if params.n == 0 {
        return Err(LoadError::Spec("N must be positive".into()));
    }
    let field = cyclo_field(params.n);
    let parse_param = |name: &str, text: &str| {
        let expr = parse(text)
            .map_err(|e| LoadError::Spec(format!("parameter {name}: {e}")))?;
        eval_qtorus_element(&expr, &field)
            .map_err(|e| LoadError::Spec(format!("parameter {name}: {e}")))
    };
    let x1 = parse_param("x1", &params.x1)?;
    let x2 = parse_param("x2", &params.x2)?;
    Ok((params.n, params.r, params.s, x1, x2))
}

/// Builds the raw context described by the spec without running the
/// hypothesis checker; `hypotheses_checked` stays false. Used by the
/// `check` command, which wants a report even for invalid data.
pub fn build_unchecked(spec: &ContextFileSpec) -> Result<Context, LoadError> {
    match spec.kind.as_str() {
        "circle2" => Ok(instances::circle2_unchecked()),
        "torus4" => Ok(instances::torus4_unchecked()),
        "qtorus" => {
            let params = spec
                .parameters
                .as_ref()
                .ok_or_else(|| LoadError::Spec("qtorus needs \"parameters\"".into()))?;
            let (n, r, s, x1, x2) = qtorus_parts(params)?;
            let one_dimensional = spec.dimension.unwrap_or(2) == 1;
            Ok(instances::quantum_torus_unchecked(
                n,
                r,
                s,
                x1,
                x2,
                one_dimensional,
            ))
        }
        other => Err(LoadError::Spec(format!(
            "unknown context kind {other:?}; expected circle2, torus4 or qtorus"
        ))),
    }
}

fn floors_from_spec(spec: &ContextFileSpec, dims: usize) -> Result<[Floor; 2], LoadError> {
    match &spec.floors {
        None => Ok([Floor::At(-8), Floor::At(-8)]),
        Some(values) => {
            if values.is_empty() || values.len() > dims.max(1) {
                return Err(LoadError::Spec(format!(
                    "floors must list 1..={dims} value(s)"
                )));
            }
            let f1 = Floor::At(values[0]);
            let f2 = Floor::At(*values.get(1).unwrap_or(&values[0]));
            Ok([f1, f2])
        }
    }
}

/// Loads and verifies a context file: builds the context, runs the
/// hypothesis checker, evaluates the named element bindings, and returns a
/// ready session.
pub fn load_session_from_spec(spec: &ContextFileSpec) -> Result<Session, LoadError> {
    let ctx = build_unchecked(spec)?
        .verified()
        .map_err(LoadError::Hypothesis)?;
    let floors = floors_from_spec(spec, ctx.num_deltas())?;
    let mut session = Session::new(ctx).with_floors(floors);
    for (name, text) in &spec.elements {
        if matches!(name.as_str(), "i" | "q" | "e" | "xi" | "xi1" | "xi2" | "U" | "V" | "unit" | "one") {
            return Err(LoadError::Spec(format!(
                "element name {name:?} collides with a built-in"
            )));
        }
        let expr =
            parse(text).map_err(|e| LoadError::Spec(format!("element {name:?}: {e}")))?;
        let value = evaluate(&expr, &session)
            .map_err(|e| LoadError::Spec(format!("element {name:?}: {e}")))?;
        let element = to_element(&session, value)
            .map_err(|e| LoadError::Spec(format!("element {name:?}: {e}")))?;
        session.bindings.insert(name.clone(), element);
    }
    Ok(session)
}

pub fn parse_spec(text: &str) -> Result<ContextFileSpec, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Json(e.to_string()))
}

pub fn load_session(path: &Path) -> Result<Session, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(e.to_string()))?;
    load_session_from_spec(&parse_spec(&text)?)
}

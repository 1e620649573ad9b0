//! The expression language: a fixed grammar with a recursive-descent
//! parser, an evaluator against a loaded context, and JSON context files.

mod ast;
mod context_file;
mod eval;
mod parser;

pub use ast::{Expr, XiVar};
pub use context_file::{
    build_unchecked, load_session, load_session_from_spec, parse_spec, ContextFileSpec, LoadError,
    QTorusParams,
};
pub use eval::{eval_qtorus_element, evaluate, to_element, to_symbol, EvalError, Session, Value};
pub use parser::{parse, ParseError};

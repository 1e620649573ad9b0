use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::ast::{Expr, XiVar};
use crate::algebra::Context;
use crate::instances::{quadrant_index, QTorusElement, TrigPoly, TupleElement};
use crate::scalar::{CycloField, GaussianRational, Scalar};
use crate::symbols::{Floor, Symbol1D, Symbol2D};
use crate::Element;

/// A context with its named element bindings and default truncation floors,
/// as loaded from a context file.
#[derive(Clone)]
pub struct Session {
    pub ctx: Arc<Context>,
    pub bindings: BTreeMap<String, Element>,
    pub floors: [Floor; 2],
}

impl Session {
    pub fn new(ctx: Arc<Context>) -> Self {
        Session {
            ctx,
            bindings: BTreeMap::new(),
            floors: [Floor::At(-8), Floor::At(-8)],
        }
    }

    pub fn with_floors(mut self, floors: [Floor; 2]) -> Self {
        self.floors = floors;
        self
    }
}

/// A type or context mismatch found while evaluating an expression.
#[derive(Clone, Debug)]
pub struct EvalError {
    pub message: String,
}

impl EvalError {
    fn new(message: impl Into<String>) -> Self {
        EvalError {
            message: message.into(),
        }
    }
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for EvalError {}

/// The result of evaluating an expression: a coefficient scalar, a base
/// algebra element, or a symbol of the context's dimensionality.
#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Scalar),
    Element(Element),
    Sym1(Symbol1D),
    Sym2(Symbol2D),
}

impl Value {
    fn level(&self) -> u8 {
        match self {
            Value::Scalar(_) => 0,
            Value::Element(_) => 1,
            Value::Sym1(_) | Value::Sym2(_) => 2,
        }
    }
}

/// Promotes a value to an algebra element: scalars scale the unit.
pub fn to_element(session: &Session, v: Value) -> Result<Element, EvalError> {
    match v {
        Value::Scalar(s) => Ok(session.ctx.one_element().scale(&s)),
        Value::Element(e) => Ok(e),
        Value::Sym1(_) | Value::Sym2(_) => {
            Err(EvalError::new("expected an element, found a symbol"))
        }
    }
}

/// Promotes a value to a symbol of the context's dimensionality.
pub fn to_symbol(session: &Session, v: Value) -> Result<Value, EvalError> {
    match v {
        Value::Sym1(_) | Value::Sym2(_) => Ok(v),
        other => {
            let e = to_element(session, other)?;
            if session.ctx.num_deltas() == 1 {
                Ok(Value::Sym1(Symbol1D::from_element(&session.ctx, e)))
            } else {
                Ok(Value::Sym2(Symbol2D::from_element(&session.ctx, e)))
            }
        }
    }
}

fn scalar_from_rational(session: &Session, r: crate::scalar::Rational) -> Scalar {
    match session.ctx.cyclo_field() {
        Some(field) => Scalar::Cyclotomic(field.from_rational(r)),
        None => Scalar::Gaussian(GaussianRational::from_rational(r)),
    }
}

fn basis_element(
    session: &Session,
    freq: &[i64],
    component: Option<(i64, i64)>,
) -> Result<Element, EvalError> {
    let ctx = &session.ctx;
    if ctx.is_qtorus() {
        return Err(EvalError::new(
            "basis literals e[..] are for trig-polynomial contexts; use U and V here",
        ));
    }
    let (len, dim) = if ctx.is_circle2() { (2, 1u8) } else { (4, 2u8) };
    if freq.len() != usize::from(dim) {
        return Err(EvalError::new(format!(
            "basis mode needs {dim} frequency component(s) in this context, got {}",
            freq.len()
        )));
    }
    let k = if dim == 1 {
        [freq[0], 0]
    } else {
        [freq[0], freq[1]]
    };
    let poly = TrigPoly::basis(dim, k);
    match component {
        None => Ok(Element::Tuple(TupleElement::diagonal(len, poly))),
        Some((s, t)) => {
            let index = if ctx.is_circle2() {
                if t != 1 || !(1..=2).contains(&s) {
                    return Err(EvalError::new(
                        "circle components are selected as @(1,1) or @(2,1)",
                    ));
                }
                (s - 1) as usize
            } else {
                if !(1..=2).contains(&s) || !(1..=2).contains(&t) {
                    return Err(EvalError::new("component indices must be 1 or 2"));
                }
                quadrant_index(s as u8, t as u8)
            };
            Ok(Element::Tuple(TupleElement::single(len, index, poly)))
        }
    }
}

fn xi_symbol(session: &Session, var: XiVar, exponent: i64) -> Result<Value, EvalError> {
    let ctx = &session.ctx;
    let dims = ctx.num_deltas();
    match (var, dims) {
        (XiVar::Xi, 1) => {
            let floor = if exponent < 0 {
                session.floors[0]
            } else {
                Floor::MinusInfinity
            };
            Ok(Value::Sym1(Symbol1D::xi_pow(ctx, exponent, floor)))
        }
        (XiVar::Xi1 | XiVar::Xi2, 2) => {
            let axis = if var == XiVar::Xi1 { 0 } else { 1 };
            let order = if axis == 0 { (exponent, 0) } else { (0, exponent) };
            let mut floors = (Floor::MinusInfinity, Floor::MinusInfinity);
            if exponent < 0 {
                if axis == 0 {
                    floors.0 = session.floors[0];
                } else {
                    floors.1 = session.floors[1];
                }
            }
            Ok(Value::Sym2(Symbol2D::xi_pow(ctx, order, floors)))
        }
        (XiVar::Xi, 2) => Err(EvalError::new(
            "this context is two-dimensional; use xi1 or xi2",
        )),
        (_, 1) => Err(EvalError::new(
            "this context is one-dimensional; use xi",
        )),
        _ => unreachable!(),
    }
}

fn value_pow(session: &Session, base: Value, exponent: i64) -> Result<Value, EvalError> {
    match base {
        Value::Scalar(s) => {
            if exponent >= 0 {
                let mut acc = scalar_from_rational(session, crate::scalar::Rational::one());
                for _ in 0..exponent {
                    acc = acc.mul(&s);
                }
                Ok(Value::Scalar(acc))
            } else {
                let inv = s
                    .inv()
                    .map_err(|e| EvalError::new(format!("scalar power failed: {e}")))?;
                value_pow(session, Value::Scalar(inv), -exponent)
            }
        }
        Value::Element(e) => {
            if exponent >= 0 {
                let mut acc = session.ctx.one_element();
                for _ in 0..exponent {
                    acc = acc.mul(&e);
                }
                Ok(Value::Element(acc))
            } else {
                let inv = e.inverse_monomial().map_err(EvalError::new)?;
                value_pow(session, Value::Element(inv), -exponent)
            }
        }
        Value::Sym1(s) => {
            if exponent >= 0 {
                Ok(Value::Sym1(s.pow(exponent as u32)))
            } else {
                Err(EvalError::new(
                    "negative powers are only available on xi and invertible monomials",
                ))
            }
        }
        Value::Sym2(s) => {
            if exponent >= 0 {
                Ok(Value::Sym2(s.pow(exponent as u32)))
            } else {
                Err(EvalError::new(
                    "negative powers are only available on xi1/xi2 and invertible monomials",
                ))
            }
        }
    }
}

fn binary(
    session: &Session,
    lhs: Value,
    rhs: Value,
    op: fn(&Session, Value, Value) -> Result<Value, EvalError>,
) -> Result<Value, EvalError> {
    op(session, lhs, rhs)
}

fn add_values(session: &Session, lhs: Value, rhs: Value) -> Result<Value, EvalError> {
    let level = lhs.level().max(rhs.level());
    match level {
        0 => {
            let (Value::Scalar(a), Value::Scalar(b)) = (lhs, rhs) else {
                unreachable!()
            };
            Ok(Value::Scalar(a.add(&b)))
        }
        1 => {
            let a = to_element(session, lhs)?;
            let b = to_element(session, rhs)?;
            Ok(Value::Element(a.add(&b)))
        }
        _ => match (to_symbol(session, lhs)?, to_symbol(session, rhs)?) {
            (Value::Sym1(a), Value::Sym1(b)) => Ok(Value::Sym1(a.add(&b))),
            (Value::Sym2(a), Value::Sym2(b)) => Ok(Value::Sym2(a.add(&b))),
            _ => unreachable!("one context yields one symbol dimensionality"),
        },
    }
}

fn mul_values(session: &Session, lhs: Value, rhs: Value) -> Result<Value, EvalError> {
    // scalars act by scaling whatever they meet
    match (&lhs, &rhs) {
        (Value::Scalar(s), _) => {
            return Ok(match rhs {
                Value::Scalar(b) => Value::Scalar(s.mul(&b)),
                Value::Element(e) => Value::Element(e.scale(s)),
                Value::Sym1(sym) => Value::Sym1(sym.scale(s)),
                Value::Sym2(sym) => Value::Sym2(sym.scale(s)),
            });
        }
        (_, Value::Scalar(s)) => {
            let s = s.clone();
            return Ok(match lhs {
                Value::Scalar(_) => unreachable!(),
                Value::Element(e) => Value::Element(e.scale(&s)),
                Value::Sym1(sym) => Value::Sym1(sym.scale(&s)),
                Value::Sym2(sym) => Value::Sym2(sym.scale(&s)),
            });
        }
        _ => {}
    }
    if lhs.level() == 1 && rhs.level() == 1 {
        let a = to_element(session, lhs)?;
        let b = to_element(session, rhs)?;
        return Ok(Value::Element(a.mul(&b)));
    }
    match (to_symbol(session, lhs)?, to_symbol(session, rhs)?) {
        (Value::Sym1(a), Value::Sym1(b)) => Ok(Value::Sym1(a.mul(&b))),
        (Value::Sym2(a), Value::Sym2(b)) => Ok(Value::Sym2(a.mul(&b))),
        _ => unreachable!("one context yields one symbol dimensionality"),
    }
}

fn neg_value(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(s.neg()),
        Value::Element(e) => Value::Element(e.neg()),
        Value::Sym1(s) => Value::Sym1(s.neg()),
        Value::Sym2(s) => Value::Sym2(s.neg()),
    }
}

/// Evaluates an expression against a session. Type checks are dynamic:
/// `xi2` in a one-dimensional context, `U` on a torus context, and similar
/// mismatches are reported as [`EvalError`].
pub fn evaluate(expr: &Expr, session: &Session) -> Result<Value, EvalError> {
    let ctx = &session.ctx;
    match expr {
        Expr::Number(r) => Ok(Value::Scalar(scalar_from_rational(session, r.clone()))),
        Expr::ImagUnit => {
            if ctx.is_qtorus() {
                Err(EvalError::new(
                    "i is not available in a cyclotomic-coefficient context; use powers of q",
                ))
            } else {
                Ok(Value::Scalar(Scalar::Gaussian(GaussianRational::i())))
            }
        }
        Expr::RootOfUnity => match ctx.cyclo_field() {
            Some(field) => Ok(Value::Scalar(Scalar::Cyclotomic(field.generator()))),
            None => Err(EvalError::new(
                "q is only available in the quantum-torus context",
            )),
        },
        Expr::GenU | Expr::GenV => match ctx.cyclo_field() {
            Some(field) => {
                let e = if matches!(expr, Expr::GenU) {
                    QTorusElement::generator_u(field)
                } else {
                    QTorusElement::generator_v(field)
                };
                Ok(Value::Element(Element::QTorus(e)))
            }
            None => Err(EvalError::new(
                "U and V are only available in the quantum-torus context",
            )),
        },
        Expr::Xi(var) => xi_symbol(session, *var, 1),
        Expr::Ident(name) => {
            if let Some(e) = session.bindings.get(name) {
                return Ok(Value::Element(e.clone()));
            }
            match name.as_str() {
                "unit" | "one" => Ok(Value::Element(ctx.one_element())),
                _ => Err(EvalError::new(format!(
                    "unknown identifier {name:?}; bind it in the context file"
                ))),
            }
        }
        Expr::Basis { freq, component } => {
            Ok(Value::Element(basis_element(session, freq, *component)?))
        }
        Expr::Pow(base, exponent) => {
            if let Expr::Xi(var) = **base {
                return xi_symbol(session, var, *exponent);
            }
            let b = evaluate(base, session)?;
            value_pow(session, b, *exponent)
        }
        Expr::Neg(inner) => Ok(neg_value(evaluate(inner, session)?)),
        Expr::Add(a, b) => {
            let lhs = evaluate(a, session)?;
            let rhs = evaluate(b, session)?;
            binary(session, lhs, rhs, add_values)
        }
        Expr::Sub(a, b) => {
            let lhs = evaluate(a, session)?;
            let rhs = neg_value(evaluate(b, session)?);
            binary(session, lhs, rhs, add_values)
        }
        Expr::Mul(a, b) => {
            let lhs = evaluate(a, session)?;
            let rhs = evaluate(b, session)?;
            binary(session, lhs, rhs, mul_values)
        }
        Expr::Commutator(a, b) => {
            let lhs = to_symbol(session, evaluate(a, session)?)?;
            let rhs = to_symbol(session, evaluate(b, session)?)?;
            match (lhs, rhs) {
                (Value::Sym1(x), Value::Sym1(y)) => Ok(Value::Sym1(x.commutator(&y))),
                (Value::Sym2(x), Value::Sym2(y)) => Ok(Value::Sym2(x.commutator(&y))),
                _ => unreachable!("one context yields one symbol dimensionality"),
            }
        }
    }
}

/// Evaluates the restricted expression language available inside quantum
/// torus context parameters (`x1`, `x2`): rationals, `q`, `U`, `V`, sums,
/// products, negation and powers. No xi, no bindings.
pub fn eval_qtorus_element(expr: &Expr, field: &Arc<CycloField>) -> Result<QTorusElement, String> {
    match expr {
        Expr::Number(r) => Ok(QTorusElement::from_scalar(field, field.from_rational(r.clone()))),
        Expr::RootOfUnity => Ok(QTorusElement::from_scalar(field, field.generator())),
        Expr::GenU => Ok(QTorusElement::generator_u(field)),
        Expr::GenV => Ok(QTorusElement::generator_v(field)),
        Expr::Neg(inner) => Ok(eval_qtorus_element(inner, field)?.neg()),
        Expr::Add(a, b) => Ok(eval_qtorus_element(a, field)?.add(&eval_qtorus_element(b, field)?)),
        Expr::Sub(a, b) => Ok(eval_qtorus_element(a, field)?.sub(&eval_qtorus_element(b, field)?)),
        Expr::Mul(a, b) => Ok(eval_qtorus_element(a, field)?.mul(&eval_qtorus_element(b, field)?)),
        Expr::Pow(base, exponent) => {
            let b = eval_qtorus_element(base, field)?;
            if *exponent >= 0 {
                let mut acc = QTorusElement::one(field);
                for _ in 0..*exponent {
                    acc = acc.mul(&b);
                }
                Ok(acc)
            } else {
                let inv = b.inverse_monomial()?;
                let mut acc = QTorusElement::one(field);
                for _ in 0..exponent.unsigned_abs() {
                    acc = acc.mul(&inv);
                }
                Ok(acc)
            }
        }
        other => Err(format!(
            "expression form {other} is not allowed in quantum-torus parameters"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse;
    use crate::instances::{circle2, quantum_torus_default, torus4};

    fn eval_torus(text: &str) -> Result<Value, EvalError> {
        let session = Session::new(torus4());
        evaluate(&parse(text).unwrap(), &session)
    }

    #[test]
    fn xi_product_cancels_up_to_floor() {
        let v = eval_torus("xi1*xi1^-1").unwrap();
        let Value::Sym2(s) = v else { panic!("expected a 2d symbol") };
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coefficient_or_zero((0, 0)), s.context().one_element());
        // the negative-power atom was floored at the session default
        assert_eq!(s.floors().0, Floor::At(-7));
        assert_eq!(s.floors().1, Floor::MinusInfinity);
    }

    #[test]
    fn named_elements_resolve_from_bindings() {
        let mut session = Session::new(torus4());
        session
            .bindings
            .insert("a".into(), Element::Tuple(TupleElement::one(4, 2)));
        let v = evaluate(&parse("a").unwrap(), &session).unwrap();
        match v {
            Value::Element(e) => assert_eq!(e, session.ctx.one_element()),
            other => panic!("expected element, got {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatches_are_type_errors() {
        assert!(eval_torus("xi").is_err());
        let session = Session::new(circle2());
        assert!(evaluate(&parse("xi2").unwrap(), &session).is_err());
        assert!(evaluate(&parse("xi").unwrap(), &session).is_ok());
    }

    #[test]
    fn quantum_generators_and_scalars() {
        let session = Session::new(quantum_torus_default());
        let v = evaluate(&parse("q*U^2*V^-1").unwrap(), &session).unwrap();
        let Value::Element(Element::QTorus(e)) = v else {
            panic!("expected a quantum-torus element")
        };
        assert_eq!(e.num_terms(), 1);
        let field = session.ctx.cyclo_field().unwrap();
        assert_eq!(e.coefficient(2, -1), field.generator());
        // i is rejected here
        assert!(evaluate(&parse("i").unwrap(), &session).is_err());
        // U and V are rejected on the torus
        assert!(eval_torus("U").is_err());
    }

    #[test]
    fn component_literals() {
        let v = eval_torus("e[1,0]@(1,1)").unwrap();
        let Value::Element(Element::Tuple(t)) = v else { panic!() };
        assert!(!t.component(0).is_zero());
        assert!(t.component(1).is_zero());

        let v = eval_torus("e[1,0]").unwrap();
        let Value::Element(Element::Tuple(t)) = v else { panic!() };
        assert!(t.is_diagonal());

        assert!(eval_torus("e[1]").is_err());
        assert!(eval_torus("e[1,0]@(3,1)").is_err());
    }

    #[test]
    fn gaussian_literal_assembles() {
        let v = eval_torus("1/2+3/4*i").unwrap();
        let Value::Scalar(Scalar::Gaussian(g)) = v else { panic!() };
        assert_eq!(g.to_string(), "1/2+3/4*i");
    }

    #[test]
    fn commutator_of_scalars_vanishes() {
        let v = eval_torus("[2, e[1,0]]").unwrap();
        let Value::Sym2(s) = v else { panic!() };
        assert!(s.is_zero());
    }
}

//! Concrete base algebras: trigonometric polynomials on the circle and the
//! two-torus, their direct sums carrying the component traces, and a
//! quantum-torus instance whose inner automorphism provides a genuine twist.

mod contexts;
mod qtorus;
mod trig;

pub use contexts::{
    circle2, circle2_unchecked, one_dimensional, quantum_torus, quantum_torus_default,
    quantum_torus_unchecked, torus4, torus4_unchecked,
};
pub use qtorus::QTorusElement;
pub use trig::{quadrant_index, Freq, TrigPoly, TupleElement};

use std::fmt;

use crate::scalar::{Rational, Scalar};

/// An element of whichever base algebra the active context uses.
///
/// Every operation below is defined within one variant; combining elements
/// from different algebras is a programming error and panics.
#[derive(Clone, PartialEq)]
pub enum Element {
    Tuple(TupleElement),
    QTorus(QTorusElement),
}

impl Element {
    pub fn add(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Element::Tuple(a), Element::Tuple(b)) => Element::Tuple(a.add(b)),
            (Element::QTorus(a), Element::QTorus(b)) => Element::QTorus(a.add(b)),
            _ => panic!("mixed algebra elements"),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Element::Tuple(a), Element::Tuple(b)) => Element::Tuple(a.sub(b)),
            (Element::QTorus(a), Element::QTorus(b)) => Element::QTorus(a.sub(b)),
            _ => panic!("mixed algebra elements"),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Element::Tuple(a), Element::Tuple(b)) => Element::Tuple(a.mul(b)),
            (Element::QTorus(a), Element::QTorus(b)) => Element::QTorus(a.mul(b)),
            _ => panic!("mixed algebra elements"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Element::Tuple(a) => Element::Tuple(a.neg()),
            Element::QTorus(a) => Element::QTorus(a.neg()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Tuple(a) => a.is_zero(),
            Element::QTorus(a) => a.is_zero(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        match (self, c) {
            (Element::Tuple(a), Scalar::Gaussian(g)) => Element::Tuple(a.scale(g)),
            (Element::QTorus(a), Scalar::Cyclotomic(q)) => Element::QTorus(a.scale(q)),
            _ => panic!("scalar kind does not match element kind"),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        match self {
            Element::Tuple(a) => Element::Tuple(a.map(|p| p.scale_rational(r))),
            Element::QTorus(a) => Element::QTorus(a.scale_rational(r)),
        }
    }

    pub fn as_tuple(&self) -> Option<&TupleElement> {
        match self {
            Element::Tuple(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_qtorus(&self) -> Option<&QTorusElement> {
        match self {
            Element::QTorus(q) => Some(q),
            _ => None,
        }
    }

    /// Exact inverse for invertible monomial-shaped elements; used by the
    /// expression evaluator for `U^-1`, `e[k]^-1`, and friends.
    pub fn inverse_monomial(&self) -> Result<Self, String> {
        match self {
            Element::Tuple(t) => {
                // invertible componentwise only when every component is the
                // same single mode
                if !t.is_diagonal() {
                    return Err("only diagonal tuple elements can be inverted".into());
                }
                let inv = t.component(0).inverse_monomial()?;
                Ok(Element::Tuple(TupleElement::diagonal(t.len(), inv)))
            }
            Element::QTorus(q) => Ok(Element::QTorus(q.inverse_monomial()?)),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Tuple(a) => write!(f, "{a}"),
            Element::QTorus(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

//! Exact coefficient arithmetic: rationals, Gaussian rationals, cyclotomic
//! field elements, and the generalized binomial coefficient.
//!
//! Every value is exact; there is no floating point anywhere in this crate.
//! Gaussian rationals and cyclotomics are deliberately separate types: the
//! Fourier-polynomial instances coefficient over Q(i), the quantum-torus
//! instance over Q(zeta_N), and the two never mix.

mod cyclotomic;
mod gaussian;
mod rational;

pub use cyclotomic::{cyclo_field, CycloField, Cyclotomic};
pub use gaussian::GaussianRational;
pub use rational::{binomial, integer_power, Rational};

use std::fmt;

use crate::error::ArithmeticError;

/// A scalar from whichever coefficient field the active base algebra uses.
///
/// Arithmetic across the two variants is a programming error and panics;
/// contexts never produce mixed values.
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Gaussian(GaussianRational),
    Cyclotomic(Cyclotomic),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Gaussian(x) => x.is_zero(),
            Scalar::Cyclotomic(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Gaussian(x) => x.is_one(),
            Scalar::Cyclotomic(x) => x.is_one(),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a + b),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(a + b),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a * b),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(a * b),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Gaussian(a) => Scalar::Gaussian(-a),
            Scalar::Cyclotomic(a) => Scalar::Cyclotomic(-a),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn inv(&self) -> Result<Scalar, ArithmeticError> {
        match self {
            Scalar::Gaussian(a) => Ok(Scalar::Gaussian(a.inv()?)),
            Scalar::Cyclotomic(a) => Ok(Scalar::Cyclotomic(a.inv()?)),
        }
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        match self {
            Scalar::Gaussian(a) => Scalar::Gaussian(a.scale(r)),
            Scalar::Cyclotomic(a) => Scalar::Cyclotomic(a.scale(r)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Gaussian(x) => write!(f, "{x}"),
            Scalar::Cyclotomic(x) => write!(f, "{x}"),
        }
    }
}

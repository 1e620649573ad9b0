use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::ArithmeticError;
use crate::scalar::Rational;

/// An element of Q(i): `re + im * i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(Rational::one(), Rational::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        GaussianRational::from_rational(Rational::from_integer(n))
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// Squared modulus `re^2 + im^2`.
    pub fn norm(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self, ArithmeticError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let n_inv = n.inv()?;
        Ok(GaussianRational::new(
            &self.re * &n_inv,
            &(-&self.im) * &n_inv,
        ))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational::new(&self.re * r, &self.im * r)
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical form: `p/q` when real, `r/s*i` when purely imaginary,
    /// `p/q+r/s*i` or `p/q-r/s*i` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussianRational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty scalar".into());
        }
        // split an optional trailing imaginary part at the last top-level +/-
        // (not the sign of the leading rational)
        let bytes = s.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[idx - 1] != b'/' {
                split = Some(idx);
            }
        }
        let parse_imag = |part: &str| -> Result<Rational, String> {
            let body = part
                .strip_suffix("*i")
                .or_else(|| part.strip_suffix('i'))
                .ok_or_else(|| format!("missing i in imaginary part {part:?}"))?;
            match body {
                "" | "+" => Ok(Rational::one()),
                "-" => Ok(-Rational::one()),
                other => other.parse(),
            }
        };
        if s.ends_with('i') {
            match split {
                Some(idx) => {
                    let re: Rational = s[..idx].parse()?;
                    let sign = if bytes[idx] == b'-' {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    let im = parse_imag(&s[idx + 1..])?;
                    Ok(GaussianRational::new(re, &sign * &im))
                }
                None => Ok(GaussianRational::new(Rational::zero(), parse_imag(&s)?)),
            }
        } else {
            Ok(GaussianRational::from_rational(s.parse()?))
        }
    }
}

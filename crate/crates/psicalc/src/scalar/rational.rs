use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ArithmeticError;

/// An exact rational number: arbitrary-precision numerator over a positive
/// denominator, always reduced to lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `numer / denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "rational with zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.denom().is_one()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn inv(&self) -> Result<Self, ArithmeticError> {
        if self.is_zero() {
            Err(ArithmeticError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        (&self) / (&rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = String;

    /// Parses the canonical form `p` or `p/q`, with an optional leading sign.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (numer_str, denom_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let numer =
            BigInt::from_str(numer_str.trim()).map_err(|_| format!("bad numerator in {s:?}"))?;
        let denom = match denom_str {
            Some(d) => {
                let d = BigInt::from_str(d.trim()).map_err(|_| format!("bad denominator in {s:?}"))?;
                if d.is_zero() {
                    return Err(format!("zero denominator in {s:?}"));
                }
                d
            }
            None => BigInt::one(),
        };
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

/// Generalized binomial coefficient `n (n-1) ... (n-j+1) / j!` for any
/// integer `n` and `j >= 0`. Always integer-valued.
pub fn binomial(n: i64, j: u32) -> Rational {
    let mut numer = BigInt::one();
    for t in 0..i64::from(j) {
        numer *= BigInt::from(n - t);
    }
    let mut denom = BigInt::one();
    for t in 1..=i64::from(j) {
        denom *= BigInt::from(t);
    }
    Rational(BigRational::new(numer, denom))
}

/// `base^exp` as an exact rational; `None` for `0^exp` with `exp < 0`.
pub fn integer_power(base: i64, exp: i64) -> Option<Rational> {
    if base == 0 {
        return match exp {
            0 => Some(Rational::one()),
            e if e > 0 => Some(Rational::zero()),
            _ => None,
        };
    }
    let mut acc = BigInt::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= BigInt::from(base);
    }
    Some(if exp >= 0 {
        Rational(BigRational::from_integer(acc))
    } else {
        Rational(BigRational::new(BigInt::one(), acc))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_classical() {
        assert_eq!(binomial(4, 2), Rational::from_integer(6));
        assert_eq!(binomial(5, 5), Rational::one());
        assert_eq!(binomial(3, 7), Rational::zero());
    }

    #[test]
    fn binomial_empty_product_is_one() {
        for n in [-5i64, -1, 0, 1, 9] {
            assert_eq!(binomial(n, 0), Rational::one());
        }
    }

    #[test]
    fn binomial_negative_upper_index() {
        // direct evaluation of the falling-factorial quotient
        assert_eq!(binomial(-1, 2), Rational::one());
        assert_eq!(binomial(-2, 3), Rational::from_integer(-4));
        assert_eq!(binomial(-1, 5), Rational::from_integer(-1));
    }

    #[test]
    fn binomial_pascal_recurrence_exhaustive() {
        for n in -12i64..=12 {
            for j in 1u32..=12 {
                let lhs = binomial(n, j);
                let rhs = &binomial(n - 1, j) + &binomial(n - 1, j - 1);
                assert_eq!(lhs, rhs, "Pascal fails at n={n}, j={j}");
            }
        }
    }

    #[test]
    fn binomial_reflection_identity_exhaustive() {
        // (-1)^j * C(-n+j-1, j) = C(n, j)
        for n in -12i64..=12 {
            for j in 0u32..=12 {
                let p = -n + i64::from(j) - 1;
                let mut lhs = binomial(p, j);
                if j % 2 == 1 {
                    lhs = -lhs;
                }
                assert_eq!(lhs, binomial(n, j), "reflection fails at n={n}, j={j}");
            }
        }
    }

    #[test]
    fn binomial_is_integer_valued() {
        for n in -20i64..=20 {
            for j in 0u32..=16 {
                assert!(binomial(n, j).is_integer(), "non-integer at n={n}, j={j}");
            }
        }
    }

    #[test]
    fn inversion_of_zero_is_an_error() {
        assert_eq!(Rational::zero().inv(), Err(ArithmeticError::DivisionByZero));
        assert_eq!(Rational::new(2, 3).inv().unwrap(), Rational::new(3, 2));
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(Rational::new(-4, 2).to_string(), "-2");
        assert_eq!(Rational::new(3, -6).to_string(), "-1/2");
        assert_eq!("7/3".parse::<Rational>().unwrap(), Rational::new(7, 3));
        assert_eq!("-2".parse::<Rational>().unwrap(), Rational::from_integer(-2));
    }

    #[test]
    fn integer_power_cases() {
        assert_eq!(integer_power(2, -3), Some(Rational::new(1, 8)));
        assert_eq!(integer_power(-3, 2), Some(Rational::from_integer(9)));
        assert_eq!(integer_power(0, 4), Some(Rational::zero()));
        assert_eq!(integer_power(0, 0), Some(Rational::one()));
        assert_eq!(integer_power(0, -1), None);
    }

    proptest! {
        #[test]
        fn canonical_form_is_unique(a in -200i64..200, b in 1i64..40, k in 1i64..20) {
            // the same value built two ways has an identical representation
            let x = Rational::new(a, b);
            let y = Rational::new(a * k, b * k);
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(x.to_string(), y.to_string());
        }

        #[test]
        fn display_round_trips(a in -5000i64..5000, b in 1i64..500) {
            let x = Rational::new(a, b);
            let back: Rational = x.to_string().parse().unwrap();
            prop_assert_eq!(x, back);
        }

        #[test]
        fn field_axioms_on_random_triples(
            (a, b, c) in (-50i64..50, 1i64..20).prop_flat_map(|(n, d)| {
                let x = (Just(n), Just(d));
                (x.prop_map(|(n, d)| Rational::new(n, d)),
                 (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n, d)),
                 (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n, d)))
            })
        ) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                let inv = a.inv().unwrap();
                prop_assert_eq!(&a * &inv, Rational::one());
            }
        }
    }
}

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::ArithmeticError;
use crate::scalar::Rational;

// ---------------------------------------------------------------------------
// dense polynomials over Q, index = degree, no trailing zeros
// ---------------------------------------------------------------------------

type Poly = Vec<Rational>;

fn poly_trim(p: &mut Poly) {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ca * cb);
        }
    }
    poly_trim(&mut out);
    out
}

/// Long division: returns `(quotient, remainder)` with
/// `dividend = quotient * divisor + remainder`, `deg r < deg divisor`.
fn poly_divmod(dividend: &Poly, divisor: &Poly) -> (Poly, Poly) {
    assert!(!divisor.is_empty(), "polynomial division by zero");
    let lead = divisor.last().unwrap().inv().expect("nonzero leading coeff");
    let mut rem = dividend.clone();
    let mut quot = vec![Rational::zero(); dividend.len().saturating_sub(divisor.len() - 1)];
    while rem.len() >= divisor.len() {
        let shift = rem.len() - divisor.len();
        let factor = rem.last().unwrap() * &lead;
        quot[shift] = factor.clone();
        for (i, c) in divisor.iter().enumerate() {
            rem[shift + i] = &rem[shift + i] - &(c * &factor);
        }
        poly_trim(&mut rem);
        if rem.len() > shift + divisor.len() - 1 {
            // leading term failed to cancel; cannot happen with exact arithmetic
            unreachable!("leading term survived division");
        }
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// Extended Euclid over Q[q]: returns `(g, u, v)` with `u*a + v*b = g`.
fn poly_xgcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut u0, mut u1) = (vec![Rational::one()], Poly::new());
    let (mut v0, mut v1) = (Poly::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let next_u = poly_sub(&u0, &poly_mul(&q, &u1));
        let next_v = poly_sub(&v0, &poly_mul(&q, &v1));
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, next_u);
        v0 = std::mem::replace(&mut v1, next_v);
    }
    (r0, u0, v0)
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    poly_trim(&mut out);
    out
}

fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// The n-th cyclotomic polynomial, via `(q^n - 1) / prod_{d|n, d<n} Phi_d`.
fn cyclotomic_modulus(n: u32) -> Poly {
    assert!(n > 0, "cyclotomic order must be positive");
    if n == 1 {
        return vec![-Rational::one(), Rational::one()];
    }
    let mut result = vec![Rational::zero(); n as usize + 1];
    result[0] = -Rational::one();
    result[n as usize] = Rational::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let (quot, rem) = poly_divmod(&result, &cyclotomic_modulus(d));
        assert!(rem.is_empty(), "cyclotomic division left a remainder");
        result = quot;
    }
    result
}

// ---------------------------------------------------------------------------
// the field Q(zeta_N)
// ---------------------------------------------------------------------------

/// The cyclotomic field Q(zeta_N), represented as Q[q] modulo the N-th
/// cyclotomic polynomial. Values of this type are shared behind an `Arc`
/// and obtained from [`cyclo_field`].
pub struct CycloField {
    order: u32,
    modulus: Poly,
}

static FIELD_CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();

/// Field handle for Q(zeta_N); handles are cached per order.
pub fn cyclo_field(order: u32) -> Arc<CycloField> {
    let cache = FIELD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry(order)
        .or_insert_with(|| {
            Arc::new(CycloField {
                order,
                modulus: cyclotomic_modulus(order),
            })
        })
        .clone()
}

impl CycloField {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field extension, `phi(N)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut poly: Poly) -> Vec<Rational> {
        if poly.len() >= self.modulus.len() {
            poly = poly_divmod(&poly, &self.modulus).1;
        }
        poly.resize(self.degree(), Rational::zero());
        poly
    }

    fn make(self: &Arc<Self>, poly: Poly) -> Cyclotomic {
        Cyclotomic {
            field: self.clone(),
            coeffs: self.reduce(poly),
        }
    }

    pub fn zero(self: &Arc<Self>) -> Cyclotomic {
        self.make(vec![])
    }

    pub fn one(self: &Arc<Self>) -> Cyclotomic {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, r: Rational) -> Cyclotomic {
        self.make(vec![r])
    }

    pub fn from_integer(self: &Arc<Self>, n: i64) -> Cyclotomic {
        self.from_rational(Rational::from_integer(n))
    }

    /// The root of unity `q^k`, for any integer `k` (reduced mod N).
    pub fn root_power(self: &Arc<Self>, k: i64) -> Cyclotomic {
        let e = k.rem_euclid(i64::from(self.order)) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        self.make(poly)
    }

    pub fn generator(self: &Arc<Self>) -> Cyclotomic {
        self.root_power(1)
    }

    /// Parses the canonical polynomial form, e.g. `1/2*q^3-2`.
    pub fn parse(self: &Arc<Self>, s: &str) -> Result<Cyclotomic, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty cyclotomic literal".into());
        }
        let mut acc = self.zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut idx = 1;
        let mut push = |term: &str| -> Result<(), String> {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest),
                None => (Rational::one(), term.strip_prefix('+').unwrap_or(term)),
            };
            let (coeff_str, power) = match body.find('q') {
                None => (body, None),
                Some(pos) => {
                    let exp = match body[pos + 1..].strip_prefix('^') {
                        Some(e) => e.parse::<i64>().map_err(|_| format!("bad exponent in {term:?}"))?,
                        None if body[pos + 1..].is_empty() => 1,
                        _ => return Err(format!("malformed term {term:?}")),
                    };
                    (body[..pos].trim_end_matches('*'), Some(exp))
                }
            };
            let coeff = if coeff_str.is_empty() {
                Rational::one()
            } else {
                coeff_str.parse::<Rational>()?
            };
            let base = match power {
                Some(e) => self.root_power(e),
                None => self.one(),
            };
            acc = &acc + &base.scale(&(&sign * &coeff));
            Ok(())
        };
        while idx <= bytes.len() {
            if idx == bytes.len() || ((bytes[idx] == b'+' || bytes[idx] == b'-') && bytes[idx - 1] != b'^') {
                push(&s[start..idx])?;
                start = idx;
            }
            idx += 1;
        }
        Ok(acc)
    }
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloField(N={})", self.order)
    }
}

/// An element of Q(zeta_N): a residue in Q[q] mod Phi_N, stored as phi(N)
/// coefficients in degrees 0..phi(N).
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn poly(&self) -> Poly {
        let mut p = self.coeffs.clone();
        poly_trim(&mut p);
        p
    }

    pub fn inv(&self) -> Result<Self, ArithmeticError> {
        if self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        // Phi_N is irreducible over Q, so the gcd is a nonzero constant
        let (g, u, _) = poly_xgcd(&self.poly(), &self.field.modulus);
        assert_eq!(g.len(), 1, "cyclotomic modulus must be coprime to a nonzero residue");
        let scale = g[0].inv()?;
        let inv_poly: Poly = u.iter().map(|c| c * &scale).collect();
        Ok(self.field.make(inv_poly))
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "mixed cyclotomic field orders"
        );
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.assert_same_field(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.assert_same_field(rhs);
        self.field.make(poly_mul(&self.poly(), &rhs.poly()))
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    /// Polynomial form in `q`, highest degree first, e.g. `1/2*q^3-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for deg in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[deg];
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if deg == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if deg == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{deg}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (N={})", self.field.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_cyclotomic_polynomials() {
        let as_i64 = |p: &Poly| -> Vec<i64> {
            p.iter()
                .map(|c| {
                    assert!(c.is_integer());
                    c.numer().try_into().unwrap()
                })
                .collect()
        };
        assert_eq!(as_i64(&cyclotomic_modulus(1)), vec![-1, 1]);
        assert_eq!(as_i64(&cyclotomic_modulus(2)), vec![1, 1]);
        assert_eq!(as_i64(&cyclotomic_modulus(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(&cyclotomic_modulus(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(&cyclotomic_modulus(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(&cyclotomic_modulus(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn order_two_generator_is_minus_one() {
        let field = cyclo_field(2);
        assert_eq!(field.degree(), 1);
        let q = field.generator();
        assert_eq!(q, field.from_integer(-1));
        assert_eq!(&q * &q, field.one());
    }

    #[test]
    fn order_four_difference_of_squares() {
        // (1 + q)(1 - q) = 1 - q^2 = 2 modulo q^2 + 1
        let field = cyclo_field(4);
        let q = field.generator();
        let lhs = &(&field.one() + &q) * &(&field.one() - &q);
        assert_eq!(lhs, field.from_integer(2));
    }

    #[test]
    fn root_power_wraps_modulo_order() {
        let field = cyclo_field(4);
        assert_eq!(field.root_power(4), field.one());
        assert_eq!(field.root_power(-1), field.root_power(3));
        assert_eq!(&field.root_power(3) * &field.generator(), field.one());
    }

    #[test]
    fn inverse_in_various_orders() {
        for n in [2u32, 3, 4, 5, 6, 8, 12] {
            let field = cyclo_field(n);
            let x = &(&field.generator() + &field.from_integer(2))
                + &field.root_power(2).scale(&Rational::new(1, 3));
            if x.is_zero() {
                continue;
            }
            let inv = x.inv().unwrap();
            assert_eq!(&x * &inv, field.one(), "inverse failed for N={n}");
        }
        assert!(cyclo_field(5).zero().inv().is_err());
    }

    #[test]
    fn display_matches_expected_forms() {
        let field = cyclo_field(8);
        let x = &field.root_power(3).scale(&Rational::new(1, 2)) - &field.from_integer(2);
        assert_eq!(x.to_string(), "1/2*q^3-2");
        assert_eq!(field.generator().to_string(), "q");
        assert_eq!((-field.generator()).to_string(), "-q");
    }

    #[test]
    fn parse_round_trip_examples() {
        let field = cyclo_field(8);
        for text in ["1/2*q^3-2", "q", "-q^2+1", "3", "-1/3", "q^3+q^2+q+1"] {
            let x = field.parse(text).unwrap();
            assert_eq!(field.parse(&x.to_string()).unwrap(), x, "round trip of {text:?}");
        }
    }

    fn arb_cyclo(order: u32) -> impl Strategy<Value = Cyclotomic> {
        let field = cyclo_field(order);
        let deg = field.degree();
        proptest::collection::vec((-6i64..6, 1i64..4), deg).prop_map(move |parts| Cyclotomic {
            field: cyclo_field(order),
            coeffs: parts.into_iter().map(|(n, d)| Rational::new(n, d)).collect(),
        })
    }

    proptest! {
        #[test]
        fn field_axioms_order_12(x in arb_cyclo(12), y in arb_cyclo(12), z in arb_cyclo(12)) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), cyclo_field(12).one());
            }
        }

        #[test]
        fn display_round_trips(x in arb_cyclo(12)) {
            let field = cyclo_field(12);
            prop_assert_eq!(field.parse(&x.to_string()).unwrap(), x);
        }
    }
}

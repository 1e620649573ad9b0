use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::scalar::{CycloField, Cyclotomic, Rational};

/// An element of the quantum torus at a root of unity: a finite sum
/// `sum c_{m,n} U^m V^n` in normal order, with `U V = q V U` for
/// `q = zeta_N`. Reordering uses `V^n U^m = q^{-mn} U^m V^n`.
#[derive(Clone)]
pub struct QTorusElement {
    field: Arc<CycloField>,
    terms: BTreeMap<(i64, i64), Cyclotomic>,
}

impl PartialEq for QTorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.terms == other.terms
    }
}

impl Eq for QTorusElement {}

impl QTorusElement {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        QTorusElement {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        QTorusElement::monomial(field, 0, 0, field.one())
    }

    /// `coeff * U^m V^n`.
    pub fn monomial(field: &Arc<CycloField>, m: i64, n: i64, coeff: Cyclotomic) -> Self {
        let mut e = QTorusElement::zero(field);
        e.add_term(m, n, coeff);
        e
    }

    pub fn generator_u(field: &Arc<CycloField>) -> Self {
        QTorusElement::monomial(field, 1, 0, field.one())
    }

    pub fn generator_v(field: &Arc<CycloField>) -> Self {
        QTorusElement::monomial(field, 0, 1, field.one())
    }

    pub fn from_scalar(field: &Arc<CycloField>, c: Cyclotomic) -> Self {
        QTorusElement::monomial(field, 0, 0, c)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: i64, n: i64) -> Cyclotomic {
        self.terms
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_coefficient(&self) -> Cyclotomic {
        self.coefficient(0, 0)
    }

    fn add_term(&mut self, m: i64, n: i64, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((m, n))
            .or_insert_with(|| self.field.zero());
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&(m, n));
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, n), c) in &rhs.terms {
            out.add_term(m, n, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QTorusElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Normal-ordered product:
    /// `(U^a V^b)(U^c V^d) = q^{-bc} U^{a+c} V^{b+d}` extended bilinearly.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = QTorusElement::zero(&self.field);
        for (&(a, b), ca) in &self.terms {
            for (&(c, d), cb) in &rhs.terms {
                let phase = self.field.root_power(phase_exponent(-b, c, self.field.order()));
                out.add_term(a + c, b + d, &(ca * cb) * &phase);
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return QTorusElement::zero(&self.field);
        }
        QTorusElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        QTorusElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, a)| (*k, a.scale(r))).collect(),
        }
    }

    /// Multiplies every term `U^m V^n` by `q^{r n - s m}` raised to `power`:
    /// the diagonal action of conjugation by `U^r V^s`.
    pub fn conjugation_phase(&self, r: i64, s: i64, power: i64) -> Self {
        let order = self.field.order();
        QTorusElement {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&(m, n), c)| {
                    let exp = (i128::from(power)
                        * (i128::from(r) * i128::from(n) - i128::from(s) * i128::from(m)))
                    .rem_euclid(i128::from(order)) as i64;
                    ((m, n), c * &self.field.root_power(exp))
                })
                .collect(),
        }
    }

    /// Exact inverse when this is a single monomial `c U^m V^n` with
    /// invertible coefficient: the inverse is `c^{-1} q^{-mn} U^{-m} V^{-n}`.
    pub fn inverse_monomial(&self) -> Result<Self, String> {
        if self.terms.len() != 1 {
            return Err("only a single quantum-torus monomial can be inverted".into());
        }
        let (&(m, n), c) = self.terms.iter().next().unwrap();
        let coeff_inv = c.inv().map_err(|e| e.to_string())?;
        let phase = self.field.root_power(phase_exponent(-n, m, self.field.order()));
        Ok(QTorusElement::monomial(
            &self.field,
            -m,
            -n,
            &coeff_inv * &phase,
        ))
    }
}

/// `a * b mod order`, computed without overflow.
fn phase_exponent(a: i64, b: i64, order: u32) -> i64 {
    (i128::from(a) * i128::from(b)).rem_euclid(i128::from(order)) as i64
}

impl fmt::Display for QTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(m, n), c) in &self.terms {
            let mono = monomial_string(m, n);
            // single-coefficient polynomials can carry their sign outside
            let nonzero: Vec<_> = c.coeffs().iter().filter(|x| !x.is_zero()).collect();
            let (neg, mag) = if nonzero.len() == 1 && nonzero[0].is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let simple = mag
                .coeffs()
                .iter()
                .filter(|x| !x.is_zero())
                .count()
                <= 1;
            match mono {
                None => {
                    if simple {
                        write!(f, "{mag}")?;
                    } else {
                        write!(f, "({mag})")?;
                    }
                }
                Some(mono) => {
                    if mag.is_one() {
                        write!(f, "{mono}")?;
                    } else if simple {
                        write!(f, "{mag}*{mono}")?;
                    } else {
                        write!(f, "({mag})*{mono}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn monomial_string(m: i64, n: i64) -> Option<String> {
    let mut parts = Vec::new();
    match m {
        0 => {}
        1 => parts.push("U".to_string()),
        _ => parts.push(format!("U^{m}")),
    }
    match n {
        0 => {}
        1 => parts.push("V".to_string()),
        _ => parts.push(format!("V^{n}")),
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

impl fmt::Debug for QTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

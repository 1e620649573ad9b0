use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{GaussianRational, Rational};

/// Frequency vector; one-dimensional polynomials keep the second entry 0.
pub type Freq = [i64; 2];

/// A trigonometric polynomial: a finite Fourier sum with Gaussian-rational
/// coefficients. `e_k * e_l = e_{k+l}` bilinearly.
#[derive(Clone, PartialEq, Eq)]
pub struct TrigPoly {
    dim: u8,
    terms: BTreeMap<Freq, GaussianRational>,
}

impl TrigPoly {
    pub fn zero(dim: u8) -> Self {
        assert!(dim == 1 || dim == 2);
        TrigPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: u8) -> Self {
        TrigPoly::constant(dim, GaussianRational::one())
    }

    pub fn constant(dim: u8, c: GaussianRational) -> Self {
        let mut p = TrigPoly::zero(dim);
        if !c.is_zero() {
            p.terms.insert([0, 0], c);
        }
        p
    }

    /// The basis mode `e_k`.
    pub fn basis(dim: u8, freq: Freq) -> Self {
        TrigPoly::mode(dim, freq, GaussianRational::one())
    }

    pub fn mode(dim: u8, freq: Freq, coeff: GaussianRational) -> Self {
        assert!(dim == 2 || freq[1] == 0, "dim-1 mode with a second frequency");
        let mut p = TrigPoly::zero(dim);
        if !coeff.is_zero() {
            p.terms.insert(freq, coeff);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Freq, GaussianRational)>>(dim: u8, it: I) -> Self {
        let mut p = TrigPoly::zero(dim);
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Freq, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, freq: Freq) -> GaussianRational {
        self.terms.get(&freq).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_coefficient(&self) -> GaussianRational {
        self.coefficient([0, 0])
    }

    fn add_term(&mut self, freq: Freq, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(freq).or_insert_with(GaussianRational::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&freq);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = TrigPoly::zero(self.dim);
        for (k, a) in &self.terms {
            for (l, b) in &rhs.terms {
                out.add_term([k[0] + l[0], k[1] + l[1]], a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return TrigPoly::zero(self.dim);
        }
        TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::from_rational(r.clone()))
    }

    /// The normalized derivative along `axis`: `e_k -> k_axis e_k`, so all
    /// coefficients stay in Q(i).
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < usize::from(self.dim));
        let mut out = TrigPoly::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(*k, c.scale(&Rational::from_integer(k[axis])));
        }
        out
    }

    /// Exact inverse when this is a single invertible mode `c * e_k`.
    pub fn inverse_monomial(&self) -> Result<Self, String> {
        if self.terms.len() != 1 {
            return Err("only a single-mode trig polynomial can be inverted".into());
        }
        let (k, c) = self.terms.iter().next().unwrap();
        let inv = c.inv().map_err(|e| e.to_string())?;
        Ok(TrigPoly::mode(self.dim, [-k[0], -k[1]], inv))
    }
}

fn freq_string(dim: u8, k: &Freq) -> String {
    if dim == 1 {
        format!("e[{}]", k[0])
    } else {
        format!("e[{},{}]", k[0], k[1])
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            // pull a leading minus out of purely real/imaginary coefficients
            let (neg, mag) = if c.im().is_zero() && c.re().is_negative() {
                (true, -c)
            } else if c.re().is_zero() && c.im().is_negative() {
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
            if *k == [0, 0] {
                if mag.is_real() || mag.re().is_zero() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            } else if mag.is_one() {
                write!(f, "{}", freq_string(self.dim, k))?;
            } else if mag.is_real() || mag.re().is_zero() {
                write!(f, "{mag}*{}", freq_string(self.dim, k))?;
            } else {
                write!(f, "({mag})*{}", freq_string(self.dim, k))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of a finite direct sum of trig-polynomial algebras.
/// Length 2 holds two circle components; length 4 holds the four torus
/// components indexed by `(s, t)` with `s, t` in `{1, 2}`, stored in the
/// order (1,1), (1,2), (2,1), (2,2). Components never interact under
/// multiplication.
#[derive(Clone, PartialEq, Eq)]
pub struct TupleElement {
    components: Vec<TrigPoly>,
}

/// Flat index of quadrant component `(s, t)`.
pub fn quadrant_index(s: u8, t: u8) -> usize {
    assert!((1..=2).contains(&s) && (1..=2).contains(&t));
    usize::from(s - 1) * 2 + usize::from(t - 1)
}

impl TupleElement {
    pub fn new(components: Vec<TrigPoly>) -> Self {
        assert!(components.len() == 2 || components.len() == 4);
        let dim = components[0].dim();
        assert!(components.iter().all(|c| c.dim() == dim));
        TupleElement { components }
    }

    pub fn zero(len: usize, dim: u8) -> Self {
        TupleElement::new(vec![TrigPoly::zero(dim); len])
    }

    pub fn one(len: usize, dim: u8) -> Self {
        TupleElement::new(vec![TrigPoly::one(dim); len])
    }

    /// The same polynomial in every component: the embedding of a plain
    /// function into the direct sum.
    pub fn diagonal(len: usize, p: TrigPoly) -> Self {
        TupleElement::new(vec![p; len])
    }

    /// `p` in one component, zero elsewhere.
    pub fn single(len: usize, index: usize, p: TrigPoly) -> Self {
        let dim = p.dim();
        let mut components = vec![TrigPoly::zero(dim); len];
        components[index] = p;
        TupleElement::new(components)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> u8 {
        self.components[0].dim()
    }

    pub fn component(&self, index: usize) -> &TrigPoly {
        &self.components[index]
    }

    pub fn components(&self) -> &[TrigPoly] {
        &self.components
    }

    pub fn map<F: Fn(&TrigPoly) -> TrigPoly>(&self, f: F) -> Self {
        TupleElement {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn zip<F: Fn(&TrigPoly, &TrigPoly) -> TrigPoly>(&self, rhs: &Self, f: F) -> Self {
        assert_eq!(self.components.len(), rhs.components.len());
        TupleElement {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, TrigPoly::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, TrigPoly::sub)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.zip(rhs, TrigPoly::mul)
    }

    pub fn neg(&self) -> Self {
        self.map(TrigPoly::neg)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn derivative(&self, axis: usize) -> Self {
        self.map(|p| p.derivative(axis))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TrigPoly::is_zero)
    }

    /// True when every component is the same polynomial.
    pub fn is_diagonal(&self) -> bool {
        self.components.iter().all(|c| c == &self.components[0])
    }
}

impl fmt::Display for TupleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for TupleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

//! The bi-singular operator toolkit: principal symbols built from the four
//! kernel restrictions, quadrant Toeplitz projection, the four residues,
//! the Hilbert-transform symbol, and exact operator application on
//! trigonometric polynomials.

use std::sync::Arc;

use crate::algebra::Context;
use crate::error::Error;
use crate::instances::{quadrant_index, TrigPoly, TupleElement};
use crate::scalar::{integer_power, Rational, Scalar};
use crate::symbols::{Symbol1D, Symbol2D};
use crate::Element;

/// A symbol over the four-component torus context; component `(s, t)` of
/// the coefficient at `(m, n)` is the quadrant restriction of the
/// bihomogeneous piece of bi-degree `(m, n)`.
pub type QuadrantSymbol = Symbol2D;

/// The four diagonal-restricted coefficient functions of a classical
/// bi-singular operator, already evaluated at `zeta_1 = z_1`,
/// `zeta_2 = z_2` and expressed in torus coordinates.
#[derive(Clone, Debug)]
pub struct BisingularData {
    pub b0: TrigPoly,
    pub b1: TrigPoly,
    pub b2: TrigPoly,
    pub b12: TrigPoly,
}

impl BisingularData {
    pub fn new(b0: TrigPoly, b1: TrigPoly, b2: TrigPoly, b12: TrigPoly) -> Self {
        for p in [&b0, &b1, &b2, &b12] {
            assert_eq!(p.dim(), 2, "bisingular data lives on the two-torus");
        }
        BisingularData { b0, b1, b2, b12 }
    }
}

/// The order-zero principal symbol of the classical operator with the given
/// kernel restrictions: component `(s, t)` is
/// `b0 - (-1)^s b1 - (-1)^t b2 + (-1)^{s+t} b12`.
pub fn principal_symbol(data: &BisingularData) -> Element {
    let sign = |k: u8| if k % 2 == 0 { 1 } else { -1 };
    let mut components = Vec::with_capacity(4);
    for s in 1..=2u8 {
        for t in 1..=2u8 {
            let mut acc = data.b0.clone();
            acc = acc.sub(&data.b1.scale_rational(&Rational::from_integer(sign(s))));
            acc = acc.sub(&data.b2.scale_rational(&Rational::from_integer(sign(t))));
            acc = acc.add(&data.b12.scale_rational(&Rational::from_integer(sign(s + t))));
            components.push(acc);
        }
    }
    Element::Tuple(TupleElement::new(components))
}

/// The order-zero Hilbert-transform symbol on the two-component circle
/// context: `+1` on the positive half-line component, `-1` on the negative
/// one. The smoothing cutoff near frequency zero is realized inside
/// [`apply_operator_1d`] by the zero-frequency convention, not in the
/// symbol.
pub fn hilbert_symbol(ctx: &Arc<Context>) -> Result<Symbol1D, Error> {
    if !ctx.is_circle2() {
        return Err(Error::WrongContext {
            operation: "hilbert_symbol".to_string(),
            expected: "circle2".to_string(),
            got: ctx.label().to_string(),
        });
    }
    let coeff = Element::Tuple(TupleElement::new(vec![
        TrigPoly::one(1),
        TrigPoly::one(1).neg(),
    ]));
    Ok(Symbol1D::from_element(ctx, coeff))
}

/// The quadrant Toeplitz projection: zeroes every component except `(1,1)`
/// in every coefficient. Idempotent; orders and floors are untouched.
pub fn toeplitz_quadrant(symbol: &QuadrantSymbol) -> Result<QuadrantSymbol, Error> {
    let ctx = symbol.context();
    if !ctx.is_torus4() {
        return Err(Error::WrongContext {
            operation: "toeplitz_quadrant".to_string(),
            expected: "torus4".to_string(),
            got: ctx.label().to_string(),
        });
    }
    let keep = quadrant_index(1, 1);
    let terms: Vec<_> = symbol
        .terms()
        .map(|(k, v)| {
            let t = v.as_tuple().expect("torus4 elements are tuples");
            (
                k,
                Element::Tuple(TupleElement::single(4, keep, t.component(keep).clone())),
            )
        })
        .collect();
    Ok(Symbol2D::from_terms(ctx, terms, symbol.floors()))
}

/// The four residues of a quadrant symbol, in component order
/// `(1,1), (1,2), (2,1), (2,2)`.
pub fn residues(symbol: &QuadrantSymbol) -> Result<Vec<Scalar>, Error> {
    let ctx = symbol.context();
    if !ctx.is_torus4() {
        return Err(Error::WrongContext {
            operation: "residues".to_string(),
            expected: "torus4".to_string(),
            got: ctx.label().to_string(),
        });
    }
    (0..4).map(|t| symbol.residue(t)).collect()
}

/// Per-axis multiplier factor `k^m`, with the zero-frequency convention:
/// at `k = 0` the factor is `1` for homogeneity degree zero and `0`
/// otherwise.
fn axis_factor(k: i64, m: i64) -> Rational {
    if k == 0 {
        if m == 0 {
            Rational::one()
        } else {
            Rational::zero()
        }
    } else {
        integer_power(k, m).expect("nonzero base")
    }
}

/// Per-axis component weights: away from the axis the matching half-line
/// component acts alone; at frequency zero the two components act with
/// weight 1/2 each, which realizes `sign(0) = 0` while keeping the unit
/// symbol acting as the identity.
fn axis_weights(k: i64) -> Vec<(u8, Rational)> {
    if k > 0 {
        vec![(1, Rational::one())]
    } else if k < 0 {
        vec![(2, Rational::one())]
    } else {
        vec![(1, Rational::new(1, 2)), (2, Rational::new(1, 2))]
    }
}

/// Applies an exact one-variable symbol on the circle pair context to a
/// trigonometric polynomial: each Fourier mode `c e_k` picks up the
/// multiplier of the matching half-line component at `k`.
pub fn apply_operator_1d(symbol: &Symbol1D, u: &TrigPoly) -> Result<TrigPoly, Error> {
    let ctx = symbol.context();
    if !ctx.is_circle2() {
        return Err(Error::WrongContext {
            operation: "apply_operator_1d".to_string(),
            expected: "circle2".to_string(),
            got: ctx.label().to_string(),
        });
    }
    if !symbol.floor().is_exact() {
        return Err(Error::InexactSymbol {
            floor: symbol.floor().to_string(),
        });
    }
    assert_eq!(u.dim(), 1, "operand must be a dim-1 trig polynomial");
    let mut out = TrigPoly::zero(1);
    for (freq, c) in u.terms() {
        let k = freq[0];
        for (m, elem) in symbol.terms() {
            let factor = axis_factor(k, m);
            if factor.is_zero() {
                continue;
            }
            let tuple = elem.as_tuple().expect("circle2 elements are tuples");
            for (s, w) in axis_weights(k) {
                let scale = c.scale(&(&factor * &w));
                if scale.is_zero() {
                    continue;
                }
                let shifted = tuple
                    .component(usize::from(s - 1))
                    .mul(&TrigPoly::mode(1, *freq, scale));
                out = out.add(&shifted);
            }
        }
    }
    Ok(out)
}

/// Applies an exact quadrant symbol to a trigonometric polynomial on the
/// two-torus: mode `c e_k` picks up `a^{(s,t)}(x) k_1^m k_2^n c e_k` for the
/// quadrant matching the signs of `k`, with the zero-frequency conventions
/// of [`axis_factor`] and [`axis_weights`] on the axes.
pub fn apply_operator_2d(symbol: &QuadrantSymbol, u: &TrigPoly) -> Result<TrigPoly, Error> {
    let ctx = symbol.context();
    if !ctx.is_torus4() {
        return Err(Error::WrongContext {
            operation: "apply_operator_2d".to_string(),
            expected: "torus4".to_string(),
            got: ctx.label().to_string(),
        });
    }
    let floors = symbol.floors();
    if !(floors.0.is_exact() && floors.1.is_exact()) {
        return Err(Error::InexactSymbol {
            floor: format!("({}, {})", floors.0, floors.1),
        });
    }
    assert_eq!(u.dim(), 2, "operand must be a dim-2 trig polynomial");
    let mut out = TrigPoly::zero(2);
    for (freq, c) in u.terms() {
        let (k1, k2) = (freq[0], freq[1]);
        for ((m, n), elem) in symbol.terms() {
            let factor = &axis_factor(k1, m) * &axis_factor(k2, n);
            if factor.is_zero() {
                continue;
            }
            let tuple = elem.as_tuple().expect("torus4 elements are tuples");
            for (s, w1) in axis_weights(k1) {
                for (t, w2) in axis_weights(k2) {
                    let weight = &(&w1 * &w2) * &factor;
                    let scale = c.scale(&weight);
                    if scale.is_zero() {
                        continue;
                    }
                    let comp = tuple.component(quadrant_index(s, t));
                    out = out.add(&comp.mul(&TrigPoly::mode(2, *freq, scale)));
                }
            }
        }
    }
    Ok(out)
}

/// Convenience: checks whether a trig polynomial is supported entirely on
/// the coordinate axes `k_1 = 0` or `k_2 = 0`.
pub fn supported_on_axes(p: &TrigPoly) -> bool {
    p.terms().all(|(k, _)| k[0] == 0 || k[1] == 0)
}

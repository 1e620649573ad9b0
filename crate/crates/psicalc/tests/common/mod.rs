//! Shared test support: a single-step rewriter that serves as the
//! independent oracle for symbol products, seeded random generators for
//! elements and symbols, and a direct evaluator for monomial residues.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use psicalc::algebra::Context;
use psicalc::instances::{QTorusElement, TrigPoly, TupleElement};
use psicalc::scalar::{binomial, GaussianRational, Rational, Scalar};
use psicalc::symbols::{Floor, Symbol1D, Symbol2D};
use psicalc::Element;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// the single-step rewriter oracle
//
// A symbol product is represented as a formal sum of words in the atoms
// {coefficient, xi_axis^{+1}, xi_axis^{-1}}. Words are normalized by moving
// one xi across one coefficient at a time, using only the generating
// relations
//
//   xi a      = sigma(a) xi + delta(a)
//   xi^{-1} a = sigma^{-1}(a) xi^{-1} - xi^{-1} delta(sigma^{-1}(a)) xi^{-1}
//
// and the commutation of the two xi variables. Words whose xi-degree on
// some axis has fallen below the requested floor can never contribute at
// certified orders and are dropped. No binomials, no sigma powers, and no
// symbol machinery are involved: this is an independent route to the
// product coefficients.
// ---------------------------------------------------------------------------

#[derive(Clone)]
enum Atom {
    Coeff(Element),
    Xi { axis: usize, exp: i64 },
}

fn xi_units(axis: usize, power: i64) -> impl Iterator<Item = Atom> {
    let exp = power.signum();
    (0..power.unsigned_abs()).map(move |_| Atom::Xi { axis, exp })
}

fn axis_sums(word: &[Atom]) -> [i64; 2] {
    let mut sums = [0i64; 2];
    for atom in word {
        if let Atom::Xi { axis, exp } = atom {
            sums[*axis] += exp;
        }
    }
    sums
}

fn word_has_zero_coeff(word: &[Atom]) -> bool {
    word.iter()
        .any(|a| matches!(a, Atom::Coeff(c) if c.is_zero()))
}

fn normalize_words(
    ctx: &Arc<Context>,
    initial: Vec<Vec<Atom>>,
    floors: [i64; 2],
) -> BTreeMap<(i64, i64), Element> {
    let mut table: BTreeMap<(i64, i64), Element> = BTreeMap::new();
    let mut work = initial;
    let mut steps = 0usize;
    while let Some(word) = work.pop() {
        steps += 1;
        assert!(steps < 10_000_000, "rewriter did not terminate");
        if word_has_zero_coeff(&word) {
            continue;
        }
        let sums = axis_sums(&word);
        if sums[0] < floors[0] || sums[1] < floors[1] {
            continue;
        }
        let mut reduced = false;
        for i in 0..word.len().saturating_sub(1) {
            match (&word[i], &word[i + 1]) {
                (Atom::Coeff(x), Atom::Coeff(y)) => {
                    let mut merged = word.clone();
                    merged[i] = Atom::Coeff(x.mul(y));
                    merged.remove(i + 1);
                    work.push(merged);
                    reduced = true;
                }
                (Atom::Xi { axis, exp: 1 }, Atom::Coeff(a)) => {
                    let axis = *axis;
                    // sigma(a) xi^{+1}
                    let mut moved = word.clone();
                    moved[i] = Atom::Coeff(ctx.sigma_apply(a));
                    moved[i + 1] = Atom::Xi { axis, exp: 1 };
                    work.push(moved);
                    // delta(a), xi consumed
                    let mut dropped = word.clone();
                    dropped[i] = Atom::Coeff(ctx.delta(axis, a));
                    dropped.remove(i + 1);
                    work.push(dropped);
                    reduced = true;
                }
                (Atom::Xi { axis, exp: -1 }, Atom::Coeff(a)) => {
                    let axis = *axis;
                    let pulled = ctx.sigma_inv_apply(a);
                    // sigma^{-1}(a) xi^{-1}
                    let mut moved = word.clone();
                    moved[i] = Atom::Coeff(pulled.clone());
                    moved[i + 1] = Atom::Xi { axis, exp: -1 };
                    work.push(moved);
                    // - xi^{-1} delta(sigma^{-1}(a)) xi^{-1}
                    let mut spawned = word.clone();
                    spawned[i] = Atom::Xi { axis, exp: -1 };
                    spawned[i + 1] = Atom::Coeff(ctx.delta(axis, &pulled).neg());
                    spawned.insert(i + 2, Atom::Xi { axis, exp: -1 });
                    work.push(spawned);
                    reduced = true;
                }
                _ => continue,
            }
            break;
        }
        if reduced {
            continue;
        }
        // normal form: at most one coefficient, all xi atoms after it
        let mut coeff = ctx.one_element();
        for atom in &word {
            if let Atom::Coeff(c) = atom {
                coeff = coeff.mul(c);
            }
        }
        if coeff.is_zero() {
            continue;
        }
        let entry = table
            .entry((sums[0], sums[1]))
            .or_insert_with(|| ctx.zero_element());
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            table.remove(&(sums[0], sums[1]));
        }
    }
    table
}

/// Product coefficients of two 2d symbols down to `floors`, via the
/// rewriter.
pub fn rewriter_product_2d(
    d1: &Symbol2D,
    d2: &Symbol2D,
    floors: (i64, i64),
) -> BTreeMap<(i64, i64), Element> {
    let ctx = d1.context();
    let mut words = Vec::new();
    for ((m, n), a) in d1.terms() {
        for ((p, q), b) in d2.terms() {
            let mut word = vec![Atom::Coeff(a.clone())];
            word.extend(xi_units(0, m));
            word.extend(xi_units(1, n));
            word.push(Atom::Coeff(b.clone()));
            word.extend(xi_units(0, p));
            word.extend(xi_units(1, q));
            words.push(word);
        }
    }
    normalize_words(ctx, words, [floors.0, floors.1])
}

/// Product coefficients of two 1d symbols down to `floor`, via the
/// rewriter.
pub fn rewriter_product_1d(d1: &Symbol1D, d2: &Symbol1D, floor: i64) -> BTreeMap<i64, Element> {
    let ctx = d1.context();
    let mut words = Vec::new();
    for (n, a) in d1.terms() {
        for (m, b) in d2.terms() {
            let mut word = vec![Atom::Coeff(a.clone())];
            word.extend(xi_units(0, n));
            word.push(Atom::Coeff(b.clone()));
            word.extend(xi_units(0, m));
            words.push(word);
        }
    }
    normalize_words(ctx, words, [floor, i64::MIN])
        .into_iter()
        .map(|((k, _), v)| (k, v))
        .collect()
}

// ---------------------------------------------------------------------------
// random generators
// ---------------------------------------------------------------------------

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let numer = *[-2i64, -1, 1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
    let denom = *[1i64, 1, 2].get(rng.gen_range(0..3)).unwrap();
    Rational::new(numer, denom)
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    let re = random_rational(rng);
    if rng.gen_bool(0.3) {
        GaussianRational::new(re, random_rational(rng))
    } else {
        GaussianRational::from_rational(re)
    }
}

/// A random spanning monomial with a small scalar: one Fourier mode in one
/// component on the tuple instances, one `U^m V^n` monomial on the quantum
/// torus.
pub fn random_element(ctx: &Arc<Context>, rng: &mut ChaCha8Rng) -> Element {
    if let Some(field) = ctx.cyclo_field() {
        let m = rng.gen_range(-2..=2i64);
        let n = rng.gen_range(-2..=2i64);
        let mut coeff = field.from_rational(random_rational(rng));
        if rng.gen_bool(0.4) {
            coeff = &coeff * &field.root_power(rng.gen_range(0..field.order() as i64));
        }
        Element::QTorus(QTorusElement::monomial(field, m, n, coeff))
    } else {
        let (len, dim) = if ctx.is_circle2() { (2, 1u8) } else { (4, 2u8) };
        let component = rng.gen_range(0..len);
        let freq = if dim == 1 {
            [rng.gen_range(-2..=2i64), 0]
        } else {
            [rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64)]
        };
        let poly = TrigPoly::mode(dim, freq, random_gaussian(rng));
        Element::Tuple(TupleElement::single(len, component, poly))
    }
}

/// A random 1d symbol: up to `max_terms` terms at orders in
/// `[-order_bound, order_bound]`, truncated at `floor`.
pub fn random_symbol_1d(
    ctx: &Arc<Context>,
    rng: &mut ChaCha8Rng,
    max_terms: usize,
    order_bound: i64,
    floor: i64,
) -> Symbol1D {
    let n_terms = rng.gen_range(1..=max_terms);
    let terms: Vec<(i64, Element)> = (0..n_terms)
        .map(|_| {
            (
                rng.gen_range(-order_bound..=order_bound),
                random_element(ctx, rng),
            )
        })
        .collect();
    Symbol1D::from_terms(ctx, terms, Floor::At(floor))
}

/// A random 2d symbol with orders in the square
/// `[-order_bound, order_bound]^2` and floors `(floor, floor)`.
pub fn random_symbol_2d(
    ctx: &Arc<Context>,
    rng: &mut ChaCha8Rng,
    max_terms: usize,
    order_bound: i64,
    floor: i64,
) -> Symbol2D {
    let n_terms = rng.gen_range(1..=max_terms);
    let terms: Vec<((i64, i64), Element)> = (0..n_terms)
        .map(|_| {
            (
                (
                    rng.gen_range(-order_bound..=order_bound),
                    rng.gen_range(-order_bound..=order_bound),
                ),
                random_element(ctx, rng),
            )
        })
        .collect();
    Symbol2D::from_terms(ctx, terms, (Floor::At(floor), Floor::At(floor)))
}

/// A random differential symbol (orders `>= 0`) whose coefficients are the
/// same trig polynomial in every component: the shape on which exact
/// operator composition holds.
pub fn random_diagonal_differential_2d(
    ctx: &Arc<Context>,
    rng: &mut ChaCha8Rng,
    top: i64,
) -> Symbol2D {
    let n_terms = rng.gen_range(1..=3);
    let terms: Vec<((i64, i64), Element)> = (0..n_terms)
        .map(|_| {
            let poly = TrigPoly::mode(
                2,
                [rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64)],
                random_gaussian(rng),
            );
            (
                (rng.gen_range(0..=top), rng.gen_range(0..=top)),
                Element::Tuple(TupleElement::diagonal(4, poly)),
            )
        })
        .collect();
    Symbol2D::from_terms(ctx, terms, (Floor::MinusInfinity, Floor::MinusInfinity))
}

/// Same shape in one variable on the circle pair.
pub fn random_diagonal_differential_1d(
    ctx: &Arc<Context>,
    rng: &mut ChaCha8Rng,
    top: i64,
) -> Symbol1D {
    let n_terms = rng.gen_range(1..=3);
    let terms: Vec<(i64, Element)> = (0..n_terms)
        .map(|_| {
            let poly = TrigPoly::mode(1, [rng.gen_range(-2..=2i64), 0], random_gaussian(rng));
            (
                rng.gen_range(0..=top),
                Element::Tuple(TupleElement::diagonal(2, poly)),
            )
        })
        .collect();
    Symbol1D::from_terms(ctx, terms, Floor::MinusInfinity)
}

/// A random trig polynomial supported in `|k_i| <= bound`.
pub fn random_trig(dim: u8, rng: &mut ChaCha8Rng, bound: i64, max_terms: usize) -> TrigPoly {
    let n_terms = rng.gen_range(1..=max_terms);
    TrigPoly::from_terms(
        dim,
        (0..n_terms).map(|_| {
            let freq = if dim == 1 {
                [rng.gen_range(-bound..=bound), 0]
            } else {
                [rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)]
            };
            (freq, random_gaussian(rng))
        }),
    )
}

// ---------------------------------------------------------------------------
// direct evaluation of monomial product residues
// ---------------------------------------------------------------------------

/// The residue of `a xi1^m xi2^n . b xi1^p xi2^q` evaluated directly from
/// the crossing relations: only `(j1, j2) = (m+p+1, n+q+1)` can land on the
/// residue bi-order, so the value is
/// `C(m, j1) C(n, j2) tau(a sigma^{m+n-j1-j2}(delta1^{j1} delta2^{j2}(b)))`.
/// Independent of the symbol product code.
pub fn direct_monomial_residue(
    ctx: &Arc<Context>,
    a: &Element,
    b: &Element,
    first: (i64, i64),
    second: (i64, i64),
    trace: usize,
) -> Scalar {
    let (m, n) = first;
    let (p, q) = second;
    let j1 = m + p + 1;
    let j2 = n + q + 1;
    if j1 < 0 || j2 < 0 {
        return ctx.zero_scalar();
    }
    let c1 = binomial(m, j1 as u32);
    let c2 = binomial(n, j2 as u32);
    if c1.is_zero() || c2.is_zero() {
        return ctx.zero_scalar();
    }
    let d = ctx.delta_pow(1, j2 as usize, &ctx.delta_pow(0, j1 as usize, b));
    let twisted = ctx.sigma_pow(m + n - j1 - j2, &d);
    ctx.trace(trace, &a.mul(&twisted)).scale(&(&c1 * &c2))
}

/// Asserts that every certified entry of the symbol product matches the
/// rewriter oracle exactly (and that nothing extra appears on either side).
pub fn assert_matches_oracle_2d(product: &Symbol2D, oracle: &BTreeMap<(i64, i64), Element>) {
    for ((k1, k2), v) in product.terms() {
        let expected = oracle.get(&(k1, k2));
        assert_eq!(
            Some(v),
            expected,
            "engine has an entry at ({k1}, {k2}) the oracle disagrees with"
        );
    }
    for (k, v) in oracle {
        assert_eq!(
            product.coefficient(*k),
            Some(v),
            "oracle entry at {k:?} missing from the engine product"
        );
    }
}

pub fn assert_matches_oracle_1d(product: &Symbol1D, oracle: &BTreeMap<i64, Element>) {
    for (k, v) in product.terms() {
        assert_eq!(
            Some(v),
            oracle.get(&k),
            "engine has an entry at {k} the oracle disagrees with"
        );
    }
    for (k, v) in oracle {
        assert_eq!(
            product.coefficient(*k),
            Some(v),
            "oracle entry at {k} missing from the engine product"
        );
    }
}

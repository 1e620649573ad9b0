use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Floor, EXACT_TAIL_CAP};
use crate::algebra::Context;
use crate::error::Error;
use crate::scalar::{binomial, Rational, Scalar};
use crate::Element;

/// A formal pseudodifferential symbol in two commuting variables: a finitely
/// stored map `(order1, order2) -> coefficient` with per-axis tops and
/// per-axis certified floors.
#[derive(Clone)]
pub struct Symbol2D {
    ctx: Arc<Context>,
    terms: BTreeMap<(i64, i64), Element>,
    tops: (i64, i64),
    floors: (Floor, Floor),
}

impl PartialEq for Symbol2D {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            && self.floors == other.floors
            && self.terms == other.terms
    }
}

impl Symbol2D {
    fn normalized(
        ctx: Arc<Context>,
        mut terms: BTreeMap<(i64, i64), Element>,
        floors: (Floor, Floor),
    ) -> Self {
        assert_eq!(
            ctx.num_deltas(),
            2,
            "two-variable symbols need a two-delta context"
        );
        terms.retain(|(k1, k2), v| floors.0.allows(*k1) && floors.1.allows(*k2) && !v.is_zero());
        let default_top = |floor: Floor| match floor {
            Floor::At(f) => f,
            Floor::MinusInfinity => 0,
        };
        let top1 = terms
            .keys()
            .map(|k| k.0)
            .max()
            .unwrap_or(default_top(floors.0));
        let top2 = terms
            .keys()
            .map(|k| k.1)
            .max()
            .unwrap_or(default_top(floors.1));
        Symbol2D {
            ctx,
            terms,
            tops: (top1, top2),
            floors,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), Element)>>(
        ctx: &Arc<Context>,
        terms: I,
        floors: (Floor, Floor),
    ) -> Self {
        let mut map: BTreeMap<(i64, i64), Element> = BTreeMap::new();
        for (k, v) in terms {
            let entry = map.entry(k).or_insert_with(|| ctx.zero_element());
            *entry = entry.add(&v);
        }
        Symbol2D::normalized(ctx.clone(), map, floors)
    }

    pub fn zero(ctx: &Arc<Context>) -> Self {
        Symbol2D::from_terms(ctx, [], (Floor::MinusInfinity, Floor::MinusInfinity))
    }

    pub fn unit(ctx: &Arc<Context>) -> Self {
        Symbol2D::monomial(ctx, (0, 0), ctx.one_element())
    }

    pub fn from_element(ctx: &Arc<Context>, a: Element) -> Self {
        Symbol2D::monomial(ctx, (0, 0), a)
    }

    /// `a xi1^m xi2^n`, exact.
    pub fn monomial(ctx: &Arc<Context>, order: (i64, i64), a: Element) -> Self {
        Symbol2D::from_terms(ctx, [(order, a)], (Floor::MinusInfinity, Floor::MinusInfinity))
    }

    /// `xi1^m xi2^n` with unit coefficient and the given floors.
    pub fn xi_pow(ctx: &Arc<Context>, order: (i64, i64), floors: (Floor, Floor)) -> Self {
        Symbol2D::from_terms(ctx, [(order, ctx.one_element())], floors)
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &Element)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tops(&self) -> (i64, i64) {
        self.tops
    }

    pub fn floors(&self) -> (Floor, Floor) {
        self.floors
    }

    pub fn coefficient(&self, order: (i64, i64)) -> Option<&Element> {
        self.terms.get(&order)
    }

    pub fn coefficient_or_zero(&self, order: (i64, i64)) -> Element {
        self.terms
            .get(&order)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero_element())
    }

    fn assert_same_ctx(&self, rhs: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &rhs.ctx),
            "symbols must share one context"
        );
    }

    pub fn truncate(&self, new_floors: (Floor, Floor)) -> Self {
        let floors = (
            self.floors.0.max(new_floors.0),
            self.floors.1.max(new_floors.1),
        );
        Symbol2D::normalized(self.ctx.clone(), self.terms.clone(), floors)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_same_ctx(rhs);
        let floors = (
            self.floors.0.max(rhs.floors.0),
            self.floors.1.max(rhs.floors.1),
        );
        let mut terms = self.terms.clone();
        for (k, v) in &rhs.terms {
            let entry = terms.entry(*k).or_insert_with(|| self.ctx.zero_element());
            *entry = entry.add(v);
        }
        Symbol2D::normalized(self.ctx.clone(), terms, floors)
    }

    pub fn neg(&self) -> Self {
        Symbol2D {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect(),
            tops: self.tops,
            floors: self.floors,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Symbol2D::normalized(
            self.ctx.clone(),
            self.terms.iter().map(|(k, v)| (*k, v.scale(c))).collect(),
            self.floors,
        )
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        Symbol2D::normalized(
            self.ctx.clone(),
            self.terms
                .iter()
                .map(|(k, v)| (*k, v.scale_rational(r)))
                .collect(),
            self.floors,
        )
    }

    /// The product, by the closed crossing formula: for terms
    /// `a xi1^m xi2^n` and `b xi1^p xi2^q`,
    ///
    /// ```text
    /// sum_{j1, j2 >= 0} C(m, j1) C(n, j2)
    ///     a sigma^{m+n-j1-j2}(delta1^{j1} delta2^{j2}(b))
    ///     xi1^{m+p-j1} xi2^{n+q-j2}
    /// ```
    ///
    /// Result floors certify, per axis, every order at or above
    /// `max(floor(self) + top(rhs), floor(rhs) + top(self))`.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_ctx(rhs);
        assert!(
            self.ctx.hypotheses_checked(),
            "product requires a hypothesis-checked context"
        );
        let floors = (
            self.floors
                .0
                .shift(rhs.tops.0)
                .max(rhs.floors.0.shift(self.tops.0)),
            self.floors
                .1
                .shift(rhs.tops.1)
                .max(rhs.floors.1.shift(self.tops.1)),
        );
        let mut acc: BTreeMap<(i64, i64), Element> = BTreeMap::new();
        for ((p, q), b) in &rhs.terms {
            let mut table = DeltaTable::new(&self.ctx, b.clone());
            for ((m, n), a) in &self.terms {
                let mut j1: i64 = 0;
                loop {
                    if *m >= 0 && j1 > *m {
                        break;
                    }
                    let order1 = m + p - j1;
                    if !floors.0.allows(order1) {
                        break;
                    }
                    if table.row_base(j1 as usize).is_zero() {
                        break;
                    }
                    let b1 = binomial(*m, j1 as u32);
                    let mut j2: i64 = 0;
                    loop {
                        if *n >= 0 && j2 > *n {
                            break;
                        }
                        let order2 = n + q - j2;
                        if !floors.1.allows(order2) {
                            break;
                        }
                        let d = table.get(j1 as usize, j2 as usize);
                        if d.is_zero() {
                            break;
                        }
                        let twisted = self.ctx.sigma_pow(m + n - j1 - j2, d);
                        let contrib = a
                            .mul(&twisted)
                            .scale_rational(&(&b1 * &binomial(*n, j2 as u32)));
                        if !contrib.is_zero() {
                            let entry = acc
                                .entry((order1, order2))
                                .or_insert_with(|| self.ctx.zero_element());
                            *entry = entry.add(&contrib);
                        }
                        j2 += 1;
                        if floors.1.is_exact() && j2 > EXACT_TAIL_CAP {
                            panic!("exact product has an infinite xi2 tail; use a finite floor");
                        }
                    }
                    j1 += 1;
                    if floors.0.is_exact() && j1 > EXACT_TAIL_CAP {
                        panic!("exact product has an infinite xi1 tail; use a finite floor");
                    }
                }
            }
        }
        Symbol2D::normalized(self.ctx.clone(), acc, floors)
    }

    /// `self * rhs - rhs * self`, both products computed in full.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Symbol2D::unit(&self.ctx);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The two-dimensional noncommutative residue: the chosen trace of the
    /// coefficient at bi-order `(-1, -1)`. Both floors must certify that
    /// coefficient, the context must be hypothesis-checked, and the trace
    /// must be delta- and sigma-invariant with the twice-twisted trace law
    /// (an untwisted trace qualifies when `sigma = id`).
    pub fn residue(&self, trace: usize) -> Result<Scalar, Error> {
        if !self.ctx.hypotheses_checked() {
            return Err(Error::HypothesesNotVerified);
        }
        if trace >= self.ctx.num_traces() {
            return Err(Error::TraceIndex {
                index: trace,
                available: self.ctx.num_traces(),
            });
        }
        let kind = self.ctx.trace_info(trace).kind;
        let twist_ok = kind.twist_power == 2 || (self.ctx.sigma_is_identity() && kind.twist_power == 0);
        if !(kind.delta_invariant && kind.sigma_invariant && twist_ok) {
            return Err(Error::TraceUnsuitable {
                index: trace,
                operation: "residue".to_string(),
                reason: format!(
                    "need delta-invariance, sigma-invariance and twist power 2 (or 0 untwisted); declared twist is {}",
                    kind.twist_power
                ),
            });
        }
        if !(self.floors.0.at_most(-1) && self.floors.1.at_most(-1)) {
            return Err(Error::UncertifiedResidue {
                needed: "(-1, -1)".to_string(),
                floor: format!("({}, {})", self.floors.0, self.floors.1),
            });
        }
        Ok(self.ctx.trace(trace, &self.coefficient_or_zero((-1, -1))))
    }
}

/// Lazily grown table of `delta1^{j1} delta2^{j2}(b)`.
struct DeltaTable<'c> {
    ctx: &'c Context,
    rows: Vec<Vec<Element>>,
}

impl<'c> DeltaTable<'c> {
    fn new(ctx: &'c Context, base: Element) -> Self {
        DeltaTable {
            ctx,
            rows: vec![vec![base]],
        }
    }

    fn row_base(&mut self, j1: usize) -> &Element {
        while self.rows.len() <= j1 {
            let prev = &self.rows.last().unwrap()[0];
            let next = self.ctx.delta(0, prev);
            self.rows.push(vec![next]);
        }
        &self.rows[j1][0]
    }

    fn get(&mut self, j1: usize, j2: usize) -> &Element {
        self.row_base(j1);
        let row = &mut self.rows[j1];
        while row.len() <= j2 {
            let next = self.ctx.delta(1, row.last().unwrap());
            row.push(next);
        }
        &self.rows[j1][j2]
    }
}

impl fmt::Display for Symbol2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for ((k1, k2), v) in self.terms.iter().rev() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({v})")?;
                if *k1 != 0 {
                    write!(f, "*xi1^{k1}")?;
                }
                if *k2 != 0 {
                    write!(f, "*xi2^{k2}")?;
                }
            }
        }
        if let (Floor::At(f1), Floor::At(f2)) = self.floors {
            write!(f, " + O(xi1^{}, xi2^{})", f1 - 1, f2 - 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Symbol2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Two exactly computed scalars that a theorem asserts are equal.
#[derive(Clone, Debug)]
pub struct EqualityReport {
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl EqualityReport {
    pub fn is_equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for EqualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lhs = {}, rhs = {} ({})",
            self.lhs,
            self.rhs,
            if self.is_equal() { "equal" } else { "NOT EQUAL" }
        )
    }
}

/// Compares `Res(a xi1^m xi2^n . b xi1^p xi2^q)` with the residue of the
/// product in the opposite order, computing both through the symbol product
/// at floors deep enough to certify the `(-1,-1)` coefficient.
pub fn monomial_trace_check(
    ctx: &Arc<Context>,
    a: &Element,
    b: &Element,
    first: (i64, i64),
    second: (i64, i64),
    trace: usize,
) -> Result<EqualityReport, Error> {
    let (m, n) = first;
    let (p, q) = second;
    let floors = (
        Floor::At(-1 - p.abs() - m.abs()),
        Floor::At(-1 - q.abs() - n.abs()),
    );
    let d1 = Symbol2D::from_terms(ctx, [((m, n), a.clone())], floors);
    let d2 = Symbol2D::from_terms(ctx, [((p, q), b.clone())], floors);
    let lhs = d1.mul(&d2).residue(trace)?;
    let rhs = d2.mul(&d1).residue(trace)?;
    Ok(EqualityReport { lhs, rhs })
}

/// Compares `tau(delta^i(a) b)` with `(-1)^i tau(sigma^i(a) delta^i(b))` for
/// the chosen delta and trace; exact on both sides.
pub fn lemma_check(
    ctx: &Arc<Context>,
    a: &Element,
    b: &Element,
    delta_index: usize,
    i: usize,
    trace: usize,
) -> EqualityReport {
    let lhs = ctx.trace(trace, &ctx.delta_pow(delta_index, i, a).mul(b));
    let twisted = ctx.sigma_pow(i as i64, a);
    let mut rhs = ctx.trace(trace, &twisted.mul(&ctx.delta_pow(delta_index, i, b)));
    if i % 2 == 1 {
        rhs = rhs.neg();
    }
    EqualityReport { lhs, rhs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        quantum_torus_default, torus4, QTorusElement, TrigPoly, TupleElement,
    };
    use crate::scalar::Cyclotomic;

    fn diag(k: [i64; 2]) -> Element {
        Element::Tuple(TupleElement::diagonal(4, TrigPoly::basis(2, k)))
    }

    fn umono(ctx: &Arc<Context>, m: i64, n: i64) -> Element {
        let field = ctx.cyclo_field().unwrap();
        Element::QTorus(QTorusElement::monomial(field, m, n, field.one()))
    }

    fn cyclo_scalar(ctx: &Arc<Context>, n: i64) -> Scalar {
        Scalar::Cyclotomic(ctx.cyclo_field().unwrap().from_integer(n))
    }

    #[test]
    fn xi_variables_commute() {
        for ctx in [torus4(), quantum_torus_default()] {
            let exact = (Floor::MinusInfinity, Floor::MinusInfinity);
            let xi1 = Symbol2D::xi_pow(&ctx, (1, 0), exact);
            let xi2 = Symbol2D::xi_pow(&ctx, (0, 1), exact);
            assert!(xi1.commutator(&xi2).is_zero());
        }
    }

    #[test]
    fn xi_inverse_relations() {
        for ctx in [torus4(), quantum_torus_default()] {
            let exact = (Floor::MinusInfinity, Floor::MinusInfinity);
            for axis in 0..2 {
                let order = if axis == 0 { (1, 0) } else { (0, 1) };
                let inv_order = (-order.0, -order.1);
                let xi = Symbol2D::xi_pow(&ctx, order, exact);
                let xi_inv = Symbol2D::xi_pow(&ctx, inv_order, exact);
                assert_eq!(xi.mul(&xi_inv), Symbol2D::unit(&ctx));
                assert_eq!(xi_inv.mul(&xi), Symbol2D::unit(&ctx));
            }
        }
    }

    #[test]
    fn single_relation_case() {
        // (xi1 . a) = sigma(a) xi1 + delta1(a)
        let ctx = quantum_torus_default();
        let a = umono(&ctx, 1, 0);
        let exact = (Floor::MinusInfinity, Floor::MinusInfinity);
        let product = Symbol2D::xi_pow(&ctx, (1, 0), exact).mul(&Symbol2D::from_element(&ctx, a.clone()));
        assert_eq!(product.coefficient((1, 0)), Some(&ctx.sigma_apply(&a)));
        let d = ctx.delta(0, &a);
        assert_eq!(product.coefficient_or_zero((0, 0)), d);
    }

    #[test]
    fn mode_product_with_vanishing_derivative_tail() {
        // (e_(1,0) xi1^-1)(e_(0,1) xi2^-1) = e_(1,1) xi1^-1 xi2^-1 exactly:
        // delta1 kills e_(0,1), so only j1 = j2 = 0 survives
        let ctx = torus4();
        let floors = (Floor::At(-6), Floor::At(-6));
        let d1 = Symbol2D::from_terms(&ctx, [((-1, 0), diag([1, 0]))], floors);
        let d2 = Symbol2D::from_terms(&ctx, [((0, -1), diag([0, 1]))], floors);
        let product = d1.mul(&d2);
        assert_eq!(product.floors(), (Floor::At(-6), Floor::At(-6)));
        assert_eq!(product.num_terms(), 1);
        assert_eq!(product.coefficient((-1, -1)), Some(&diag([1, 1])));
    }

    #[test]
    fn residue_extracts_minus_one_minus_one() {
        let ctx = torus4();
        let s = Symbol2D::monomial(&ctx, (-1, -1), ctx.one_element());
        for t in 0..4 {
            assert!(s.residue(t).unwrap().is_one());
        }
        // any other single order has zero residue
        let s = Symbol2D::monomial(&ctx, (-1, 0), ctx.one_element());
        assert!(s.residue(0).unwrap().is_zero());
    }

    #[test]
    fn residue_floor_gating() {
        let ctx = torus4();
        let s = Symbol2D::from_terms(&ctx, [((0, 0), ctx.one_element())], (Floor::At(0), Floor::At(-2)));
        assert!(matches!(
            s.residue(0),
            Err(Error::UncertifiedResidue { .. })
        ));
    }

    #[test]
    fn monomial_trace_check_trivial_orders() {
        let ctx = torus4();
        let a = diag([1, 0]);
        let b = diag([-1, 0]);
        let report = monomial_trace_check(&ctx, &a, &b, (0, 0), (0, 0), 0).unwrap();
        assert!(report.is_equal());
    }

    #[test]
    fn monomial_trace_check_frozen_torus_case() {
        // a = e_(1,0), b = e_(-1,0), orders (1,-1) and (-2,0): both sides
        // reduce to tau(ab) = tau(e_0) = 1
        let ctx = torus4();
        let a = diag([1, 0]);
        let b = diag([-1, 0]);
        for t in 0..4 {
            let report = monomial_trace_check(&ctx, &a, &b, (1, -1), (-2, 0), t).unwrap();
            assert!(report.is_equal());
            assert!(report.lhs.is_one());
        }
    }

    #[test]
    fn monomial_trace_check_frozen_quantum_cases() {
        let ctx = quantum_torus_default();
        // a = U, b = U^{-1}: the only contributing term is tau_W(U sigma(U^{-1}))
        // = -tau_W(1) = 0
        let report =
            monomial_trace_check(&ctx, &umono(&ctx, 1, 0), &umono(&ctx, -1, 0), (2, -1), (-3, 0), 0)
                .unwrap();
        assert!(report.is_equal());
        assert!(report.lhs.is_zero());

        // a = U^2 V, b = V: both sides equal tau_W(U^2 V^2) = -1
        let report =
            monomial_trace_check(&ctx, &umono(&ctx, 2, 1), &umono(&ctx, 0, 1), (1, -1), (-2, 0), 0)
                .unwrap();
        assert!(report.is_equal());
        assert_eq!(report.lhs, cyclo_scalar(&ctx, -1));
    }

    #[test]
    fn lemma_check_cases() {
        let torus = torus4();
        let a = diag([2, -1]);
        let b = diag([-2, 1]);
        for i in 0..=4 {
            for delta_index in 0..2 {
                for t in 0..4 {
                    let report = lemma_check(&torus, &a, &b, delta_index, i, t);
                    assert!(report.is_equal(), "torus4 lemma fails at i={i}");
                }
            }
        }

        // frozen twisted case: tau(delta1^3(U) . U^-5 V^2) = -8 on both sides
        let ctx = quantum_torus_default();
        let a = umono(&ctx, 1, 0);
        let b = umono(&ctx, -5, 2);
        let report = lemma_check(&ctx, &a, &b, 0, 3, 0);
        assert!(report.is_equal());
        assert_eq!(report.lhs, cyclo_scalar(&ctx, -8));
    }

    #[test]
    fn quantum_residue_weight() {
        // tau_W(U^2 V^2) = -1, so Res of U^2 V^2 xi1^-1 xi2^-1 is -1
        let ctx = quantum_torus_default();
        let s = Symbol2D::monomial(&ctx, (-1, -1), umono(&ctx, 2, 2));
        assert_eq!(s.residue(0).unwrap(), cyclo_scalar(&ctx, -1));
        // and the unit coefficient has residue tau_W(1) = 0
        let s = Symbol2D::monomial(&ctx, (-1, -1), ctx.one_element());
        assert!(s.residue(0).unwrap().is_zero());
    }

    #[test]
    fn product_floor_rule_per_axis() {
        let ctx = torus4();
        let d1 = Symbol2D::from_terms(
            &ctx,
            [((2, 1), diag([1, 0]))],
            (Floor::At(-4), Floor::At(-5)),
        );
        let d2 = Symbol2D::from_terms(
            &ctx,
            [((1, 3), diag([0, 1]))],
            (Floor::At(-6), Floor::At(-2)),
        );
        let p = d1.mul(&d2);
        // axis 1: max(-4 + 1, -6 + 2) = -3; axis 2: max(-5 + 3, -2 + 1) = -1
        assert_eq!(p.floors(), (Floor::At(-3), Floor::At(-1)));
    }

    #[test]
    fn cyclotomic_coefficient_scalars_flow_through() {
        let ctx = quantum_torus_default();
        let field = ctx.cyclo_field().unwrap().clone();
        let c: Cyclotomic = field.generator();
        let a = Element::QTorus(QTorusElement::monomial(&field, 2, 2, c));
        let s = Symbol2D::monomial(&ctx, (-1, -1), a);
        // tau_W(q U^2 V^2) = q * (-1) = 1 at q = -1
        assert!(s.residue(0).unwrap().is_one());
    }
}

//! The context bundle `(A, sigma, sigma^{-1}, deltas, traces)` every symbol
//! lives against, together with the hypothesis checker that validates a
//! concrete instance before residues may be computed.

mod check;

pub use check::{check_hypotheses, CheckResult, HypothesisReport};

use std::sync::Arc;

use crate::instances::{QTorusElement, TrigPoly, TupleElement};
use crate::scalar::{CycloField, Cyclotomic, GaussianRational, Scalar};
use crate::Element;

/// Declared algebraic properties of one trace functional. The checker
/// verifies each declared property exactly; residue operations consult this
/// metadata before trusting a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceKind {
    /// `k` in the twisted trace law `tau(ab) = tau(sigma^k(b) a)`.
    pub twist_power: i64,
    /// `tau . delta_i = 0` for every delta of the context.
    pub delta_invariant: bool,
    /// `tau . sigma = tau`.
    pub sigma_invariant: bool,
}

/// How a trace functional is computed on elements.
#[derive(Clone, Debug)]
pub enum TraceDef {
    /// The coefficient of mode `freq` in one tuple component. The honest
    /// integration traces use `freq = 0`; other frequencies deliberately
    /// break invariance and exist to exercise the checker.
    FourierCoefficient { component: usize, freq: [i64; 2] },
    /// `a -> constant coefficient of a * weight` on the quantum torus.
    QTorusWeighted { weight: QTorusElement },
    /// The raw coefficient of `U^m V^n`; not invariant in general.
    QTorusCoefficient { m: i64, n: i64 },
}

/// A named trace functional with its declared properties.
#[derive(Clone, Debug)]
pub struct Trace {
    pub name: String,
    pub def: TraceDef,
    pub kind: TraceKind,
}

/// The automorphism of the base algebra.
#[derive(Clone, Debug)]
pub enum SigmaDef {
    Identity,
    /// Conjugation by `U^r V^s`, acting diagonally:
    /// `sigma(U^m V^n) = q^{r n - s m} U^m V^n`.
    QTorusConjugation { r: i64, s: i64 },
}

/// One twisted derivation of the base algebra.
#[derive(Clone, Debug)]
pub enum DeltaDef {
    /// The normalized partial derivative along `axis`: `e_k -> k_axis e_k`.
    NormalizedPartial { axis: usize },
    /// `a -> x a - sigma(a) x`, a sigma-derivation for any fixed `x`.
    TwistedInner { x: QTorusElement },
}

/// Which concrete algebra carries the elements, with its shape parameters.
#[derive(Clone, Debug)]
pub enum InstanceKind {
    /// Two copies of the circle algebra (dim-1 trig polynomials).
    Circle2,
    /// Four copies of the torus algebra (dim-2 trig polynomials).
    Torus4 { components: usize },
    /// The quantum torus at `q = zeta_N`.
    QTorus { field: Arc<CycloField> },
}

/// An immutable bundle of one base algebra with its automorphism, twisted
/// derivations and traces. Built by the constructors in
/// [`crate::instances`]; `hypotheses_checked` is set once at construction
/// after the checker has verified every declared law on a spanning sample.
#[derive(Clone, Debug)]
pub struct Context {
    pub(crate) label: String,
    pub(crate) instance: InstanceKind,
    pub(crate) sigma: SigmaDef,
    pub(crate) deltas: Vec<DeltaDef>,
    pub(crate) traces: Vec<Trace>,
    pub(crate) hypotheses_checked: bool,
}

impl Context {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn instance(&self) -> &InstanceKind {
        &self.instance
    }

    pub fn sigma_is_identity(&self) -> bool {
        matches!(self.sigma, SigmaDef::Identity)
    }

    pub fn hypotheses_checked(&self) -> bool {
        self.hypotheses_checked
    }

    pub fn num_deltas(&self) -> usize {
        self.deltas.len()
    }

    pub fn num_traces(&self) -> usize {
        self.traces.len()
    }

    pub fn trace_info(&self, index: usize) -> &Trace {
        &self.traces[index]
    }

    pub fn is_circle2(&self) -> bool {
        matches!(self.instance, InstanceKind::Circle2)
    }

    pub fn is_torus4(&self) -> bool {
        matches!(self.instance, InstanceKind::Torus4 { .. })
    }

    pub fn is_qtorus(&self) -> bool {
        matches!(self.instance, InstanceKind::QTorus { .. })
    }

    pub fn zero_element(&self) -> Element {
        match &self.instance {
            InstanceKind::Circle2 => Element::Tuple(TupleElement::zero(2, 1)),
            InstanceKind::Torus4 { components } => {
                Element::Tuple(TupleElement::zero(*components, 2))
            }
            InstanceKind::QTorus { field } => Element::QTorus(QTorusElement::zero(field)),
        }
    }

    pub fn one_element(&self) -> Element {
        match &self.instance {
            InstanceKind::Circle2 => Element::Tuple(TupleElement::one(2, 1)),
            InstanceKind::Torus4 { components } => {
                Element::Tuple(TupleElement::one(*components, 2))
            }
            InstanceKind::QTorus { field } => Element::QTorus(QTorusElement::one(field)),
        }
    }

    pub fn zero_scalar(&self) -> Scalar {
        match &self.instance {
            InstanceKind::QTorus { field } => Scalar::Cyclotomic(field.zero()),
            _ => Scalar::Gaussian(GaussianRational::zero()),
        }
    }

    pub fn sigma_apply(&self, a: &Element) -> Element {
        self.sigma_pow(1, a)
    }

    pub fn sigma_inv_apply(&self, a: &Element) -> Element {
        self.sigma_pow(-1, a)
    }

    /// `sigma^k` for any integer `k`; negative powers route through the
    /// inverse automorphism. Computed in closed form per instance, so large
    /// exponents cost the same as small ones.
    pub fn sigma_pow(&self, k: i64, a: &Element) -> Element {
        match &self.sigma {
            SigmaDef::Identity => a.clone(),
            SigmaDef::QTorusConjugation { r, s } => match a {
                Element::QTorus(q) => Element::QTorus(q.conjugation_phase(*r, *s, k)),
                _ => panic!("quantum-torus twist applied to a foreign element"),
            },
        }
    }

    pub fn delta(&self, index: usize, a: &Element) -> Element {
        match &self.deltas[index] {
            DeltaDef::NormalizedPartial { axis } => match a {
                Element::Tuple(t) => Element::Tuple(t.derivative(*axis)),
                _ => panic!("partial derivative applied to a foreign element"),
            },
            DeltaDef::TwistedInner { x } => {
                assert!(
                    matches!(a, Element::QTorus(_)),
                    "twisted inner derivation applied to a foreign element"
                );
                let x_el = Element::QTorus(x.clone());
                let left = x_el.mul(a);
                let right = self.sigma_apply(a).mul(&x_el);
                left.sub(&right)
            }
        }
    }

    /// `delta_index` applied `times` times.
    pub fn delta_pow(&self, index: usize, times: usize, a: &Element) -> Element {
        let mut out = a.clone();
        for _ in 0..times {
            out = self.delta(index, &out);
        }
        out
    }

    pub fn trace(&self, index: usize, a: &Element) -> Scalar {
        match &self.traces[index].def {
            TraceDef::FourierCoefficient { component, freq } => match a {
                Element::Tuple(t) => Scalar::Gaussian(t.component(*component).coefficient(*freq)),
                _ => panic!("tuple trace applied to a foreign element"),
            },
            TraceDef::QTorusWeighted { weight } => match a {
                Element::QTorus(q) => Scalar::Cyclotomic(q.mul(weight).constant_coefficient()),
                _ => panic!("quantum-torus trace applied to a foreign element"),
            },
            TraceDef::QTorusCoefficient { m, n } => match a {
                Element::QTorus(q) => Scalar::Cyclotomic(q.coefficient(*m, *n)),
                _ => panic!("quantum-torus trace applied to a foreign element"),
            },
        }
    }

    /// A spanning sample of monomials for exact hypothesis checking. On
    /// basis-indexed instances, checking bilinear laws on these suffices.
    pub fn default_sample(&self) -> Vec<Element> {
        match &self.instance {
            InstanceKind::Circle2 => {
                let mut out = Vec::new();
                for comp in 0..2 {
                    for k in -3..=3i64 {
                        out.push(Element::Tuple(TupleElement::single(
                            2,
                            comp,
                            TrigPoly::basis(1, [k, 0]),
                        )));
                    }
                }
                out
            }
            InstanceKind::Torus4 { components } => {
                let mut out = Vec::new();
                for comp in 0..*components {
                    for k1 in -2..=2i64 {
                        for k2 in -2..=2i64 {
                            out.push(Element::Tuple(TupleElement::single(
                                *components,
                                comp,
                                TrigPoly::basis(2, [k1, k2]),
                            )));
                        }
                    }
                }
                out
            }
            InstanceKind::QTorus { field } => {
                let mut out = Vec::new();
                for m in -4..=4i64 {
                    for n in -4..=4i64 {
                        out.push(Element::QTorus(QTorusElement::monomial(
                            field,
                            m,
                            n,
                            field.one(),
                        )));
                    }
                }
                out
            }
        }
    }

    pub fn sample_description(&self) -> String {
        match &self.instance {
            InstanceKind::Circle2 => "basis modes e[k] per component, |k| <= 3".to_string(),
            InstanceKind::Torus4 { .. } => {
                "basis modes e[k1,k2] per component, |k1|,|k2| <= 2".to_string()
            }
            InstanceKind::QTorus { .. } => "monomials U^m V^n, |m|,|n| <= 4".to_string(),
        }
    }

    /// A copy with one trace replaced and the verification flag cleared.
    /// Run [`check_hypotheses`] on the result to see which laws still hold.
    pub fn with_trace(&self, index: usize, def: TraceDef, kind: TraceKind, name: &str) -> Context {
        let mut out = self.clone();
        out.traces[index] = Trace {
            name: name.to_string(),
            def,
            kind,
        };
        out.hypotheses_checked = false;
        out.label = format!("{} (trace {} replaced by {})", self.label, index, name);
        out
    }

    /// Runs the checker on the default sample; on a full pass, returns the
    /// context wrapped for sharing with `hypotheses_checked` set.
    pub fn verified(mut self) -> Result<Arc<Context>, crate::error::Error> {
        let report = check_hypotheses(&self, &self.default_sample());
        if report.all_passed() {
            self.hypotheses_checked = true;
            Ok(Arc::new(self))
        } else {
            Err(crate::error::Error::HypothesisViolation {
                summary: report.failure_summary(),
            })
        }
    }

    pub(crate) fn cyclo_field(&self) -> Option<&Arc<CycloField>> {
        match &self.instance {
            InstanceKind::QTorus { field } => Some(field),
            _ => None,
        }
    }
}

/// `f` composed with itself `times` times, applied to `a`.
pub fn iterate<E: Clone, F: Fn(&E) -> E>(f: F, times: usize, a: &E) -> E {
    let mut out = a.clone();
    for _ in 0..times {
        out = f(&out);
    }
    out
}

/// Convenience: the weight element `(U^r V^s)^{-power}` used by the twisted
/// quantum-torus traces.
pub fn qtorus_weight(field: &Arc<CycloField>, r: i64, s: i64, power: u32) -> QTorusElement {
    let w = QTorusElement::monomial(field, r, s, field.one());
    let w_inv = w.inverse_monomial().expect("monomials are invertible");
    let mut out = QTorusElement::one(field);
    for _ in 0..power {
        out = out.mul(&w_inv);
    }
    out
}

/// Re-export for symmetry with the scalar constructors.
pub fn qtorus_scalar(field: &Arc<CycloField>, c: Cyclotomic) -> Element {
    Element::QTorus(QTorusElement::from_scalar(field, c))
}

use std::sync::{Arc, OnceLock};

use crate::algebra::{qtorus_weight, Context, DeltaDef, InstanceKind, SigmaDef, Trace, TraceDef, TraceKind};
use crate::error::Error;
use crate::instances::QTorusElement;
use crate::scalar::cyclo_field;

fn plain_trace_kind() -> TraceKind {
    TraceKind {
        twist_power: 0,
        delta_invariant: true,
        sigma_invariant: true,
    }
}

/// The raw circle-pair context, not yet run through the checker.
pub fn circle2_unchecked() -> Context {
    let traces = (0..2)
        .map(|s| Trace {
            name: format!("tau_{}", s + 1),
            def: TraceDef::FourierCoefficient {
                component: s,
                freq: [0, 0],
            },
            kind: plain_trace_kind(),
        })
        .collect();
    Context {
        label: "circle2".to_string(),
        instance: InstanceKind::Circle2,
        sigma: SigmaDef::Identity,
        deltas: vec![DeltaDef::NormalizedPartial { axis: 0 }],
        traces,
        hypotheses_checked: false,
    }
}

/// Two copies of the circle algebra with the untwisted derivative and the
/// two component-integration traces. The carrier of the half-line symbol
/// components and the Toeplitz projection.
pub fn circle2() -> Arc<Context> {
    static CACHE: OnceLock<Arc<Context>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            circle2_unchecked()
                .verified()
                .expect("circle2 hypotheses hold")
        })
        .clone()
}

/// The raw four-component torus context, not yet run through the checker.
pub fn torus4_unchecked() -> Context {
    let traces = [(1u8, 1u8), (1, 2), (2, 1), (2, 2)]
        .into_iter()
        .enumerate()
        .map(|(idx, (s, t))| Trace {
            name: format!("tau_{s}{t}"),
            def: TraceDef::FourierCoefficient {
                component: idx,
                freq: [0, 0],
            },
            kind: plain_trace_kind(),
        })
        .collect();
    Context {
        label: "torus4".to_string(),
        instance: InstanceKind::Torus4 { components: 4 },
        sigma: SigmaDef::Identity,
        deltas: vec![
            DeltaDef::NormalizedPartial { axis: 0 },
            DeltaDef::NormalizedPartial { axis: 1 },
        ],
        traces,
        hypotheses_checked: false,
    }
}

/// Four copies of the torus algebra with the two partial derivatives and the
/// four quadrant-integration traces. The carrier of bi-singular symbols.
pub fn torus4() -> Arc<Context> {
    static CACHE: OnceLock<Arc<Context>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            torus4_unchecked()
                .verified()
                .expect("torus4 hypotheses hold")
        })
        .clone()
}

/// The quantum torus at `q = zeta_order`, twisted by conjugation with
/// `W = U^r V^s`, carrying the inner derivations `a -> x_i a - sigma(a) x_i`
/// and the weighted trace `a -> constant coefficient of a W^{-2}`.
///
/// Construction runs the hypothesis checker on monomials `|m|,|n| <= 4` and
/// fails with the violated law if the parameters do not produce a valid
/// twisted datum (for instance when `order` does not divide `2r` and `2s`).
pub fn quantum_torus(
    order: u32,
    r: i64,
    s: i64,
    x1: QTorusElement,
    x2: QTorusElement,
) -> Result<Arc<Context>, Error> {
    quantum_torus_unchecked(order, r, s, x1, x2, false).verified()
}

/// The raw quantum-torus context, not yet run through the checker. With
/// `one_dimensional` set, keeps only `delta_1` and weights the trace by
/// `W^{-1}` (twist power 1) instead of `W^{-2}`.
pub fn quantum_torus_unchecked(
    order: u32,
    r: i64,
    s: i64,
    x1: QTorusElement,
    x2: QTorusElement,
    one_dimensional: bool,
) -> Context {
    let field = cyclo_field(order);
    assert_eq!(x1.field().order(), order, "x1 lives in the wrong field");
    assert_eq!(x2.field().order(), order, "x2 lives in the wrong field");
    let (weight_power, twist_power, trace_name) = if one_dimensional {
        (1, 1, "tau_W1")
    } else {
        (2, 2, "tau_W")
    };
    let weight = qtorus_weight(&field, r, s, weight_power);
    let mut deltas = vec![
        DeltaDef::TwistedInner { x: x1 },
        DeltaDef::TwistedInner { x: x2 },
    ];
    if one_dimensional {
        deltas.truncate(1);
    }
    let suffix = if one_dimensional { ", xi1 axis" } else { "" };
    Context {
        label: format!("qtorus(N={order}, r={r}, s={s}{suffix})"),
        instance: InstanceKind::QTorus { field },
        sigma: SigmaDef::QTorusConjugation { r, s },
        deltas,
        traces: vec![Trace {
            name: trace_name.to_string(),
            def: TraceDef::QTorusWeighted { weight },
            kind: TraceKind {
                twist_power,
                delta_invariant: true,
                sigma_invariant: true,
            },
        }],
        hypotheses_checked: false,
    }
}

/// The default twisted instance: `q = -1`, `W = U V`, `x_1 = U^2`,
/// `x_2 = V^2`. Here `sigma(U) = -U`, so the twist is genuinely non-trivial.
pub fn quantum_torus_default() -> Arc<Context> {
    static CACHE: OnceLock<Arc<Context>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let field = cyclo_field(2);
            let u = QTorusElement::generator_u(&field);
            let v = QTorusElement::generator_v(&field);
            quantum_torus(2, 1, 1, u.mul(&u), v.mul(&v))
                .expect("default quantum torus hypotheses hold")
        })
        .clone()
}

/// The one-delta restriction of a two-delta context, for the one-dimensional
/// symbol calculus. Keeps `delta_1` only. On the quantum torus the trace is
/// re-weighted to `a -> constant coefficient of a W^{-1}`, which satisfies
/// the once-twisted trace law `tau(ab) = tau(sigma(b) a)`.
pub fn one_dimensional(ctx: &Arc<Context>) -> Result<Arc<Context>, Error> {
    use std::collections::HashMap;
    use std::sync::Mutex;
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Context>>>> = OnceLock::new();
    let key = Arc::as_ptr(ctx) as usize;
    if let Some(hit) = CACHE
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap()
        .get(&key)
    {
        return Ok(hit.clone());
    }
    let restricted = one_dimensional_uncached(ctx)?;
    CACHE
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap()
        .insert(key, restricted.clone());
    Ok(restricted)
}

fn one_dimensional_uncached(ctx: &Arc<Context>) -> Result<Arc<Context>, Error> {
    if ctx.num_deltas() != 2 {
        return Err(Error::Unsupported(
            "context is already one-dimensional".to_string(),
        ));
    }
    let mut inner = (**ctx).clone();
    inner.deltas.truncate(1);
    inner.label = format!("{} (xi1 axis)", ctx.label());
    if let (InstanceKind::QTorus { field }, SigmaDef::QTorusConjugation { r, s }) =
        (&inner.instance, &inner.sigma)
    {
        let weight = qtorus_weight(field, *r, *s, 1);
        inner.traces = vec![Trace {
            name: "tau_W1".to_string(),
            def: TraceDef::QTorusWeighted { weight },
            kind: TraceKind {
                twist_power: 1,
                delta_invariant: true,
                sigma_invariant: true,
            },
        }];
    }
    inner.hypotheses_checked = false;
    inner.verified()
}

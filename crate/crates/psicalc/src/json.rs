//! Deterministic JSON documents for the command-line front end: coefficient
//! tables with floors and tops, trace reports, and error envelopes.
//!
//! Determinism: term lists are sorted by order (pair), components appear in
//! the fixed order (1,1), (1,2), (2,1), (2,2), and object keys come out of
//! sorted maps, so identical inputs yield byte-identical output.

use serde_json::{json, Map, Value as Json};

use crate::algebra::HypothesisReport;
use crate::instances::TrigPoly;
use crate::scalar::Scalar;
use crate::symbols::{Floor, Symbol1D, Symbol2D};
use crate::Element;

pub fn floor_json(f: Floor) -> Json {
    match f {
        Floor::MinusInfinity => json!("exact"),
        Floor::At(v) => json!(v),
    }
}

/// Elements render as their canonical strings: tuples as one string per
/// component, quantum-torus elements as a single polynomial string.
pub fn element_json(e: &Element) -> Json {
    match e {
        Element::Tuple(t) => Json::Array(
            t.components()
                .iter()
                .map(|c| json!(c.to_string()))
                .collect(),
        ),
        Element::QTorus(q) => json!(q.to_string()),
    }
}

pub fn scalar_json(s: &Scalar) -> Json {
    json!(s.to_string())
}

pub fn symbol1d_json(s: &Symbol1D) -> Json {
    let terms: Vec<Json> = s
        .terms()
        .map(|(order, coeff)| {
            json!({
                "order": order,
                "coefficient": element_json(coeff),
            })
        })
        .collect();
    json!({
        "symbol": "1d",
        "context": s.context().label(),
        "top": s.top(),
        "floor": floor_json(s.floor()),
        "terms": terms,
    })
}

pub fn symbol2d_json(s: &Symbol2D) -> Json {
    let terms: Vec<Json> = s
        .terms()
        .map(|((m, n), coeff)| {
            json!({
                "order": [m, n],
                "coefficient": element_json(coeff),
            })
        })
        .collect();
    json!({
        "symbol": "2d",
        "context": s.context().label(),
        "tops": [s.tops().0, s.tops().1],
        "floors": [floor_json(s.floors().0), floor_json(s.floors().1)],
        "terms": terms,
    })
}

pub fn report_json(report: &HypothesisReport) -> Json {
    let checks: Vec<Json> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "witness": c.witness.as_deref().map(Json::from).unwrap_or(Json::Null),
            })
        })
        .collect();
    json!({
        "context": report.context,
        "sample": report.sample_description,
        "sample_size": report.sample_size,
        "all_passed": report.all_passed(),
        "checks": checks,
    })
}

/// A trig polynomial as a frequency -> coefficient map with keys `"k"` or
/// `"k1,k2"`, matching the input format of the `apply` command.
pub fn trig_poly_json(p: &TrigPoly) -> Json {
    let mut map = Map::new();
    for (freq, coeff) in p.terms() {
        let key = if p.dim() == 1 {
            format!("{}", freq[0])
        } else {
            format!("{},{}", freq[0], freq[1])
        };
        map.insert(key, json!(coeff.to_string()));
    }
    Json::Object(map)
}

pub fn error_json(code: i32, kind: &str, message: &str) -> Json {
    json!({
        "error": {
            "exit": code,
            "kind": kind,
            "message": message,
        }
    })
}

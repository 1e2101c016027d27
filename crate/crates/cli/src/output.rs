//! Deterministic JSON assembly. Documents are ordered maps built field by
//! field; reals are emitted with 17 significant digits via the
//! arbitrary-precision number type, and big integers verbatim, so identical
//! runs produce byte-identical output.

use serde_json::{Map, Number, Value};

use iccc_core::ff::ExtensionField;
use iccc_core::gauss::GaussPhase;
use iccc_core::graphs::Graph;
use iccc_core::mceliece::CosetPartition;
use iccc_core::membership::{AcceptanceRoute, MembershipVerdict};
use iccc_core::pipeline::{PartitionOutcome, Route};
use iccc_core::potts::PartitionFunction;

use crate::CommonArgs;

/// An insertion-ordered JSON object under construction.
pub struct Doc {
    map: Map<String, Value>,
}

impl Doc {
    pub fn new() -> Self {
        Doc { map: Map::new() }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.map.insert(key.to_string(), value.into());
        self
    }
}

impl From<Doc> for Value {
    fn from(d: Doc) -> Value {
        Value::Object(d.map)
    }
}

/// A real with 17 significant digits, as a raw JSON number.
pub fn real(x: f64) -> Value {
    let s = format!("{x:.16e}");
    Value::Number(s.parse::<Number>().expect("formatted float is a JSON number"))
}

/// An arbitrary-precision integer, verbatim.
pub fn big(x: &num_bigint::BigUint) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("decimal integer"))
}

pub fn json_out(doc: &Doc) {
    println!("{}", Value::Object(doc.map.clone()));
}

pub fn edge_list(edges: &[(usize, usize)]) -> Value {
    Value::Array(
        edges
            .iter()
            .map(|&(u, v)| Value::Array(vec![(u as u64).into(), (v as u64).into()]))
            .collect(),
    )
}

pub fn field_doc(field: &ExtensionField) -> Doc {
    Doc::new()
        .field("q", field.q())
        .field("k", field.degree() as u64)
        .field(
            "modulus",
            Value::Array(field.modulus().iter().map(|&c| c.into()).collect()),
        )
        .field(
            "generator",
            Value::Array(field.generator().coeffs().iter().map(|&c| c.into()).collect()),
        )
}

pub fn route_str(route: Route) -> &'static str {
    match route {
        Route::CodesPipeline => "codes-pipeline",
        Route::BruteForceFallback => "bruteforce-fallback",
    }
}

pub fn verdict_doc(v: &MembershipVerdict) -> Doc {
    let blocks: Vec<Value> = v
        .blocks
        .iter()
        .map(|b| {
            let logs: Vec<Value> =
                b.log_list.iter().map(|&l| Value::from(l as u64)).collect();
            let cols: Vec<Value> = b.cols.iter().map(|&c| Value::from(c as u64)).collect();
            Doc::new()
                .field("columns", Value::Array(cols))
                .field("params", crate::dual_params_doc(&b.params))
                .field("theta", u64::from(b.theta.theta))
                .field("epsilon0", real(b.theta.epsilon0))
                .field(
                    "accepted_by",
                    match b.route {
                        AcceptanceRoute::LogPattern => "log-pattern",
                        AcceptanceRoute::TraceCodeEquality => "trace-code-equality",
                    },
                )
                .field("logs", Value::Array(logs))
                .into()
        })
        .collect();
    Doc::new()
        .field("accepted", v.accepted)
        .field("reason", v.reason.as_str())
        .field("n", v.n as u64)
        .field("k", v.k as u64)
        .field("components", v.components as u64)
        .field("dual_generator", matrix_rows(&v.dual_generator))
        .field("blocks", Value::Array(blocks))
}

/// Row-major integer matrix.
pub fn matrix_rows(m: &iccc_core::mat::Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|&x| x.into()).collect()))
            .collect(),
    )
}

pub fn phase_doc(p: &GaussPhase) -> Doc {
    Doc::new()
        .field("exact_phase", real(p.exact_phase))
        .field("magnitude", real(p.magnitude))
        .field("noisy_phase", real(p.noisy_phase))
        .field("epsilon", real(p.epsilon))
        .field("failed", p.failed)
}

pub fn spectrum_doc(s: &iccc_core::codes::WeightSpectrum) -> Value {
    let mut map = Map::new();
    for (w, c) in s.iter() {
        map.insert(w.to_string(), big(c));
    }
    Value::Object(map)
}

pub fn partition_fn_doc(z: &PartitionFunction, betas: &[f64], coupling: f64) -> Doc {
    let terms: Vec<Value> = z
        .terms
        .iter()
        .map(|(&e, c)| {
            Doc::new()
                .field("exponent", e)
                .field("coefficient", big(c))
                .into()
        })
        .collect();
    let evals: Vec<Value> = betas
        .iter()
        .map(|&b| {
            Doc::new()
                .field("beta", real(b))
                .field("J", real(coupling))
                .field("value", real(z.evaluate(b, coupling)))
                .into()
        })
        .collect();
    Doc::new()
        .field("q", z.meta.q)
        .field("V", z.meta.vertices as u64)
        .field("E", z.meta.edges as u64)
        .field("components", z.meta.components as u64)
        .field("terms", Value::Array(terms))
        .field("evaluations", Value::Array(evals))
}

pub fn stages_doc(out: &PartitionOutcome) -> Value {
    let blocks: Vec<Value> = out
        .stages
        .iter()
        .zip(&out.verdict.blocks)
        .map(|(s, b)| {
            let phases: Vec<Value> =
                s.phases.iter().map(|p| Value::from(phase_doc(p))).collect();
            let rows: Vec<Value> = s
                .table
                .entries
                .iter()
                .map(|e| {
                    Doc::new()
                        .field("representative", e.representative)
                        .field("raw", real(e.raw))
                        .field("rounded", e.rounded)
                        .field("multiplicity", e.multiplicity)
                        .into()
                })
                .collect();
            Doc::new()
                .field("params", crate::dual_params_doc(&b.params))
                .field("phases", Value::Array(phases))
                .field("weight_table", Value::Array(rows))
                .field("dual_spectrum", spectrum_doc(&s.dual_spectrum))
                .into()
        })
        .collect();
    Value::Array(blocks)
}

pub fn partition_doc(
    common: &CommonArgs,
    g: &Graph,
    out: &PartitionOutcome,
    betas: &[f64],
    coupling: f64,
) -> Doc {
    let mut doc = Doc::new()
        .field("command", "partition")
        .field("config", crate::config_doc(common))
        .field("graph", crate::graph_doc(g))
        .field("verdict", verdict_doc(&out.verdict))
        .field("route", route_str(out.route));
    if out.route == Route::CodesPipeline {
        doc = doc.field("blocks", stages_doc(out));
        if let Some(p) = &out.primal_spectrum {
            doc = doc.field("cocycle_spectrum", spectrum_doc(p));
        }
    }
    doc.field(
        "partition_function",
        partition_fn_doc(&out.partition, betas, coupling),
    )
}

pub fn cosets_doc(p: &CosetPartition) -> Value {
    Value::Array(
        p.cosets
            .iter()
            .map(|c| Value::Array(c.iter().map(|&x| Value::from(x)).collect()))
            .collect(),
    )
}

//! Serializable report documents. Field order is declaration order, so the
//! output is stable for fixed inputs and flags.

use serde::Serialize;
use serde_json::Value;
use smallgain::algebra::{Coefficient, GainFunction};
use smallgain::cycles::{elementary_cycle_bound, max_cycle_count_bound, CycleReport};
use smallgain::format::{gain_to_json, inverse_to_json, SCHEMA_VERSION};
use smallgain::lyapunov::LyapunovDescriptor;
use smallgain::omega::Violation;
use smallgain::Network;

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Self {
            name: "smallgain",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Gain {
    pub text: String,
    pub terms: Value,
}

impl From<&GainFunction> for Gain {
    fn from(g: &GainFunction) -> Self {
        Self {
            text: g.to_string(),
            terms: gain_to_json(g),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Point {
    pub text: String,
    pub approx: f64,
}

impl From<&Coefficient> for Point {
    fn from(c: &Coefficient) -> Self {
        Self {
            text: c.to_string(),
            approx: c.to_f64(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NetworkSummary {
    pub nodes: usize,
    pub gains: usize,
}

impl From<&Network> for NetworkSummary {
    fn from(n: &Network) -> Self {
        Self {
            nodes: n.len(),
            gains: n.edge_count(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CycleEntry {
    pub nodes: Vec<String>,
    pub composition: Gain,
    pub subidentity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Point>,
}

#[derive(Debug, Serialize)]
pub struct Bounds {
    /// Elementary cycles of the complete digraph on the same node count.
    pub elementary: String,
    /// Same, counting every rotation separately.
    pub sequences: String,
}

#[derive(Debug, Serialize)]
pub struct CycleSection {
    pub holds: bool,
    pub complete: bool,
    pub count: usize,
    pub longest: usize,
    pub bounds: Bounds,
    pub cycles: Vec<CycleEntry>,
}

impl CycleSection {
    pub fn new(net: &Network, r: &CycleReport) -> Self {
        let n = net.len() as u64;
        Self {
            holds: r.overall,
            complete: r.complete,
            count: r.cycle_count,
            longest: r.max_cycle_len,
            bounds: Bounds {
                elementary: elementary_cycle_bound(n).to_string(),
                sequences: max_cycle_count_bound(n).to_string(),
            },
            cycles: r
                .checks
                .iter()
                .map(|c| CycleEntry {
                    nodes: c.cycle.labels(net).into_iter().map(String::from).collect(),
                    composition: (&c.composition).into(),
                    subidentity: c.subidentity,
                    witness: c.witness.as_ref().map(Point::from),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ViolationEntry {
    pub node: String,
    pub witness: Point,
}

impl From<&Violation> for ViolationEntry {
    fn from(v: &Violation) -> Self {
        Self {
            node: v.node.clone(),
            witness: (&v.witness).into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Stage {
    pub stage: &'static str,
    pub millis: f64,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u64,
    pub tool: Tool,
    pub command: &'static str,
    pub network: NetworkSummary,
    pub verdict: &'static str,
    pub cycles: CycleSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<Stage>>,
}

#[derive(Debug, Serialize)]
pub struct ReductionSection {
    pub rules: Vec<&'static str>,
    pub nodes_before: usize,
    pub nodes_after: usize,
    pub network: Value,
    pub provenance: Value,
}

#[derive(Debug, Serialize)]
pub struct OmegaSection {
    /// `search` or `file`.
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<Vec<String>>,
    pub reduced: Value,
    pub reduced_violations: Vec<ViolationEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifted: Option<Value>,
    pub lifted_violations: Vec<ViolationEntry>,
}

#[derive(Debug, Serialize)]
pub struct InverseEntry {
    pub node: String,
    pub text: String,
    pub terms: Value,
}

#[derive(Debug, Serialize)]
pub struct LyapunovSection {
    pub form: &'static str,
    pub inverses: Vec<InverseEntry>,
}

impl From<&LyapunovDescriptor> for LyapunovSection {
    fn from(d: &LyapunovDescriptor) -> Self {
        Self {
            form: "V(x) = max_i sigma_i^{-1}(V_i(x_i))",
            inverses: d
                .labels()
                .iter()
                .zip(d.inverses())
                .map(|(l, g)| InverseEntry {
                    node: l.clone(),
                    text: g.to_string(),
                    terms: inverse_to_json(g),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FullReport {
    pub schema_version: u64,
    pub tool: Tool,
    pub command: &'static str,
    pub network: NetworkSummary,
    /// `holds`, `fails` or `omega-failed`.
    pub verdict: &'static str,
    pub reduction: ReductionSection,
    pub reduced_cycles: CycleSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lyapunov: Option<LyapunovSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<Stage>>,
}

pub const REPORT_SCHEMA: u64 = SCHEMA_VERSION;

//! JSON encodings of networks, gains, Ω-paths and provenance logs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{Coefficient, GainFunction, InverseGain, PowerTerm};
use crate::error::{Error, Result};
use crate::graph::{Network, NetworkDraft};
use crate::omega::OmegaPath;
use crate::reduction::{
    GainEntry, Motif, ParallelMotif, ProvenanceLog, ReductionStep, RuleKind, SequentialMotif, SubgraphMotif,
};

pub const SCHEMA_VERSION: u64 = 1;

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("{path}: {msg}"))
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str], strict: bool) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| err(path, "expected an object"))?;
    if strict {
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(err(path, format!("unknown key `{k}`")));
        }
    }
    Ok(obj)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(path, format!("missing `{key}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn integer(v: &Value, path: &str) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(u) = v.as_u64() {
        return Ok(BigInt::from(u));
    }
    if let Some(s) = v.as_str() {
        return s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| err(path, format!("`{s}` is not an integer")));
    }
    Err(err(path, "expected an integer"))
}

/// Parses fraction (`"1/3"`) or plain decimal (`"0.125"`) text exactly.
/// Exponent notation is not accepted.
pub fn parse_rational_text(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let den = BigInt::from(10u8).pow(frac.len() as u32);
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

/// `{"num", "den"}`, a decimal or fraction string, or a bare integer.
pub fn parse_rational(v: &Value, path: &str, strict: bool) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            parse_rational_text(s).ok_or_else(|| err(path, format!("`{s}` is not a rational")))
        }
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(BigRational::from_integer(integer(v, path)?)),
        Value::Number(n) => Err(err(
            path,
            format!("{n} is a binary float; write it as a string or as num/den"),
        )),
        Value::Object(_) => {
            let obj = object(v, path, &["num", "den"], strict)?;
            let num = integer(field(obj, "num", path)?, &format!("{path}.num"))?;
            let den = match obj.get("den") {
                Some(d) => integer(d, &format!("{path}.den"))?,
                None => BigInt::one(),
            };
            if !den.is_positive() {
                return Err(err(path, "denominator must be positive"));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(err(path, "expected a rational")),
    }
}

pub fn parse_coefficient(v: &Value, path: &str, strict: bool) -> Result<Coefficient> {
    if let Some(obj) = v.as_object() {
        if obj.contains_key("factors") {
            let obj = object(v, path, &["factors"], strict)?;
            let items = array(field(obj, "factors", path)?, &format!("{path}.factors"))?;
            let mut pairs = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let p = format!("{path}.factors[{i}]");
                let f = object(item, &p, &["base", "exp"], strict)?;
                let base = parse_rational(field(f, "base", &p)?, &format!("{p}.base"), strict)?;
                let exp = parse_rational(field(f, "exp", &p)?, &format!("{p}.exp"), strict)?;
                pairs.push((base, exp));
            }
            return Coefficient::from_factors(pairs.iter().map(|(b, e)| (b, e))).map_err(|e| err(path, e));
        }
    }
    let r = parse_rational(v, path, strict)?;
    Coefficient::from_ratio(&r).map_err(|e| err(path, e))
}

pub fn parse_gain(terms: &Value, path: &str, strict: bool) -> Result<GainFunction> {
    let items = array(terms, path)?;
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let t = object(item, &p, &["coeff", "exp"], strict)?;
        let coeff = parse_coefficient(field(t, "coeff", &p)?, &format!("{p}.coeff"), strict)?;
        let exp = parse_rational(field(t, "exp", &p)?, &format!("{p}.exp"), strict)?;
        out.push(PowerTerm::new(coeff, exp).map_err(|e| err(&p, e))?);
    }
    GainFunction::from_terms(out)
}

fn int_json(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => json!(v),
        None => json!(i.to_string()),
    }
}

pub fn rational_to_json(r: &BigRational) -> Value {
    json!({ "num": int_json(r.numer()), "den": int_json(r.denom()) })
}

pub fn coefficient_to_json(c: &Coefficient) -> Value {
    if let Some(r) = c.as_rational() {
        return rational_to_json(&r);
    }
    let factors: Vec<Value> = c
        .factors()
        .map(|(b, e)| {
            json!({
                "base": rational_to_json(&BigRational::from_integer(BigInt::from(b.clone()))),
                "exp": rational_to_json(e),
            })
        })
        .collect();
    json!({ "factors": factors })
}

fn terms_to_json<'a>(terms: impl Iterator<Item = &'a PowerTerm>) -> Value {
    Value::Array(
        terms
            .map(|t| json!({ "coeff": coefficient_to_json(t.coeff()), "exp": rational_to_json(t.exp()) }))
            .collect(),
    )
}

pub fn gain_to_json(g: &GainFunction) -> Value {
    terms_to_json(g.terms().iter())
}

pub fn inverse_to_json(g: &InverseGain) -> Value {
    terms_to_json(g.terms().iter())
}

/// Reads a network document. With `strict`, unknown keys are errors.
pub fn network_from_json(v: &Value, strict: bool) -> Result<Network> {
    let top = object(v, "$", &["schema_version", "name", "nodes", "gains"], strict)?;
    let mut draft = NetworkDraft::default();
    for (i, n) in array(field(top, "nodes", "$")?, "$.nodes")?.iter().enumerate() {
        let p = format!("$.nodes[{i}]");
        let obj = object(n, &p, &["id", "meta"], strict)?;
        let id = string(field(obj, "id", &p)?, &format!("{p}.id"))?;
        draft.nodes.push((id.to_string(), obj.get("meta").cloned()));
    }
    let gains = match top.get("gains") {
        Some(g) => array(g, "$.gains")?.as_slice(),
        None => &[],
    };
    for (i, g) in gains.iter().enumerate() {
        let p = format!("$.gains[{i}]");
        let obj = object(g, &p, &["to", "from", "terms"], strict)?;
        let to = string(field(obj, "to", &p)?, &format!("{p}.to"))?;
        let from = string(field(obj, "from", &p)?, &format!("{p}.from"))?;
        let gain = parse_gain(field(obj, "terms", &p)?, &format!("{p}.terms"), strict)?;
        draft.gains.push((to.to_string(), from.to_string(), gain));
    }
    draft.build()
}

pub fn network_from_str(s: &str, strict: bool) -> Result<Network> {
    network_from_json(&serde_json::from_str(s)?, strict)
}

pub fn network_to_json(net: &Network) -> Value {
    let nodes: Vec<Value> = (0..net.len())
        .map(|v| match net.meta(v) {
            Some(m) => json!({ "id": net.label(v), "meta": m }),
            None => json!({ "id": net.label(v) }),
        })
        .collect();
    let gains: Vec<Value> = net
        .gains()
        .map(|((to, from), g)| {
            json!({ "to": net.label(to), "from": net.label(from), "terms": gain_to_json(g) })
        })
        .collect();
    json!({ "schema_version": SCHEMA_VERSION, "nodes": nodes, "gains": gains })
}

pub fn omega_to_json(p: &OmegaPath) -> Value {
    let comps: Vec<Value> = p
        .labels()
        .iter()
        .zip(p.components())
        .map(|(l, g)| json!({ "node": l, "text": g.to_string(), "terms": gain_to_json(g) }))
        .collect();
    json!({ "verified": p.is_verified(), "components": comps })
}

/// Reads `{"components": [{"node", "terms"}]}`; the result is unverified.
pub fn omega_from_json(v: &Value, strict: bool) -> Result<OmegaPath> {
    let top = object(v, "$", &["verified", "components"], strict)?;
    let mut pairs = Vec::new();
    for (i, c) in array(field(top, "components", "$")?, "$.components")?
        .iter()
        .enumerate()
    {
        let p = format!("$.components[{i}]");
        let obj = object(c, &p, &["node", "text", "terms"], strict)?;
        let node = string(field(obj, "node", &p)?, &format!("{p}.node"))?;
        let gain = parse_gain(field(obj, "terms", &p)?, &format!("{p}.terms"), strict)?;
        pairs.push((node.to_string(), gain));
    }
    let labels: BTreeSet<&String> = pairs.iter().map(|(l, _)| l).collect();
    if labels.len() != pairs.len() {
        return Err(err("$.components", "duplicate node"));
    }
    OmegaPath::from_pairs(pairs)
}

fn entry_to_json(e: &GainEntry) -> Value {
    json!({ "to": e.to, "from": e.from, "text": e.gain.to_string(), "terms": gain_to_json(&e.gain) })
}

fn entry_from_json(v: &Value, path: &str) -> Result<GainEntry> {
    let obj = object(v, path, &["to", "from", "text", "terms"], false)?;
    Ok(GainEntry {
        to: string(field(obj, "to", path)?, path)?.to_string(),
        from: string(field(obj, "from", path)?, path)?.to_string(),
        gain: parse_gain(field(obj, "terms", path)?, path, false)?,
    })
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>> {
    array(v, path)?
        .iter()
        .map(|s| string(s, path).map(str::to_string))
        .collect()
}

fn motif_to_json(m: &Motif) -> Value {
    match m {
        Motif::Sequential(s) => json!({ "entry": s.entry, "chain": s.chain, "exit": s.exit }),
        Motif::Parallel(p) => json!({ "source": p.source, "branches": p.branches, "sink": p.sink }),
        Motif::Subgraph(s) => json!({ "gateway": s.gateway, "interior": s.interior }),
    }
}

fn motif_from_json(kind: RuleKind, v: &Value, path: &str) -> Result<Motif> {
    let obj = v.as_object().ok_or_else(|| err(path, "expected an object"))?;
    let s = |k: &str| -> Result<String> { Ok(string(field(obj, k, path)?, path)?.to_string()) };
    let list = |k: &str| strings(field(obj, k, path)?, path);
    Ok(match kind {
        RuleKind::Sequential => Motif::Sequential(SequentialMotif {
            entry: s("entry")?,
            chain: list("chain")?,
            exit: s("exit")?,
        }),
        RuleKind::Parallel => Motif::Parallel(ParallelMotif {
            source: s("source")?,
            branches: list("branches")?,
            sink: s("sink")?,
        }),
        RuleKind::Subgraph => Motif::Subgraph(SubgraphMotif {
            gateway: s("gateway")?,
            interior: list("interior")?,
        }),
    })
}

pub fn step_to_json(s: &ReductionStep) -> Value {
    let mapping: Vec<Value> = s
        .mapping
        .iter()
        .map(|(old, new)| json!({ "old": old, "new": new }))
        .collect();
    json!({
        "kind": s.kind.as_str(),
        "motif": motif_to_json(&s.motif),
        "merged": s.merged,
        "mapping": mapping,
        "consumed": s.consumed.iter().map(entry_to_json).collect::<Vec<_>>(),
        "produced": s.produced.iter().map(entry_to_json).collect::<Vec<_>>(),
    })
}

pub fn provenance_to_json(log: &ProvenanceLog) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "initial": network_to_json(&log.initial),
        "steps": log.steps.iter().map(step_to_json).collect::<Vec<_>>(),
        "final": network_to_json(&log.final_network),
    })
}

pub fn provenance_from_json(v: &Value) -> Result<ProvenanceLog> {
    let top = object(v, "$", &[], false)?;
    let initial = network_from_json(field(top, "initial", "$")?, false)?;
    let final_network = network_from_json(field(top, "final", "$")?, false)?;
    let mut steps = Vec::new();
    for (i, s) in array(field(top, "steps", "$")?, "$.steps")?.iter().enumerate() {
        let p = format!("$.steps[{i}]");
        let obj = s.as_object().ok_or_else(|| err(&p, "expected an object"))?;
        let kind: RuleKind = string(field(obj, "kind", &p)?, &p)?.parse()?;
        let motif = motif_from_json(kind, field(obj, "motif", &p)?, &format!("{p}.motif"))?;
        let mut mapping = Vec::new();
        for m in array(field(obj, "mapping", &p)?, &p)? {
            let mo = m.as_object().ok_or_else(|| err(&p, "bad mapping"))?;
            mapping.push((
                string(field(mo, "old", &p)?, &p)?.to_string(),
                string(field(mo, "new", &p)?, &p)?.to_string(),
            ));
        }
        let entries = |k: &str| -> Result<Vec<GainEntry>> {
            array(field(obj, k, &p)?, &p)?
                .iter()
                .map(|e| entry_from_json(e, &format!("{p}.{k}")))
                .collect()
        };
        steps.push(ReductionStep {
            kind,
            motif,
            merged: string(field(obj, "merged", &p)?, &p)?.to_string(),
            mapping,
            consumed: entries("consumed")?,
            produced: entries("produced")?,
        });
    }
    Ok(ProvenanceLog {
        initial,
        steps,
        final_network,
    })
}

use std::collections::BTreeSet;

use super::{GainEntry, Motif, ParallelMotif, ReductionStep, RuleKind, SequentialMotif, SubgraphMotif};
use crate::algebra::GainFunction;
use crate::cycles::{cycle_composition, enumerate_elementary_cycles};
use crate::error::{Error, Result};
use crate::graph::{natural_cmp, Network, NetworkDraft};

fn invalid(msg: impl Into<String>) -> Error {
    Error::MotifInvalidated(msg.into())
}

fn idx(net: &Network, label: &str) -> Result<usize> {
    net.index_of(label)
        .map_err(|_| invalid(format!("node `{label}` is gone")))
}

fn entry(net: &Network, to: usize, from: usize) -> Option<GainEntry> {
    net.gain(to, from).map(|g| GainEntry {
        to: net.label(to).to_string(),
        from: net.label(from).to_string(),
        gain: g.clone(),
    })
}

/// Copy of `net` without `removed`, with `touched` gains dropped and `extra`
/// gains added (replacing any existing entry).
fn rebuild(
    net: &Network,
    removed: &BTreeSet<usize>,
    added_node: Option<(String, Option<serde_json::Value>)>,
    extra: &[GainEntry],
) -> Result<Network> {
    let mut draft = NetworkDraft::default();
    for v in 0..net.len() {
        if !removed.contains(&v) {
            draft.nodes.push((net.label(v).to_string(), net.meta(v).cloned()));
        }
    }
    if let Some(n) = added_node {
        draft.nodes.push(n);
    }
    let replaced: BTreeSet<(&str, &str)> = extra.iter().map(|e| (e.to.as_str(), e.from.as_str())).collect();
    for ((to, from), g) in net.gains() {
        if removed.contains(&to) || removed.contains(&from) {
            continue;
        }
        if replaced.contains(&(net.label(to), net.label(from))) {
            continue;
        }
        draft
            .gains
            .push((net.label(to).to_string(), net.label(from).to_string(), g.clone()));
    }
    for e in extra {
        draft.gains.push((e.to.clone(), e.from.clone(), e.gain.clone()));
    }
    draft.build()
}

pub fn aggregate_sequential(net: &Network, m: &SequentialMotif) -> Result<(Network, ReductionStep)> {
    if m.chain.is_empty() {
        return Err(invalid("empty chain"));
    }
    let v = idx(net, &m.entry)?;
    let exit = idx(net, &m.exit)?;
    let chain = m.chain.iter().map(|l| idx(net, l)).collect::<Result<Vec<_>>>()?;
    let distinct: BTreeSet<usize> = chain.iter().copied().collect();
    if distinct.len() != chain.len() || distinct.contains(&v) || distinct.contains(&exit) || v == exit {
        return Err(invalid("chain overlaps its entry or exit"));
    }
    let mut prev = v;
    for (i, &w) in chain.iter().enumerate() {
        let next = chain.get(i + 1).copied().unwrap_or(exit);
        if net.predecessors(w) != [prev] || net.successors(w) != [next] {
            return Err(invalid(format!(
                "`{}` is not a single-in/single-out link of the chain",
                net.label(w)
            )));
        }
        prev = w;
    }

    let mut consumed = Vec::new();
    let mut composed = GainFunction::identity();
    let mut from = v;
    for &w in chain.iter().chain(std::iter::once(&exit)) {
        let e = entry(net, w, from).expect("checked above");
        composed = e.gain.compose(&composed)?;
        consumed.push(e);
        from = w;
    }
    let shortcut = entry(net, exit, v);
    if let Some(s) = &shortcut {
        composed = composed.max(&s.gain)?;
        consumed.push(s.clone());
    }
    let produced = vec![GainEntry {
        to: m.exit.clone(),
        from: m.entry.clone(),
        gain: composed,
    }];
    let next = rebuild(net, &distinct, None, &produced)?;
    let mut mapping: Vec<(String, String)> = std::iter::once(&m.entry)
        .chain(&m.chain)
        .map(|l| (l.clone(), m.entry.clone()))
        .collect();
    mapping.sort_by(|a, b| natural_cmp(&a.0, &b.0));
    Ok((
        next,
        ReductionStep {
            kind: RuleKind::Sequential,
            motif: Motif::Sequential(m.clone()),
            merged: m.entry.clone(),
            mapping,
            consumed,
            produced,
        },
    ))
}

pub fn aggregate_parallel(net: &Network, m: &ParallelMotif) -> Result<(Network, ReductionStep)> {
    if m.branches.len() < 2 {
        return Err(invalid("a parallel motif needs at least two branches"));
    }
    let v = idx(net, &m.source)?;
    let sink = idx(net, &m.sink)?;
    let mut branches = m
        .branches
        .iter()
        .map(|l| idx(net, l))
        .collect::<Result<Vec<_>>>()?;
    branches.sort_unstable();
    let distinct: BTreeSet<usize> = branches.iter().copied().collect();
    if distinct.len() != branches.len() || distinct.contains(&v) || distinct.contains(&sink) || v == sink {
        return Err(invalid("branches overlap source or sink"));
    }
    for &b in &branches {
        if net.predecessors(b) != [v] || net.successors(b) != [sink] {
            return Err(invalid(format!(
                "`{}` is not a branch between `{}` and `{}`",
                net.label(b),
                m.source,
                m.sink
            )));
        }
    }
    let mut consumed = Vec::new();
    let mut combined = GainFunction::zero();
    for &b in &branches {
        let first = entry(net, b, v).expect("checked above");
        let second = entry(net, sink, b).expect("checked above");
        combined = combined.max(&second.gain.compose(&first.gain)?)?;
        consumed.push(first);
        consumed.push(second);
    }
    if let Some(s) = entry(net, sink, v) {
        combined = combined.max(&s.gain)?;
        consumed.push(s);
    }
    let produced = vec![GainEntry {
        to: m.sink.clone(),
        from: m.source.clone(),
        gain: combined,
    }];
    let next = rebuild(net, &distinct, None, &produced)?;
    let mut mapping: Vec<(String, String)> = std::iter::once(&m.source)
        .chain(&m.branches)
        .map(|l| (l.clone(), m.source.clone()))
        .collect();
    mapping.sort_by(|a, b| natural_cmp(&a.0, &b.0));
    let mut motif = m.clone();
    motif.branches = branches.iter().map(|&b| net.label(b).to_string()).collect();
    Ok((
        next,
        ReductionStep {
            kind: RuleKind::Parallel,
            motif: Motif::Parallel(motif),
            merged: m.source.clone(),
            mapping,
            consumed,
            produced,
        },
    ))
}

pub fn aggregate_subgraph(
    net: &Network,
    m: &SubgraphMotif,
    cycle_budget: usize,
) -> Result<(Network, ReductionStep)> {
    let gate = idx(net, &m.gateway)?;
    let interior: BTreeSet<usize> = m.interior.iter().map(|l| idx(net, l)).collect::<Result<_>>()?;
    if interior.is_empty() || interior.contains(&gate) || interior.len() != m.interior.len() {
        return Err(invalid(
            "interior must be nonempty, distinct and exclude the gateway",
        ));
    }
    for ((to, from), _) in net.gains() {
        let (ti, fi) = (interior.contains(&to), interior.contains(&from));
        if ti != fi {
            let outside = if ti { from } else { to };
            if outside != gate {
                return Err(invalid(format!(
                    "`{}` links the interior to the rest without passing `{}`",
                    net.label(outside),
                    m.gateway
                )));
            }
        }
    }
    let mut region: Vec<usize> = interior.iter().copied().collect();
    region.push(gate);
    let sub = net.induced(&region);
    if !sub.is_strongly_connected() {
        return Err(invalid("interior plus gateway is not strongly connected"));
    }
    let cycles = enumerate_elementary_cycles(&sub, cycle_budget)?;
    if cycles.is_empty() {
        return Err(invalid("no cycle inside the motif"));
    }
    let mut loop_gain = GainFunction::zero();
    for c in &cycles {
        loop_gain = loop_gain.max(&cycle_composition(&sub, c)?)?;
    }

    let merged = interior
        .iter()
        .map(|&v| net.label(v))
        .min_by(|a, b| natural_cmp(a, b))
        .expect("nonempty interior")
        .to_string();
    let consumed: Vec<GainEntry> = net
        .gains()
        .filter(|((to, from), _)| interior.contains(to) || interior.contains(from))
        .map(|((to, from), _)| entry(net, to, from).expect("present"))
        .collect();
    let produced = vec![
        GainEntry {
            to: merged.clone(),
            from: m.gateway.clone(),
            gain: loop_gain,
        },
        GainEntry {
            to: m.gateway.clone(),
            from: merged.clone(),
            gain: GainFunction::identity(),
        },
    ];
    let meta = net.meta(idx(net, &merged)?).cloned();
    let next = rebuild(net, &interior, Some((merged.clone(), meta)), &produced)?;
    let mut labels: Vec<String> = interior.iter().map(|&v| net.label(v).to_string()).collect();
    labels.sort_by(|a, b| natural_cmp(a, b));
    let mapping = labels.iter().map(|l| (l.clone(), merged.clone())).collect();
    Ok((
        next,
        ReductionStep {
            kind: RuleKind::Subgraph,
            motif: Motif::Subgraph(SubgraphMotif {
                gateway: m.gateway.clone(),
                interior: labels,
            }),
            merged,
            mapping,
            consumed,
            produced,
        },
    ))
}

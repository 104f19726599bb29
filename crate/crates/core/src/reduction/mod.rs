//! Motif detection and aggregation, plus the log needed to undo it for
//! Ω-paths.

mod aggregate;
mod detect;

use std::fmt;
use std::str::FromStr;

pub use aggregate::{aggregate_parallel, aggregate_sequential, aggregate_subgraph};
pub use detect::{find_almost_disconnected, find_parallel_groups, find_sequential_chains};

use crate::algebra::GainFunction;
use crate::cycles::DEFAULT_CYCLE_BUDGET;
use crate::error::{Error, Result};
use crate::graph::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Sequential,
    Parallel,
    Subgraph,
}

impl RuleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sequential => "sequential",
            Self::Parallel => "parallel",
            Self::Subgraph => "subgraph",
        }
    }

    pub const DEFAULT_ORDER: [RuleKind; 3] = [Self::Sequential, Self::Parallel, Self::Subgraph];
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "seq" | "sequential" => Ok(Self::Sequential),
            "par" | "parallel" => Ok(Self::Parallel),
            "sub" | "subgraph" => Ok(Self::Subgraph),
            other => Err(Error::Format(format!("unknown rule `{other}`"))),
        }
    }
}

/// Parses a comma separated rule list such as `seq,par,sub`.
pub fn parse_rule_order(s: &str) -> Result<Vec<RuleKind>> {
    let rules = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(RuleKind::from_str)
        .collect::<Result<Vec<_>>>()?;
    if rules.is_empty() {
        return Err(Error::Format("empty rule list".into()));
    }
    Ok(rules)
}

/// `entry -> chain[0] -> ... -> chain[k-1] -> exit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialMotif {
    pub entry: String,
    pub chain: Vec<String>,
    pub exit: String,
}

/// `source -> b -> sink` for every branch `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelMotif {
    pub source: String,
    pub branches: Vec<String>,
    pub sink: String,
}

/// Interior nodes that touch the rest of the network only via `gateway`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphMotif {
    pub gateway: String,
    pub interior: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Motif {
    Sequential(SequentialMotif),
    Parallel(ParallelMotif),
    Subgraph(SubgraphMotif),
}

impl Motif {
    pub fn kind(&self) -> RuleKind {
        match self {
            Self::Sequential(_) => RuleKind::Sequential,
            Self::Parallel(_) => RuleKind::Parallel,
            Self::Subgraph(_) => RuleKind::Subgraph,
        }
    }
}

/// A gain entry by label: from `from` into `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainEntry {
    pub to: String,
    pub from: String,
    pub gain: GainFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: RuleKind,
    pub motif: Motif,
    /// Label of the aggregated node in the successor network.
    pub merged: String,
    /// `(old label, new label)` for every node folded into `merged`.
    pub mapping: Vec<(String, String)>,
    pub consumed: Vec<GainEntry>,
    pub produced: Vec<GainEntry>,
}

impl ReductionStep {
    pub fn consumed_gain(&self, to: &str, from: &str) -> Option<&GainFunction> {
        self.consumed
            .iter()
            .find(|e| e.to == to && e.from == from)
            .map(|e| &e.gain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceOptions {
    pub cycle_budget: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            cycle_budget: DEFAULT_CYCLE_BUDGET,
        }
    }
}

pub fn apply_motif(net: &Network, motif: &Motif, opts: ReduceOptions) -> Result<(Network, ReductionStep)> {
    match motif {
        Motif::Sequential(m) => aggregate_sequential(net, m),
        Motif::Parallel(m) => aggregate_parallel(net, m),
        Motif::Subgraph(m) => aggregate_subgraph(net, m, opts.cycle_budget),
    }
}

/// Motifs of one kind in detection order. A network that is not strongly
/// connected has no subgraph motifs here.
pub fn detect(net: &Network, kind: RuleKind) -> Vec<Motif> {
    match kind {
        RuleKind::Sequential => find_sequential_chains(net)
            .into_iter()
            .map(Motif::Sequential)
            .collect(),
        RuleKind::Parallel => find_parallel_groups(net)
            .into_iter()
            .map(Motif::Parallel)
            .collect(),
        RuleKind::Subgraph => find_almost_disconnected(net)
            .map(|v| v.into_iter().map(Motif::Subgraph).collect())
            .unwrap_or_default(),
    }
}

/// Ordered record of aggregations between two networks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProvenanceLog {
    pub initial: Network,
    pub steps: Vec<ReductionStep>,
    pub final_network: Network,
}

impl ProvenanceLog {
    pub fn new(initial: Network) -> Self {
        Self {
            final_network: initial.clone(),
            initial,
            steps: Vec::new(),
        }
    }

    /// Applies `motif` to the current final network and records it.
    pub fn apply(&mut self, motif: &Motif, opts: ReduceOptions) -> Result<&ReductionStep> {
        let (next, step) = apply_motif(&self.final_network, motif, opts)?;
        self.final_network = next;
        self.steps.push(step);
        Ok(self.steps.last().expect("just pushed"))
    }

    /// Re-applies every recorded motif to `initial`.
    pub fn replay(&self, opts: ReduceOptions) -> Result<Network> {
        let mut net = self.initial.clone();
        for step in &self.steps {
            let (next, again) = apply_motif(&net, &step.motif, opts)?;
            if again != *step {
                return Err(Error::StepMismatch(format!(
                    "replayed {} step on `{}` differs from the record",
                    step.kind, step.merged
                )));
            }
            net = next;
        }
        Ok(net)
    }
}

/// Applies the first motif of the first rule (in `order`) that has one,
/// until no rule matches.
pub fn reduce_fixpoint(
    net: &Network,
    order: &[RuleKind],
    opts: ReduceOptions,
) -> Result<(Network, ProvenanceLog)> {
    let mut log = ProvenanceLog::new(net.clone());
    'rounds: loop {
        for &kind in order {
            if let Some(m) = detect(&log.final_network, kind).into_iter().next() {
                log.apply(&m, opts)?;
                continue 'rounds;
            }
        }
        break;
    }
    Ok((log.final_network.clone(), log))
}

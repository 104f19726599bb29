//! Network model: labeled nodes and the sparse gain matrix.
//!
//! Entry `(i, j)` is the gain from node `j` into node `i`, which is the
//! weight of the directed edge `j -> i`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::Value;

use crate::algebra::GainFunction;
use crate::error::{Error, Result};

/// One gain per node, all functions of the same scalar parameter.
pub type GainVector = Vec<GainFunction>;

/// Ordering used for node labels: all-digit labels compare numerically and
/// come first, everything else compares bytewise.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let numeric = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    match (numeric(a), numeric(b)) {
        (true, true) => {
            let (ta, tb) = (a.trim_start_matches('0'), b.trim_start_matches('0'));
            ta.len()
                .cmp(&tb.len())
                .then_with(|| ta.cmp(tb))
                .then_with(|| a.cmp(b))
        }
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => a.cmp(b),
    }
}

/// Problems found while assembling a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    EmptyLabel {
        position: usize,
    },
    DuplicateLabel(String),
    SelfGain(String),
    DanglingReference {
        to: String,
        from: String,
        missing: String,
    },
    DuplicateGain {
        to: String,
        from: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyLabel { position } => write!(f, "node #{position} has an empty label"),
            Self::DuplicateLabel(l) => write!(f, "duplicate node label `{l}`"),
            Self::SelfGain(l) => write!(f, "self gain on `{l}`"),
            Self::DanglingReference { to, from, missing } => {
                write!(f, "gain {from} -> {to} references unknown node `{missing}`")
            }
            Self::DuplicateGain { to, from } => write!(f, "gain {from} -> {to} given twice"),
        }
    }
}

/// Unchecked network description, the input to [`Network`] construction.
#[derive(Debug, Clone, Default)]
pub struct NetworkDraft {
    pub nodes: Vec<(String, Option<Value>)>,
    /// `(to, from, gain)`.
    pub gains: Vec<(String, String, GainFunction)>,
}

impl NetworkDraft {
    pub fn node(mut self, label: impl Into<String>) -> Self {
        self.nodes.push((label.into(), None));
        self
    }

    pub fn gain(mut self, to: impl Into<String>, from: impl Into<String>, g: GainFunction) -> Self {
        self.gains.push((to.into(), from.into(), g));
        self
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, (label, _)) in self.nodes.iter().enumerate() {
            if label.is_empty() {
                out.push(Diagnostic::EmptyLabel { position: i });
            } else if !seen.insert(label.as_str()) {
                out.push(Diagnostic::DuplicateLabel(label.clone()));
            }
        }
        let mut pairs = BTreeSet::new();
        for (to, from, _) in &self.gains {
            if to == from {
                out.push(Diagnostic::SelfGain(to.clone()));
            }
            for end in [to, from] {
                if !seen.contains(end.as_str()) {
                    out.push(Diagnostic::DanglingReference {
                        to: to.clone(),
                        from: from.clone(),
                        missing: end.clone(),
                    });
                }
            }
            if !pairs.insert((to.as_str(), from.as_str())) {
                out.push(Diagnostic::DuplicateGain {
                    to: to.clone(),
                    from: from.clone(),
                });
            }
        }
        out
    }

    pub fn build(self) -> Result<Network> {
        let diags = self.validate();
        if !diags.is_empty() {
            return Err(Error::InvalidNetwork(diags));
        }
        let mut nodes = self.nodes;
        nodes.sort_by(|a, b| natural_cmp(&a.0, &b.0));
        let index: BTreeMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, (l, _))| (l.clone(), i))
            .collect();
        let mut gains = BTreeMap::new();
        for (to, from, g) in self.gains {
            if !g.is_zero() {
                gains.insert((index[&to], index[&from]), g);
            }
        }
        let (labels, meta) = nodes.into_iter().unzip();
        Ok(Network::assemble(labels, meta, index, gains))
    }
}

/// Immutable network. Node indices are ordinals in natural label order.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    labels: Vec<String>,
    meta: Vec<Option<Value>>,
    index: BTreeMap<String, usize>,
    gains: BTreeMap<(usize, usize), GainFunction>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Network {
    fn assemble(
        labels: Vec<String>,
        meta: Vec<Option<Value>>,
        index: BTreeMap<String, usize>,
        gains: BTreeMap<(usize, usize), GainFunction>,
    ) -> Self {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(to, from) in gains.keys() {
            succ[from].push(to);
            pred[to].push(from);
        }
        for v in succ.iter_mut().chain(pred.iter_mut()) {
            v.sort_unstable();
        }
        Self {
            labels,
            meta,
            index,
            gains,
            succ,
            pred,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn meta(&self, v: usize) -> Option<&Value> {
        self.meta[v].as_ref()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    /// Gain from `from` into `to`.
    pub fn gain(&self, to: usize, from: usize) -> Option<&GainFunction> {
        self.gains.get(&(to, from))
    }

    pub fn gain_by_label(&self, to: &str, from: &str) -> Result<Option<&GainFunction>> {
        Ok(self.gain(self.index_of(to)?, self.index_of(from)?))
    }

    /// Every stored entry as `((to, from), gain)`.
    pub fn gains(&self) -> impl Iterator<Item = ((usize, usize), &GainFunction)> {
        self.gains.iter().map(|(k, g)| (*k, g))
    }

    pub fn edge_count(&self) -> usize {
        self.gains.len()
    }

    /// Nodes `w` with an edge `v -> w`.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// Nodes `u` with an edge `u -> v`.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn successor_labels(&self, label: &str) -> Result<Vec<&str>> {
        let v = self.index_of(label)?;
        Ok(self.succ[v].iter().map(|&w| self.label(w)).collect())
    }

    pub fn predecessor_labels(&self, label: &str) -> Result<Vec<&str>> {
        let v = self.index_of(label)?;
        Ok(self.pred[v].iter().map(|&w| self.label(w)).collect())
    }

    /// `Γ(s)`: component `i` is the max over `j` of `γ_ij ∘ s_j`.
    pub fn apply_gamma(&self, s: &[GainFunction]) -> Result<GainVector> {
        if s.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: s.len(),
            });
        }
        let mut out = vec![GainFunction::zero(); self.len()];
        for (&(to, from), g) in &self.gains {
            let c = g.compose(&s[from])?;
            out[to] = out[to].max(&c)?;
        }
        Ok(out)
    }

    /// Strongly connected components, each sorted, listed by smallest member.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.len()).collect();
        tarjan(self.len(), &all, |v| &self.succ[v])
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.len() <= 1 || self.sccs().len() == 1
    }

    /// Back to a draft with the same labels, metadata and gains.
    pub fn to_draft(&self) -> NetworkDraft {
        NetworkDraft {
            nodes: self
                .labels
                .iter()
                .cloned()
                .zip(self.meta.iter().cloned())
                .collect(),
            gains: self
                .gains
                .iter()
                .map(|(&(to, from), g)| (self.labels[to].clone(), self.labels[from].clone(), g.clone()))
                .collect(),
        }
    }

    /// Subnetwork on `nodes` with every gain between them.
    pub fn induced(&self, nodes: &[usize]) -> Network {
        let keep: BTreeSet<usize> = nodes.iter().copied().collect();
        let mut draft = NetworkDraft::default();
        for &v in &keep {
            draft.nodes.push((self.labels[v].clone(), self.meta[v].clone()));
        }
        for (&(to, from), g) in &self.gains {
            if keep.contains(&to) && keep.contains(&from) {
                draft
                    .gains
                    .push((self.labels[to].clone(), self.labels[from].clone(), g.clone()));
            }
        }
        draft.build().expect("induced subnetwork of a valid network")
    }
}

/// Iterative Tarjan over the vertices in `verts`, following `adj` but only
/// into vertices of `verts`. Components come out sorted, ordered by minimum.
pub(crate) fn tarjan<'a, F>(n: usize, verts: &[usize], adj: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> &'a [usize],
{
    const UNSEEN: usize = usize::MAX;
    let mut allowed = vec![false; n];
    for &v in verts {
        allowed[v] = true;
    }
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    for &root in verts {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let nbrs = adj(v);
            if *pos < nbrs.len() {
                let w = nbrs[*pos];
                *pos += 1;
                if !allowed[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out.sort();
    out
}

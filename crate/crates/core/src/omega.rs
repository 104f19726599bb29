//! Ω-paths: construction on a network, verification of `Γ(σ) ≤ σ`, and
//! transport across reduction steps.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Coefficient, GainFunction};
use crate::error::{Error, Result};
use crate::graph::{natural_cmp, Network};
use crate::reduction::{Motif, ProvenanceLog, ReductionStep, RuleKind};

pub const DEFAULT_PATH_BUDGET: usize = 100_000;
pub const DEFAULT_REPAIR_ROUNDS: usize = 64;

/// One gain per node, keyed by label in natural order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaPath {
    labels: Vec<String>,
    components: Vec<GainFunction>,
    verified: bool,
}

impl OmegaPath {
    /// Components in the node order of `net`. Every component must be nonzero.
    pub fn new(net: &Network, components: Vec<GainFunction>) -> Result<Self> {
        if components.len() != net.len() {
            return Err(Error::LengthMismatch {
                expected: net.len(),
                found: components.len(),
            });
        }
        Self::from_pairs(net.labels().iter().cloned().zip(components))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, GainFunction)>) -> Result<Self> {
        let mut pairs: Vec<(String, GainFunction)> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| natural_cmp(&a.0, &b.0));
        if let Some((l, _)) = pairs.iter().find(|(_, g)| g.is_zero()) {
            return Err(Error::EmptyComponent(l.clone()));
        }
        let (labels, components) = pairs.into_iter().unzip();
        Ok(Self {
            labels,
            components,
            verified: false,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn components(&self) -> &[GainFunction] {
        &self.components
    }

    pub fn get(&self, label: &str) -> Option<&GainFunction> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.components[i])
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Values `σ_i(t)` in label order.
    pub fn evaluate(&self, t: f64) -> Vec<f64> {
        self.components.iter().map(|g| g.evaluate(t)).collect()
    }

    fn map(&self) -> BTreeMap<String, GainFunction> {
        self.labels
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect()
    }

    fn check_matches(&self, net: &Network) -> Result<()> {
        if self.labels != net.labels() {
            return Err(Error::StepMismatch(format!(
                "path covers {} nodes that do not match the network's {}",
                self.labels.len(),
                net.len()
            )));
        }
        Ok(())
    }
}

/// A failing component of `Γ(σ) ≤ σ` and a `t` where it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: String,
    pub witness: Coefficient,
}

/// `σ(t) = Q(a t)`: the max over `m < n` of `Γ^m` applied to `(a_j t)_j`.
pub fn construct_q_path(net: &Network, a: &[Coefficient]) -> Result<OmegaPath> {
    if a.len() != net.len() {
        return Err(Error::LengthMismatch {
            expected: net.len(),
            found: a.len(),
        });
    }
    let mut s: Vec<GainFunction> = a.iter().cloned().map(GainFunction::linear).collect();
    let mut q = s.clone();
    for _ in 1..net.len() {
        s = net.apply_gamma(&s)?;
        if s.iter().all(GainFunction::is_zero) {
            break;
        }
        for (qi, si) in q.iter_mut().zip(&s) {
            *qi = qi.max(si)?;
        }
    }
    OmegaPath::new(net, q)
}

/// Checks `Γ(σ)_i ≤ σ_i` globally for every node and sets the verified flag
/// accordingly.
pub fn verify_omega_path(net: &Network, sigma: &mut OmegaPath) -> Result<Vec<Violation>> {
    sigma.check_matches(net)?;
    let image = net.apply_gamma(&sigma.components)?;
    let mut bad = Vec::new();
    for (i, (lhs, rhs)) in image.iter().zip(&sigma.components).enumerate() {
        let v = lhs.leq_global(rhs)?;
        if let Some(w) = v.witness {
            bad.push(Violation {
                node: net.label(i).to_string(),
                witness: w,
            });
        }
    }
    sigma.verified = bad.is_empty();
    Ok(bad)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSearch {
    pub path: OmegaPath,
    pub scale: Vec<Coefficient>,
    pub rounds: usize,
}

/// Tries `a = 1` and doubles one failing `a_i` (chosen by a seeded RNG) per
/// round, up to `max_rounds` repairs.
pub fn search_omega_path(net: &Network, seed: u64, max_rounds: usize) -> Result<OmegaSearch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = Coefficient::from_integer(2)?;
    let mut a = vec![Coefficient::one(); net.len()];
    let mut last = None;
    for round in 0..=max_rounds {
        let mut path = construct_q_path(net, &a)?;
        let bad = verify_omega_path(net, &mut path)?;
        if bad.is_empty() {
            return Ok(OmegaSearch {
                path,
                scale: a,
                rounds: round,
            });
        }
        let pick = bad[rng.gen_range(0..bad.len())].clone();
        let i = net.index_of(&pick.node)?;
        a[i] = a[i].mul(&two);
        last = Some(pick);
    }
    let last = last.expect("at least one round ran");
    Err(Error::OmegaPathSearchFailed {
        rounds: max_rounds,
        node: last.node,
        witness: last.witness.to_string(),
    })
}

fn need(step: &ReductionStep, to: &str, from: &str) -> Result<GainFunction> {
    step.consumed_gain(to, from)
        .cloned()
        .ok_or_else(|| Error::StepMismatch(format!("step does not record the gain {from} -> {to}")))
}

fn component<'a>(map: &'a BTreeMap<String, GainFunction>, label: &str) -> Result<&'a GainFunction> {
    map.get(label)
        .ok_or_else(|| Error::StepMismatch(format!("path has no component for `{label}`")))
}

fn ensure_absent(map: &BTreeMap<String, GainFunction>, labels: &[String]) -> Result<()> {
    match labels.iter().find(|l| map.contains_key(*l)) {
        Some(l) => Err(Error::StepMismatch(format!(
            "`{l}` should have been aggregated away"
        ))),
        None => Ok(()),
    }
}

/// Extends a path on the reduced network along the aggregated chain.
pub fn lift_sequential(reduced: &OmegaPath, step: &ReductionStep) -> Result<OmegaPath> {
    let Motif::Sequential(m) = &step.motif else {
        return Err(Error::StepMismatch(format!(
            "expected a sequential step, got {}",
            step.kind
        )));
    };
    let mut map = reduced.map();
    ensure_absent(&map, &m.chain)?;
    let mut acc = component(&map, &step.merged)?.clone();
    let mut prev = &m.entry;
    for w in &m.chain {
        acc = need(step, w, prev)?.compose(&acc)?;
        map.insert(w.clone(), acc.clone());
        prev = w;
    }
    OmegaPath::from_pairs(map)
}

pub fn lift_parallel(reduced: &OmegaPath, step: &ReductionStep) -> Result<OmegaPath> {
    let Motif::Parallel(m) = &step.motif else {
        return Err(Error::StepMismatch(format!(
            "expected a parallel step, got {}",
            step.kind
        )));
    };
    let mut map = reduced.map();
    ensure_absent(&map, &m.branches)?;
    let base = component(&map, &step.merged)?.clone();
    for b in &m.branches {
        let g = need(step, b, &m.source)?.compose(&base)?;
        map.insert(b.clone(), g);
    }
    OmegaPath::from_pairs(map)
}

/// Interior node `w` gets the max over simple paths `v* -> ... -> w` inside
/// the motif of the composed path gain, applied to the gateway component.
pub fn lift_subgraph(reduced: &OmegaPath, step: &ReductionStep, path_budget: usize) -> Result<OmegaPath> {
    let Motif::Subgraph(m) = &step.motif else {
        return Err(Error::StepMismatch(format!(
            "expected a subgraph step, got {}",
            step.kind
        )));
    };
    let mut map = reduced.map();
    component(&map, &step.merged)?;
    map.remove(&step.merged);
    ensure_absent(&map, &m.interior)?;
    let gate_sigma = component(&map, &m.gateway)?.clone();

    // adjacency inside the motif: from -> [(to, gain)]
    let mut adj: BTreeMap<&str, Vec<(&str, &GainFunction)>> = BTreeMap::new();
    for e in &step.consumed {
        if e.to != m.gateway {
            adj.entry(e.from.as_str())
                .or_default()
                .push((e.to.as_str(), &e.gain));
        }
    }
    let mut best: BTreeMap<&str, GainFunction> = BTreeMap::new();
    let mut paths = 0usize;
    let mut stack: Vec<(&str, usize, GainFunction)> = vec![(m.gateway.as_str(), 0, gate_sigma)];
    let mut on_path: Vec<&str> = vec![m.gateway.as_str()];
    while let Some((node, pos, value)) = stack.pop() {
        let out = adj.get(node).map(Vec::as_slice).unwrap_or(&[]);
        if pos >= out.len() {
            on_path.pop();
            continue;
        }
        stack.push((node, pos + 1, value.clone()));
        let (next, g) = out[pos];
        if on_path.contains(&next) {
            continue;
        }
        paths += 1;
        if paths > path_budget {
            return Err(Error::PathBudgetExceeded { budget: path_budget });
        }
        let v = g.compose(&value)?;
        let slot = best.entry(next).or_default();
        *slot = slot.max(&v)?;
        on_path.push(next);
        stack.push((next, 0, v));
    }
    for w in &m.interior {
        let g = best
            .remove(w.as_str())
            .ok_or_else(|| Error::StepMismatch(format!("`{w}` is not reachable from the gateway")))?;
        map.insert(w.clone(), g);
    }
    OmegaPath::from_pairs(map)
}

pub fn lift_step(reduced: &OmegaPath, step: &ReductionStep, path_budget: usize) -> Result<OmegaPath> {
    match step.kind {
        RuleKind::Sequential => lift_sequential(reduced, step),
        RuleKind::Parallel => lift_parallel(reduced, step),
        RuleKind::Subgraph => lift_subgraph(reduced, step, path_budget),
    }
}

/// Restricts a path on the pre-step network to the post-step network.
pub fn project_to_reduced(full: &OmegaPath, step: &ReductionStep) -> Result<OmegaPath> {
    let mut map = full.map();
    match &step.motif {
        Motif::Sequential(m) => {
            component(&map, &m.entry)?;
            for w in &m.chain {
                map.remove(w)
                    .ok_or_else(|| Error::StepMismatch(format!("path has no component for `{w}`")))?;
            }
        }
        Motif::Parallel(m) => {
            component(&map, &m.source)?;
            for w in &m.branches {
                map.remove(w)
                    .ok_or_else(|| Error::StepMismatch(format!("path has no component for `{w}`")))?;
            }
        }
        Motif::Subgraph(m) => {
            let gate = component(&map, &m.gateway)?.clone();
            for w in &m.interior {
                map.remove(w)
                    .ok_or_else(|| Error::StepMismatch(format!("path has no component for `{w}`")))?;
            }
            map.insert(step.merged.clone(), gate);
        }
    }
    OmegaPath::from_pairs(map)
}

/// Lifts a path on `log.final_network` back to `log.initial`, last step
/// first, then verifies it there. Returns the path and any violations.
pub fn lift_through_log(
    reduced: &OmegaPath,
    log: &ProvenanceLog,
    path_budget: usize,
) -> Result<(OmegaPath, Vec<Violation>)> {
    reduced.check_matches(&log.final_network)?;
    let mut path = reduced.clone();
    for step in log.steps.iter().rev() {
        path = lift_step(&path, step, path_budget)?;
    }
    let bad = verify_omega_path(&log.initial, &mut path)?;
    Ok((path, bad))
}

//! Elementary cycle enumeration (Johnson) and the cycle condition.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebra::{Coefficient, GainFunction};
use crate::error::{Error, Result};
use crate::graph::{tarjan, Network};

pub const DEFAULT_CYCLE_BUDGET: usize = 1_000_000;

/// Directed cycle `n0 -> n1 -> ... -> n_{m-1} -> n0`, listed in edge order
/// without repeating the start.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    nodes: Vec<usize>,
}

impl Cycle {
    /// Checks distinctness and that every step is an edge of `net`.
    pub fn new(net: &Network, nodes: Vec<usize>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidCycle(format!(
                "a cycle needs at least two nodes, got {}",
                nodes.len()
            )));
        }
        let distinct: BTreeSet<_> = nodes.iter().collect();
        if distinct.len() != nodes.len() {
            return Err(Error::InvalidCycle("repeated node".into()));
        }
        if let Some(&bad) = nodes.iter().find(|&&v| v >= net.len()) {
            return Err(Error::InvalidCycle(format!("node index {bad} out of range")));
        }
        let c = Self { nodes };
        for (from, to) in c.edges() {
            if net.gain(to, from).is_none() {
                return Err(Error::MissingGain {
                    to: net.label(to).to_string(),
                    from: net.label(from).to_string(),
                });
            }
        }
        Ok(c)
    }

    pub fn from_labels(net: &Network, labels: &[&str]) -> Result<Self> {
        let nodes = labels
            .iter()
            .map(|l| net.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(net, nodes)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(from, to)` pairs in walk order, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.nodes.len();
        (0..m).map(move |i| (self.nodes[i], self.nodes[(i + 1) % m]))
    }

    /// Same cycle rotated to start at its smallest ordinal.
    pub fn canonical(&self) -> Self {
        let start = self
            .nodes
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map_or(0, |(i, _)| i);
        let mut nodes = self.nodes.clone();
        nodes.rotate_left(start);
        Self { nodes }
    }

    pub fn labels<'a>(&self, net: &'a Network) -> Vec<&'a str> {
        self.nodes.iter().map(|&v| net.label(v)).collect()
    }
}

/// `γ_{n0,n_{m-1}} ∘ ... ∘ γ_{n2,n1} ∘ γ_{n1,n0}`: the gain picked up going
/// once around the cycle starting (and ending) at `n0`.
pub fn cycle_composition(net: &Network, c: &Cycle) -> Result<GainFunction> {
    let mut acc = GainFunction::identity();
    for (from, to) in c.edges() {
        let g = net.gain(to, from).ok_or_else(|| Error::MissingGain {
            to: net.label(to).to_string(),
            from: net.label(from).to_string(),
        })?;
        acc = g.compose(&acc)?;
    }
    Ok(acc)
}

/// Calls `visit` on every elementary cycle (starting at its smallest node).
/// `visit` returns `false` to stop early. Fails once more than `budget`
/// cycles have been produced.
pub fn for_each_cycle<F>(net: &Network, budget: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<bool>,
{
    let n = net.len();
    let mut state = Johnson {
        net,
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        in_comp: vec![false; n],
        stack: Vec::new(),
        found: 0,
        budget,
    };
    for s in 0..n {
        let verts: Vec<usize> = (s..n).collect();
        let comps = tarjan(n, &verts, |v| net.successors(v));
        let Some(comp) = comps.into_iter().find(|c| c.contains(&s)) else {
            continue;
        };
        if comp.len() < 2 {
            continue;
        }
        for &v in &comp {
            state.in_comp[v] = true;
            state.blocked[v] = false;
            state.blocked_by[v].clear();
        }
        let go_on = state.circuit(s, s, &mut visit)?;
        for &v in &comp {
            state.in_comp[v] = false;
        }
        if !go_on.1 {
            break;
        }
    }
    Ok(())
}

struct Johnson<'a> {
    net: &'a Network,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    in_comp: Vec<bool>,
    stack: Vec<usize>,
    found: usize,
    budget: usize,
}

impl Johnson<'_> {
    // Returns (found a cycle through v, keep going).
    fn circuit<F>(&mut self, v: usize, s: usize, visit: &mut F) -> Result<(bool, bool)>
    where
        F: FnMut(&[usize]) -> Result<bool>,
    {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        let net = self.net;
        for &w in net.successors(v) {
            if !self.in_comp[w] {
                continue;
            }
            if w == s {
                self.found += 1;
                if self.found > self.budget {
                    return Err(Error::CycleBudgetExceeded { budget: self.budget });
                }
                found = true;
                if !visit(&self.stack)? {
                    self.stack.pop();
                    return Ok((true, false));
                }
            } else if !self.blocked[w] {
                let (f, go_on) = self.circuit(w, s, visit)?;
                found |= f;
                if !go_on {
                    self.stack.pop();
                    return Ok((found, false));
                }
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in net.successors(v) {
                if self.in_comp[w] && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok((found, true))
    }

    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(x) = work.pop() {
            if !self.blocked[x] {
                continue;
            }
            self.blocked[x] = false;
            work.append(&mut self.blocked_by[x]);
        }
    }
}

/// Every elementary cycle once, canonical rotation, sorted lexicographically.
pub fn enumerate_elementary_cycles(net: &Network, budget: usize) -> Result<Vec<Cycle>> {
    let mut out = Vec::new();
    for_each_cycle(net, budget, |c| {
        out.push(Cycle { nodes: c.to_vec() });
        Ok(true)
    })?;
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    pub cycle: Cycle,
    pub composition: GainFunction,
    pub subidentity: bool,
    pub witness: Option<Coefficient>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub checks: Vec<CycleCheck>,
    /// True when every checked cycle passed.
    pub overall: bool,
    /// False if early exit stopped enumeration at a failing cycle.
    pub complete: bool,
    pub cycle_count: usize,
    /// Nodes on the longest cycle.
    pub max_cycle_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleOptions {
    pub budget: usize,
    pub early_exit: bool,
}

impl Default for CycleOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_CYCLE_BUDGET,
            early_exit: false,
        }
    }
}

pub fn verify_cycle_condition(net: &Network) -> Result<CycleReport> {
    verify_cycle_condition_with(net, CycleOptions::default())
}

pub fn verify_cycle_condition_with(net: &Network, opts: CycleOptions) -> Result<CycleReport> {
    let mut checks = Vec::new();
    let mut complete = true;
    for_each_cycle(net, opts.budget, |nodes| {
        let cycle = Cycle {
            nodes: nodes.to_vec(),
        };
        let composition = cycle_composition(net, &cycle)?;
        let v = composition.is_subidentity()?;
        let stop = opts.early_exit && !v.holds;
        checks.push(CycleCheck {
            cycle,
            composition,
            subidentity: v.holds,
            witness: v.witness,
        });
        if stop {
            complete = false;
        }
        Ok(!stop)
    })?;
    checks.sort_by(|a, b| a.cycle.cmp(&b.cycle));
    Ok(CycleReport {
        overall: checks.iter().all(|c| c.subidentity),
        complete,
        cycle_count: checks.len(),
        max_cycle_len: checks.iter().map(|c| c.cycle.len()).max().unwrap_or(0),
        checks,
    })
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |a, i| a * i)
}

/// `sum_{k=2}^{n} C(n,k) k!`. Counts each cycle once per rotation.
pub fn max_cycle_count_bound(n: u64) -> BigUint {
    (2..=n).fold(BigUint::zero(), |a, k| a + binomial(n, k) * factorial(k))
}

/// `sum_{k=2}^{n} C(n,k) (k-1)!`, the number of elementary cycles of the
/// complete digraph on `n` nodes.
pub fn elementary_cycle_bound(n: u64) -> BigUint {
    (2..=n).fold(BigUint::zero(), |a, k| a + binomial(n, k) * factorial(k - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NetworkDraft;

    fn lin(n: u64, d: u64) -> GainFunction {
        GainFunction::power((n, d), (1, 1)).unwrap()
    }

    fn complete(n: usize) -> Network {
        let mut d = NetworkDraft::default();
        for i in 0..n {
            d = d.node(i.to_string());
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    d = d.gain(i.to_string(), j.to_string(), lin(1, 2));
                }
            }
        }
        d.build().unwrap()
    }

    #[test]
    fn counts_on_small_graphs() {
        let tri = NetworkDraft::default()
            .node("a")
            .node("b")
            .node("c")
            .gain("b", "a", lin(1, 1))
            .gain("c", "b", lin(1, 1))
            .gain("a", "c", lin(1, 1))
            .build()
            .unwrap();
        let cycles = enumerate_elementary_cycles(&tri, 10).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].labels(&tri), vec!["a", "b", "c"]);
        assert_eq!(enumerate_elementary_cycles(&complete(3), 100).unwrap().len(), 5);
        assert_eq!(enumerate_elementary_cycles(&complete(5), 1000).unwrap().len(), 84);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_elementary_cycles(&complete(4), 5),
            Err(Error::CycleBudgetExceeded { budget: 5 })
        ));
    }

    #[test]
    fn two_cycle_verdicts() {
        let mk = |a: GainFunction, b: GainFunction| {
            NetworkDraft::default()
                .node("a")
                .node("b")
                .gain("a", "b", a)
                .gain("b", "a", b)
                .build()
                .unwrap()
        };
        let r = verify_cycle_condition(&mk(lin(1, 1), lin(1, 1))).unwrap();
        assert!(!r.overall);
        let r = verify_cycle_condition(&mk(lin(2, 1), lin(1, 3))).unwrap();
        assert!(r.overall);
        assert_eq!(r.checks[0].composition, lin(2, 3));
    }

    #[test]
    fn composition_order() {
        // a -> b with 2t, b -> a with t^2: around from a gives 4t^2, from b 2t^2
        let net = NetworkDraft::default()
            .node("a")
            .node("b")
            .gain("b", "a", lin(2, 1))
            .gain("a", "b", GainFunction::power((1, 1), (2, 1)).unwrap())
            .build()
            .unwrap();
        let from_a = Cycle::from_labels(&net, &["a", "b"]).unwrap();
        let from_b = Cycle::from_labels(&net, &["b", "a"]).unwrap();
        assert_eq!(
            cycle_composition(&net, &from_a).unwrap(),
            GainFunction::power((4, 1), (2, 1)).unwrap()
        );
        assert_eq!(
            cycle_composition(&net, &from_b).unwrap(),
            GainFunction::power((2, 1), (2, 1)).unwrap()
        );
        assert_eq!(from_b.canonical(), from_a);
    }

    #[test]
    fn invalid_cycles() {
        let net = complete(2);
        assert!(matches!(Cycle::new(&net, vec![0]), Err(Error::InvalidCycle(_))));
        let chain = NetworkDraft::default()
            .node("a")
            .node("b")
            .gain("b", "a", lin(1, 1))
            .build()
            .unwrap();
        assert!(matches!(
            Cycle::from_labels(&chain, &["a", "b"]),
            Err(Error::MissingGain { .. })
        ));
    }

    #[test]
    fn early_exit_stops() {
        let r = verify_cycle_condition_with(
            &complete(4)
                .to_draft()
                .gain("9", "0", lin(1, 1))
                .node("9")
                .build()
                .unwrap(),
            CycleOptions {
                budget: 100,
                early_exit: true,
            },
        )
        .unwrap();
        assert!(r.overall);
        let bad = NetworkDraft::default()
            .node("a")
            .node("b")
            .node("c")
            .gain("a", "b", lin(1, 1))
            .gain("b", "a", lin(1, 1))
            .gain("c", "b", lin(1, 2))
            .gain("b", "c", lin(1, 2))
            .build()
            .unwrap();
        let r = verify_cycle_condition_with(
            &bad,
            CycleOptions {
                budget: 100,
                early_exit: true,
            },
        )
        .unwrap();
        assert!(!r.overall);
        assert!(!r.complete);
        assert_eq!(r.cycle_count, 1);
    }

    #[test]
    fn acyclic_is_vacuous() {
        let chain = NetworkDraft::default()
            .node("a")
            .node("b")
            .gain("b", "a", lin(5, 1))
            .build()
            .unwrap();
        let r = verify_cycle_condition(&chain).unwrap();
        assert!(r.overall);
        assert_eq!(r.cycle_count, 0);
    }

    #[test]
    fn bounds() {
        assert_eq!(max_cycle_count_bound(1), BigUint::zero());
        assert_eq!(max_cycle_count_bound(2), BigUint::from(2u8));
        assert_eq!(max_cycle_count_bound(3), BigUint::from(12u8));
        assert_eq!(elementary_cycle_bound(3), BigUint::from(5u8));
        assert_eq!(elementary_cycle_bound(5), BigUint::from(84u8));
    }
}

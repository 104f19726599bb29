use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{ParallelMotif, SequentialMotif, SubgraphMotif};
use crate::error::{Error, Result};
use crate::graph::Network;

fn pass_through(net: &Network, w: usize) -> bool {
    net.predecessors(w).len() == 1 && net.successors(w).len() == 1
}

/// Maximal chains of single-in/single-out nodes with distinct entry and exit,
/// ordered by their smallest chain node.
pub fn find_sequential_chains(net: &Network) -> Vec<SequentialMotif> {
    let mut heads = BTreeSet::new();
    for w in 0..net.len() {
        if !pass_through(net, w) {
            continue;
        }
        let mut head = w;
        let mut looped = false;
        loop {
            let p = net.predecessors(head)[0];
            if !pass_through(net, p) {
                break;
            }
            if p == w {
                looped = true;
                break;
            }
            head = p;
        }
        if !looped {
            heads.insert(head);
        }
    }
    let mut out = Vec::new();
    for head in heads {
        let mut chain = vec![head];
        let mut last = head;
        loop {
            let s = net.successors(last)[0];
            if !pass_through(net, s) || chain.contains(&s) {
                break;
            }
            chain.push(s);
            last = s;
        }
        let entry = net.predecessors(head)[0];
        let mut exit = net.successors(last)[0];
        if entry == exit {
            // v -> v1 -> ... -> vk -> v: keep v1..v_{k-1} with exit vk
            if chain.len() < 2 {
                continue;
            }
            exit = chain.pop().expect("nonempty chain");
        }
        out.push((chain.clone(), entry, exit));
    }
    out.sort_by_key(|(chain, _, _)| chain.iter().copied().min());
    out.into_iter()
        .map(|(chain, entry, exit)| SequentialMotif {
            entry: net.label(entry).to_string(),
            chain: chain.iter().map(|&v| net.label(v).to_string()).collect(),
            exit: net.label(exit).to_string(),
        })
        .collect()
}

/// Groups of at least two nodes sharing a single predecessor `v` and a
/// single successor `v' != v`, ordered by smallest branch.
pub fn find_parallel_groups(net: &Network) -> Vec<ParallelMotif> {
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for w in 0..net.len() {
        if !pass_through(net, w) {
            continue;
        }
        let (p, s) = (net.predecessors(w)[0], net.successors(w)[0]);
        if p != s {
            groups.entry((p, s)).or_default().push(w);
        }
    }
    let mut out: Vec<_> = groups.into_iter().filter(|(_, b)| b.len() >= 2).collect();
    out.sort_by_key(|(_, b)| b[0]);
    out.into_iter()
        .map(|((p, s), b)| ParallelMotif {
            source: net.label(p).to_string(),
            branches: b.iter().map(|&v| net.label(v).to_string()).collect(),
            sink: net.label(s).to_string(),
        })
        .collect()
}

fn undirected(net: &Network) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); net.len()];
    for ((to, from), _) in net.gains() {
        adj[to].insert(from);
        adj[from].insert(to);
    }
    adj
}

fn components_without(adj: &[BTreeSet<usize>], cut: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    seen[cut] = true;
    let mut out = Vec::new();
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Node sets that reach the rest of a strongly connected network only
/// through one gateway.
///
/// For every cut vertex, each component left after removing it is a
/// candidate except the largest one (the remainder). Candidates need at
/// least two nodes; sets contained in another candidate are dropped.
pub fn find_almost_disconnected(net: &Network) -> Result<Vec<SubgraphMotif>> {
    if !net.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let adj = undirected(net);
    let mut cands: Vec<(usize, Vec<usize>)> = Vec::new();
    for cut in 0..net.len() {
        let mut comps = components_without(&adj, cut);
        if comps.len() < 2 {
            continue;
        }
        let largest = comps
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.len().cmp(&b.len()).then_with(|| b[0].cmp(&a[0])))
            .map(|(i, _)| i)
            .expect("at least two components");
        comps.remove(largest);
        for comp in comps {
            if comp.len() < 2 {
                continue;
            }
            let mut with_gate = comp.clone();
            with_gate.push(cut);
            if net.induced(&with_gate).is_strongly_connected() {
                cands.push((cut, comp));
            }
        }
    }
    let sets: Vec<BTreeSet<usize>> = cands.iter().map(|(_, c)| c.iter().copied().collect()).collect();
    let mut out: Vec<(usize, Vec<usize>)> = cands
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            !sets
                .iter()
                .enumerate()
                .any(|(j, s)| j != *i && sets[*i].is_subset(s) && sets[*i] != *s)
        })
        .map(|(_, c)| c.clone())
        .collect();
    out.sort_by_key(|(cut, comp)| (comp[0], *cut));
    out.dedup();
    Ok(out
        .into_iter()
        .map(|(cut, comp)| SubgraphMotif {
            gateway: net.label(cut).to_string(),
            interior: comp.iter().map(|&v| net.label(v).to_string()).collect(),
        })
        .collect())
}

//! Random generators and brute-force oracles shared by the property and
//! acceptance suites.
#![allow(dead_code)]

pub mod thirty;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use smallgain::algebra::{Coefficient, GainFunction, PowerTerm, Scalar};
use smallgain::{Network, NetworkDraft};

pub const EXPONENTS: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];

/// A coefficient `k/16` in `[1/4, 4]`.
pub fn coeff<R: Rng>(rng: &mut R, lo: u64, hi: u64) -> (u64, u64) {
    (rng.gen_range(lo..=hi), 16)
}

pub fn power_gain<R: Rng>(rng: &mut R) -> GainFunction {
    let e = *EXPONENTS.choose(rng).unwrap();
    GainFunction::power(coeff(rng, 4, 64), e).unwrap()
}

/// Max of one to three power terms.
pub fn max_gain<R: Rng>(rng: &mut R) -> GainFunction {
    let k = rng.gen_range(1..=3);
    (0..k).fold(GainFunction::zero(), |acc, _| acc.max(&power_gain(rng)).unwrap())
}

/// Gain sampler for one network. Balanced networks give every node a level
/// `q_v` in {1, 2} and use exponent `q_to / q_from`, so every cycle has
/// exponent one and the verdict depends on the coefficients alone.
pub struct GainSampler {
    levels: Option<Vec<u32>>,
    coeff_hi: u64,
}

impl GainSampler {
    pub fn new<R: Rng>(rng: &mut R, n: usize) -> Self {
        if rng.gen_bool(0.6) {
            Self {
                levels: Some((0..n).map(|_| rng.gen_range(1..=2)).collect()),
                coeff_hi: if rng.gen_bool(0.5) { 16 } else { 20 },
            }
        } else {
            Self {
                levels: None,
                coeff_hi: 64,
            }
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, to: usize, from: usize) -> GainFunction {
        let e = match &self.levels {
            Some(q) => match (q[to], q[from]) {
                (1, 2) => (1, 2),
                (2, 1) => (2, 1),
                _ => (1, 1),
            },
            None => *EXPONENTS.choose(rng).unwrap(),
        };
        GainFunction::power(coeff(rng, 4, self.coeff_hi), e).unwrap()
    }
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn build(n: usize, edges: &[(usize, usize, GainFunction)]) -> Network {
    let mut d = labels(n)
        .into_iter()
        .fold(NetworkDraft::default(), |d, l| d.node(l));
    for (from, to, g) in edges {
        d = d.gain(to.to_string(), from.to_string(), g.clone());
    }
    d.build().unwrap()
}

/// Random digraph on `n` nodes without self loops, edges as `(from, to)`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if from != to && rng.gen_bool(density) {
                out.push((from, to));
            }
        }
    }
    out
}

/// Strongly connected random digraph on `nodes`: a shuffled ring plus chords.
pub fn strong_digraph<R: Rng>(rng: &mut R, nodes: &[usize], chord: f64) -> Vec<(usize, usize)> {
    let mut ring = nodes.to_vec();
    ring.shuffle(rng);
    let mut set = BTreeSet::new();
    if ring.len() >= 2 {
        for i in 0..ring.len() {
            set.insert((ring[i], ring[(i + 1) % ring.len()]));
        }
    }
    for &a in nodes {
        for &b in nodes {
            if a != b && rng.gen_bool(chord) {
                set.insert((a, b));
            }
        }
    }
    set.into_iter().collect()
}

/// Elementary cycles by plain DFS: each cycle is rooted at its smallest
/// node and extended only through larger ones.
pub fn brute_force_cycles(n: usize, edges: &[(usize, usize)]) -> BTreeSet<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut found = BTreeSet::new();
    fn dfs(
        root: usize,
        v: usize,
        adj: &[Vec<usize>],
        path: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<usize>>,
    ) {
        for &w in &adj[v] {
            if w == root {
                found.insert(path.clone());
            } else if w > root && !path.contains(&w) {
                path.push(w);
                dfs(root, w, adj, path, found);
                path.pop();
            }
        }
    }
    for root in 0..n {
        let mut path = vec![root];
        dfs(root, root, &adj, &mut path, &mut found);
    }
    found
}

/// `10^4` log-spaced points on `[1e-6, 1e6]`.
pub fn log_grid() -> Vec<f64> {
    const N: usize = 10_000;
    (0..N)
        .map(|i| 10f64.powf(-6.0 + 12.0 * i as f64 / (N - 1) as f64))
        .collect()
}

const REL: f64 = 1e-9;

/// `(c, p)` pairs of `max_i c_i t^p_i` in floating point.
fn float_terms(f: &GainFunction) -> Vec<(f64, f64)> {
    f.terms()
        .iter()
        .map(|t| {
            let (n, d) = (t.exp().numer().to_string(), t.exp().denom().to_string());
            (
                t.coeff().to_f64(),
                n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
            )
        })
        .collect()
}

fn eval(terms: &[(f64, f64)], t: f64) -> f64 {
    terms.iter().map(|&(c, p)| c * t.powf(p)).fold(0.0, f64::max)
}

/// Sampling oracle for `f(t) <= g(t)`.
pub fn grid_leq(f: &GainFunction, g: &GainFunction, grid: &[f64]) -> bool {
    let (f, g) = (float_terms(f), float_terms(g));
    grid.iter().all(|&t| eval(&f, t) <= eval(&g, t) * (1.0 + REL))
}

/// Sampling oracle for `f(t) < t`.
pub fn grid_subidentity(f: &GainFunction, grid: &[f64]) -> bool {
    let f = float_terms(f);
    grid.iter().all(|&t| eval(&f, t) < t)
}

pub fn exact_at(f: &GainFunction, t: &Coefficient) -> Scalar {
    f.evaluate_exact(&Scalar::Positive(t.clone())).unwrap()
}

/// A term with an explicit coefficient.
pub fn term(c: Coefficient, e: (i64, i64)) -> PowerTerm {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    PowerTerm::new(c, BigRational::new(BigInt::from(e.0), BigInt::from(e.1))).unwrap()
}

/// A network of at most seven nodes carrying at least one motif of `kind`.
pub fn planted<R: Rng>(rng: &mut R, kind: smallgain::reduction::RuleKind) -> Network {
    use smallgain::reduction::RuleKind;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let n;
    match kind {
        RuleKind::Sequential => {
            let k = rng.gen_range(1..=2);
            let r = rng.gen_range(2..=7 - k);
            n = r + k;
            let rest: Vec<usize> = (0..r).collect();
            edges.extend(strong_digraph(rng, &rest, 0.3));
            let ends: Vec<usize> = rest.choose_multiple(rng, 2).copied().collect();
            let mut prev = ends[0];
            for c in r..n {
                edges.push((prev, c));
                prev = c;
            }
            edges.push((prev, ends[1]));
        }
        RuleKind::Parallel => {
            let b = rng.gen_range(2..=3);
            let r = rng.gen_range(2..=7 - b);
            n = r + b;
            let rest: Vec<usize> = (0..r).collect();
            edges.extend(strong_digraph(rng, &rest, 0.3));
            let ends: Vec<usize> = rest.choose_multiple(rng, 2).copied().collect();
            for c in r..n {
                edges.push((ends[0], c));
                edges.push((c, ends[1]));
            }
        }
        RuleKind::Subgraph => {
            let r = rng.gen_range(4..=5);
            n = r + 2;
            let rest: Vec<usize> = (0..r).collect();
            edges.extend(strong_digraph(rng, &rest, 0.3));
            let gate = rng.gen_range(0..r);
            edges.extend(strong_digraph(rng, &[gate, r, r + 1], 0.4));
        }
    }
    edges.sort();
    edges.dedup();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let sampler = GainSampler::new(rng, n);
    let weighted: Vec<(usize, usize, GainFunction)> = edges
        .iter()
        .map(|&(a, b)| (perm[a], perm[b], sampler.sample(rng, perm[b], perm[a])))
        .collect();
    build(n, &weighted)
}

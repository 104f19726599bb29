//! The thirty-node example network, its hand-picked reduction sequence and
//! the reduced Omega-path.

use num_bigint::BigInt;
use num_rational::BigRational;
use smallgain::algebra::{Coefficient, GainFunction, PowerTerm};
use smallgain::format::network_from_str;
use smallgain::omega::OmegaPath;
use smallgain::reduction::{
    Motif, ParallelMotif, ProvenanceLog, ReduceOptions, SequentialMotif, SubgraphMotif,
};
use smallgain::Network;

pub const FIXTURE: &str = include_str!("../../fixtures/thirty_node.json");

pub fn load() -> Network {
    network_from_str(FIXTURE, true).unwrap()
}

pub fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn seq(entry: &str, chain: &[&str], exit: &str) -> Motif {
    Motif::Sequential(SequentialMotif {
        entry: entry.into(),
        chain: strings(chain),
        exit: exit.into(),
    })
}

fn par(source: &str, branches: &[&str], sink: &str) -> Motif {
    Motif::Parallel(ParallelMotif {
        source: source.into(),
        branches: strings(branches),
        sink: sink.into(),
    })
}

pub fn steps() -> Vec<Motif> {
    vec![
        par("5", &["8", "9", "10"], "14"),
        seq("25", &["27"], "28"),
        par("18", &["24", "25"], "28"),
        seq("3", &["5", "14", "18"], "28"),
        Motif::Subgraph(SubgraphMotif {
            gateway: "6".into(),
            interior: strings(&["11", "15", "16", "19", "20", "21", "22", "26"]),
        }),
        seq("4", &["7", "12", "17", "23"], "29"),
        seq("29", &["30", "13", "2"], "1"),
    ]
}

pub fn reduce() -> ProvenanceLog {
    let mut log = ProvenanceLog::new(load());
    for m in steps() {
        log.apply(&m, ReduceOptions::default()).unwrap();
    }
    log
}

pub fn pw(c: (u64, u64), p: (i64, i64)) -> GainFunction {
    GainFunction::power(c, p).unwrap()
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// `sqrt(num/den)·t^p`.
pub fn radical(num: u64, den: u64, p: (i64, i64)) -> GainFunction {
    let base = BigRational::new(BigInt::from(num), BigInt::from(den));
    let c = Coefficient::from_factors([(&base, &half())]).unwrap();
    let e = BigRational::new(BigInt::from(p.0), BigInt::from(p.1));
    GainFunction::single(PowerTerm::new(c, e).unwrap())
}

/// `t^2` at nodes 3 and 28, `t` elsewhere.
pub fn reduced_sigma(red: &Network) -> OmegaPath {
    let comps = red
        .labels()
        .iter()
        .map(|l| match l.as_str() {
            "3" | "28" => pw((1, 1), (2, 1)),
            _ => GainFunction::identity(),
        })
        .collect();
    OmegaPath::new(red, comps).unwrap()
}

/// The full lifted path, node by node.
pub fn lifted_table() -> Vec<(&'static str, GainFunction)> {
    let t = || pw((1, 1), (1, 1));
    vec![
        ("1", t()),
        ("2", pw((2, 5), (1, 1))),
        ("3", pw((1, 1), (2, 1))),
        ("4", t()),
        ("5", pw((1, 2), (2, 1))),
        ("6", t()),
        ("7", pw((1, 1), (1, 2))),
        ("8", radical(1, 2, (1, 1))),
        ("9", radical(2, 1, (1, 1))),
        ("10", radical(1, 8, (1, 1))),
        ("11", t()),
        ("12", t()),
        ("13", pw((4, 1), (2, 1))),
        ("14", pw((13, 8), (2, 1))),
        ("15", pw((1, 1), (2, 1))),
        ("16", t()),
        ("17", pw((3, 1), (1, 1))),
        ("18", radical(13, 8, (1, 1))),
        ("19", t()),
        ("20", pw((2, 1), (1, 1))),
        ("21", pw((4, 9), (1, 1))),
        ("22", pw((4, 81), (2, 1))),
        ("23", radical(3, 1, (1, 2))),
        ("24", pw((13, 8), (2, 1))),
        ("25", pw((13, 8), (2, 1))),
        ("26", pw((2, 3), (1, 1))),
        ("27", radical(13, 8, (1, 1))),
        ("28", pw((1, 1), (2, 1))),
        ("29", t()),
        ("30", pw((4, 1), (2, 1))),
    ]
}

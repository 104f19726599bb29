//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::thirty::{self, pw, radical};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use smallgain::algebra::{Coefficient, GainFunction, Scalar};
use smallgain::cycles::{cycle_composition, enumerate_elementary_cycles, verify_cycle_condition, Cycle};
use smallgain::format::network_from_str;
use smallgain::lyapunov::build_descriptor;
use smallgain::omega::{lift_through_log, verify_omega_path, OmegaPath, DEFAULT_PATH_BUDGET};
use smallgain::reduction::{apply_motif, detect, ReduceOptions, RuleKind};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/thirty_node.json")
}

fn smallgain(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_smallgain"))
        .args(args)
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
        elapsed,
    )
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: u64) -> bool {
    elapsed < Duration::from_secs(limit)
}

fn criterion_1() -> Outcome {
    let path = fixture();
    let (code, stdout, elapsed) = smallgain(&["verify", path.to_str().unwrap()]);
    let report: Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
    let count = report["cycles"]["count"].as_u64().unwrap_or(0);
    let longest = report["cycles"]["longest"].as_u64().unwrap_or(0);
    let failing: Vec<String> = report["cycles"]["cycles"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|c| c["subidentity"] == false)
        .map(|c| format!("{}={}", c["nodes"], c["composition"]["text"]))
        .collect();
    check(
        code == 0 && count == 29 && longest == 14 && within(elapsed, 1),
        format!(
            "exit {code} (want 0), {count} cycles (want 29), longest {longest} (want 14), {:.0} ms; failing: {}",
            elapsed.as_secs_f64() * 1e3,
            if failing.is_empty() { "none".into() } else { failing.join(", ") }
        ),
    )
}

fn criterion_2() -> Outcome {
    let log = thirty::reduce();
    let produced = |i: usize, to: &str, from: &str| {
        log.steps[i]
            .produced
            .iter()
            .find(|e| e.to == to && e.from == from)
            .map(|e| e.gain.clone())
    };
    let want = [
        (0, "14", "5", pw((13, 4), (1, 1))),
        (1, "28", "25", pw((1, 3), (1, 1))),
        (2, "28", "18", pw((1, 2), (2, 1))),
        (3, "28", "3", pw((13, 16), (1, 1))),
    ];
    let mut bad = Vec::new();
    for (i, to, from, g) in want {
        match produced(i, to, from) {
            Some(got) if got == g => {}
            got => bad.push(format!(
                "step {} gain {from}->{to}: {:?} want {g}",
                i + 1,
                got.map(|g| g.to_string())
            )),
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "four aggregated gains equal".into()
        } else {
            bad.join("; ")
        },
    )
}

fn criterion_3() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("reduced.json");
    let path = fixture();
    let (code, _, _) = smallgain(&["reduce", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    if code != 0 {
        return Err(format!("reduce exited {code}"));
    }
    let red = network_from_str(&std::fs::read_to_string(&out).unwrap(), true).map_err(|e| e.to_string())?;
    let r = verify_cycle_condition(&red).map_err(|e| e.to_string())?;
    check(
        red.len() == 7 && r.cycle_count == 8 && r.max_cycle_len == 5,
        format!(
            "{} nodes (want 7), {} cycles (want 8), longest {} (want 5)",
            red.len(),
            r.cycle_count,
            r.max_cycle_len
        ),
    )
}

fn criterion_4() -> Outcome {
    let log = thirty::reduce();
    let red = &log.final_network;
    let sqrt = radical(54, 125, (1, 1));
    let want: [(&[&str], GainFunction); 8] = [
        (&["3", "4"], pw((4, 5), (1, 1))),
        (&["3", "6", "4"], pw((4, 5), (1, 1))),
        (&["6", "11"], pw((2, 3), (1, 1))),
        (&["28", "3"], pw((13, 24), (1, 1))),
        (&["4", "29", "1"], pw((18, 25), (1, 1))),
        (&["4", "29", "1", "3"], sqrt.clone()),
        (&["3", "28", "29", "1"], pw((13, 30), (1, 1))),
        (&["3", "28", "29", "1", "4"], pw((52, 125), (1, 1))),
    ];
    let mut bad = Vec::new();
    for (labels, g) in &want {
        let c = Cycle::from_labels(red, labels).map_err(|e| e.to_string())?;
        let got = cycle_composition(red, &c).map_err(|e| e.to_string())?;
        let sub = got.is_subidentity().map_err(|e| e.to_string())?.holds;
        if got != *g || !sub {
            bad.push(format!("{labels:?}: {got} want {g} (subidentity {sub})"));
        }
        if *g == sqrt {
            let approx = got.terms()[0].coeff().to_f64();
            if (approx - (54.0f64 / 125.0).sqrt()).abs() > 1e-12 {
                bad.push(format!("{labels:?}: {approx} not within 1e-12"));
            }
        }
    }
    let verdict = verify_cycle_condition(red).map_err(|e| e.to_string())?.overall;
    if !verdict {
        bad.push("reduced verdict fails".into());
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "eight compositions exact, verdict holds".into()
        } else {
            bad.join("; ")
        },
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let log = thirty::reduce();
    let mut sigma = thirty::reduced_sigma(&log.final_network);
    let reduced_bad = verify_omega_path(&log.final_network, &mut sigma).map_err(|e| e.to_string())?;
    let (lifted, lifted_bad) =
        lift_through_log(&sigma, &log, DEFAULT_PATH_BUDGET).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mismatched: Vec<String> = thirty::lifted_table()
        .into_iter()
        .filter(|(l, g)| lifted.get(l) != Some(g))
        .map(|(l, g)| format!("sigma_{l} = {:?} want {g}", lifted.get(l).map(|x| x.to_string())))
        .collect();
    check(
        reduced_bad.is_empty() && lifted_bad.is_empty() && mismatched.is_empty() && within(elapsed, 5),
        format!(
            "reduced violations {}, lifted violations {}, {} of 30 components differ{}, {:.0} ms",
            reduced_bad.len(),
            lifted_bad.len(),
            mismatched.len(),
            if mismatched.is_empty() {
                String::new()
            } else {
                format!(" ({})", mismatched.join("; "))
            },
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = Vec::new();
    let mut holds = 0;
    let mut total = 0;
    for kind in RuleKind::DEFAULT_ORDER {
        for trial in 0..1000 {
            let net = common::planted(&mut rng, kind);
            let Some(motif) = detect(&net, kind).into_iter().next() else {
                bad.push(format!("{kind} trial {trial}: planted motif not detected"));
                continue;
            };
            let (red, _) = apply_motif(&net, &motif, ReduceOptions::default()).map_err(|e| e.to_string())?;
            let before = verify_cycle_condition(&net).map_err(|e| e.to_string())?.overall;
            let after = verify_cycle_condition(&red).map_err(|e| e.to_string())?.overall;
            total += 1;
            holds += usize::from(before);
            if before != after {
                bad.push(format!("{kind} trial {trial}: {before} before, {after} after"));
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        bad.is_empty() && within(elapsed, 30),
        format!(
            "{total} trials ({holds} stable), {} disagreements{}, {:.1} s",
            bad.len(),
            bad.first().map(|b| format!(" e.g. {b}")).unwrap_or_default(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut graph_bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let density = rng.gen_range(0.1..0.5);
        let edges = common::random_digraph(&mut rng, n, density);
        let weighted: Vec<_> = edges
            .iter()
            .map(|&(a, b)| (a, b, GainFunction::identity()))
            .collect();
        let net = common::build(n, &weighted);
        let mut got: Vec<Vec<usize>> = enumerate_elementary_cycles(&net, 10_000_000)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| {
                c.canonical()
                    .nodes()
                    .iter()
                    .map(|&v| net.label(v).parse().unwrap())
                    .collect()
            })
            .collect();
        got.sort();
        let want: Vec<Vec<usize>> = common::brute_force_cycles(n, &edges).into_iter().collect();
        graph_bad += usize::from(got != want);
    }

    let grid = common::log_grid();
    let mut verdict_bad = 0;
    let mut witness_bad = 0;
    let mut violated = 0;
    for _ in 0..1000 {
        let f = common::max_gain(&mut rng);
        let g = match rng.gen_range(0..3) {
            0 => common::max_gain(&mut rng),
            1 => f.max(&common::max_gain(&mut rng)).unwrap(),
            _ => pw((rng.gen_range(1..=16), 8), (1, 1)).compose(&f).unwrap(),
        };
        let sub = f.is_subidentity().map_err(|e| e.to_string())?;
        verdict_bad += usize::from(sub.holds != common::grid_subidentity(&f, &grid));
        if let Some(w) = &sub.witness {
            let fw = common::exact_at(&f, w);
            witness_bad += usize::from(fw.try_cmp(&Scalar::Positive(w.clone())).unwrap() == Ordering::Less);
        }
        let leq = f.leq_global(&g).map_err(|e| e.to_string())?;
        violated += usize::from(!leq.holds);
        verdict_bad += usize::from(leq.holds != common::grid_leq(&f, &g, &grid));
        if let Some(w) = &leq.witness {
            let ord = common::exact_at(&f, w).try_cmp(&common::exact_at(&g, w)).unwrap();
            witness_bad += usize::from(ord != Ordering::Greater);
        }
    }
    let elapsed = start.elapsed();
    check(
        graph_bad == 0 && verdict_bad == 0 && witness_bad == 0 && within(elapsed, 30),
        format!(
            "cycle sets differ on {graph_bad}/500 digraphs; verdicts differ on {verdict_bad}/2000 checks \
             ({violated} pairs violated); {witness_bad} bad witnesses; {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_8() -> Outcome {
    let log = thirty::reduce();
    let mut sigma = thirty::reduced_sigma(&log.final_network);
    verify_omega_path(&log.final_network, &mut sigma).map_err(|e| e.to_string())?;
    let (lifted, _): (OmegaPath, _) =
        lift_through_log(&sigma, &log, DEFAULT_PATH_BUDGET).map_err(|e| e.to_string())?;
    let d = build_descriptor(&lifted).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for _ in 0..100 {
        let t0 = Scalar::Positive(Coefficient::from_fraction(rng.gen_range(1..1_000_000), 1000).unwrap());
        let v: Vec<Scalar> = lifted
            .components()
            .iter()
            .map(|g| g.evaluate_exact(&t0).unwrap())
            .collect();
        bad += usize::from(d.evaluate_exact(&v).map_err(|e| e.to_string())? != t0);
    }
    check(bad == 0, format!("{bad}/100 round trips inexact"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "raw verification of the thirty-node example", criterion_1),
        (2, "intermediate aggregation gains", criterion_2),
        (3, "reduced network shape", criterion_3),
        (4, "reduced cycle compositions and verdict", criterion_4),
        (5, "Omega-path lifting", criterion_5),
        (6, "verdict preserved by aggregation", criterion_6),
        (7, "cycle and comparison oracles", criterion_7),
        (8, "Lyapunov round trip", criterion_8),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n} PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Command-line front end: load a network file, run the verification
//! pipeline, write a JSON report or DOT text, and signal the verdict through
//! the exit code.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use smallgain::algebra::{set_global_precision, Precision, MAX_PRECISION_BITS};
use smallgain::cycles::{verify_cycle_condition_with, CycleOptions, DEFAULT_CYCLE_BUDGET};
use smallgain::dot::export_dot;
use smallgain::format::{
    network_from_str, network_to_json, omega_from_json, omega_to_json, provenance_to_json,
};
use smallgain::lyapunov::build_descriptor;
use smallgain::omega::{
    lift_through_log, search_omega_path, verify_omega_path, DEFAULT_PATH_BUDGET, DEFAULT_REPAIR_ROUNDS,
};
use smallgain::reduction::{parse_rule_order, reduce_fixpoint, ProvenanceLog, ReduceOptions};
use smallgain::{Error, Network};

pub mod report;

use report::{
    CycleSection, FullReport, LyapunovSection, NetworkSummary, OmegaSection, ReductionSection, Stage, Tool,
    VerifyReport, ViolationEntry,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_OMEGA: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "smallgain",
    version,
    about = "Small-gain verification for networks of ISS systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the cycle condition on the network as given.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Stop at the first failing cycle.
        #[arg(long)]
        early_exit: bool,
    },
    /// Aggregate motifs to a fixpoint and write the reduced network.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Also write the provenance log here.
        #[arg(long, value_name = "PATH")]
        provenance: Option<PathBuf>,
    },
    /// Reduce, verify, build and lift an Omega-path, and describe the
    /// Lyapunov function.
    Report {
        #[command(flatten)]
        common: Common,
        /// Use this Omega-path for the reduced network instead of searching.
        #[arg(long, value_name = "PATH")]
        sigma: Option<PathBuf>,
        /// Repairs tried by the Omega-path search.
        #[arg(long, default_value_t = DEFAULT_REPAIR_ROUNDS)]
        repair_rounds: usize,
        /// Build the Omega-path even if the reduced cycle condition fails.
        #[arg(long)]
        force_omega: bool,
    },
    /// Print the network as a Graphviz digraph.
    ExportDot {
        #[command(flatten)]
        common: Common,
        /// Export the reduced network instead.
        #[arg(long)]
        reduced: bool,
        #[arg(long, default_value = "network")]
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Network file, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CYCLE_BUDGET)]
    pub cycle_budget: usize,
    #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
    pub path_budget: usize,
    /// Starting precision of the floating comparison rung.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..=MAX_PRECISION_BITS as i64))]
    pub precision_bits: u32,
    /// Rule order for reduction.
    #[arg(long, default_value = "seq,par,sub")]
    pub rules: String,
    /// Reject unknown keys in input files.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for the Omega-path repair order.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include wall-clock timings in reports.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CycleBudgetExceeded { .. }
            | Error::PathBudgetExceeded { .. }
            | Error::ComparisonUndecidable { .. } => EXIT_LIMIT,
            Error::OmegaPathSearchFailed { .. } => EXIT_OMEGA,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

struct Clock {
    on: bool,
    last: Instant,
    stages: Vec<Stage>,
}

impl Clock {
    fn new(on: bool) -> Self {
        Self {
            on,
            last: Instant::now(),
            stages: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.stages.push(Stage {
            stage,
            millis: (now - self.last).as_secs_f64() * 1e3,
        });
        self.last = now;
    }

    fn finish(self) -> Option<Vec<Stage>> {
        self.on.then_some(self.stages)
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(common: &Common) -> Result<Network, Failure> {
    let text = read_text(&common.input)?;
    Ok(network_from_str(&text, common.strict)?)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::input(format!("cannot write output: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn setup(common: &Common) {
    set_global_precision(Precision::default().with_start_bits(common.precision_bits));
}

fn reduce_options(common: &Common) -> ReduceOptions {
    ReduceOptions {
        cycle_budget: common.cycle_budget,
    }
}

fn reduce(common: &Common, net: &Network) -> Result<(Network, ProvenanceLog, Vec<&'static str>), Failure> {
    let order = parse_rule_order(&common.rules)?;
    let (out, log) = reduce_fixpoint(net, &order, reduce_options(common))?;
    Ok((out, log, order.iter().map(|k| k.as_str()).collect()))
}

pub fn cmd_verify(common: &Common, early_exit: bool) -> Outcome {
    setup(common);
    let mut clock = Clock::new(common.timing);
    let net = load(common)?;
    clock.lap("parse");
    let r = verify_cycle_condition_with(
        &net,
        CycleOptions {
            budget: common.cycle_budget,
            early_exit,
        },
    )?;
    clock.lap("cycles");
    let report = VerifyReport {
        schema_version: report::REPORT_SCHEMA,
        tool: Tool::current(),
        command: "verify",
        network: (&net).into(),
        verdict: if r.overall { "holds" } else { "fails" },
        cycles: CycleSection::new(&net, &r),
        timing: clock.finish(),
    };
    write_out(common.out.as_deref(), &to_json(&report))?;
    Ok(if r.overall { EXIT_OK } else { EXIT_FAILS })
}

pub fn cmd_reduce(common: &Common, provenance: Option<&Path>) -> Outcome {
    setup(common);
    let net = load(common)?;
    let (out, log, _) = reduce(common, &net)?;
    write_out(common.out.as_deref(), &to_json(&network_to_json(&out)))?;
    if let Some(p) = provenance {
        write_out(Some(p), &to_json(&provenance_to_json(&log)))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_report(common: &Common, sigma: Option<&Path>, repair_rounds: usize, force_omega: bool) -> Outcome {
    setup(common);
    let mut clock = Clock::new(common.timing);
    let net = load(common)?;
    clock.lap("parse");
    let (red, log, rules) = reduce(common, &net)?;
    clock.lap("reduce");
    let cycles = verify_cycle_condition_with(
        &red,
        CycleOptions {
            budget: common.cycle_budget,
            early_exit: false,
        },
    )?;
    clock.lap("reduced-cycles");

    let mut omega = None;
    let mut lyapunov = None;
    let mut diagnostics = None;
    let mut omega_ok = true;
    if cycles.overall || force_omega {
        let candidate = match sigma {
            Some(p) => {
                let v: serde_json::Value = serde_json::from_str(&read_text(p)?).map_err(Error::from)?;
                Some((omega_from_json(&v, common.strict)?, "file", None, None))
            }
            None => match search_omega_path(&red, common.seed, repair_rounds) {
                Ok(s) => Some((
                    s.path,
                    "search",
                    Some(s.rounds),
                    Some(s.scale.iter().map(ToString::to_string).collect()),
                )),
                Err(e @ Error::OmegaPathSearchFailed { .. }) => {
                    diagnostics = Some(e.to_string());
                    omega_ok = false;
                    None
                }
                Err(e) => return Err(e.into()),
            },
        };
        if let Some((mut path, source, rounds, scale)) = candidate {
            let reduced_bad = verify_omega_path(&red, &mut path)?;
            clock.lap("omega");
            let (lifted, lifted_bad) = if reduced_bad.is_empty() {
                let (l, bad) = lift_through_log(&path, &log, common.path_budget)?;
                (Some(l), bad)
            } else {
                diagnostics = Some(format!(
                    "Omega-path fails on the reduced network at {} node(s)",
                    reduced_bad.len()
                ));
                (None, Vec::new())
            };
            clock.lap("lift");
            if !lifted_bad.is_empty() {
                diagnostics = Some(format!(
                    "lifted Omega-path fails on the original network at {} node(s)",
                    lifted_bad.len()
                ));
            }
            omega_ok = reduced_bad.is_empty() && lifted_bad.is_empty();
            if let (true, Some(l)) = (omega_ok, &lifted) {
                lyapunov = Some(LyapunovSection::from(&build_descriptor(l)?));
            }
            omega = Some(OmegaSection {
                source,
                rounds,
                scale,
                reduced: omega_to_json(&path),
                reduced_violations: reduced_bad.iter().map(ViolationEntry::from).collect(),
                lifted: lifted.as_ref().map(omega_to_json),
                lifted_violations: lifted_bad.iter().map(ViolationEntry::from).collect(),
            });
        }
    }

    let (verdict, code) = if !omega_ok {
        ("omega-failed", EXIT_OMEGA)
    } else if !cycles.overall {
        ("fails", EXIT_FAILS)
    } else {
        ("holds", EXIT_OK)
    };
    let report = FullReport {
        schema_version: report::REPORT_SCHEMA,
        tool: Tool::current(),
        command: "report",
        network: NetworkSummary::from(&net),
        verdict,
        reduction: ReductionSection {
            rules,
            nodes_before: net.len(),
            nodes_after: red.len(),
            network: network_to_json(&red),
            provenance: provenance_to_json(&log),
        },
        reduced_cycles: CycleSection::new(&red, &cycles),
        omega,
        lyapunov,
        diagnostics,
        timing: clock.finish(),
    };
    write_out(common.out.as_deref(), &to_json(&report))?;
    Ok(code)
}

pub fn cmd_export_dot(common: &Common, reduced: bool, name: &str) -> Outcome {
    setup(common);
    let mut net = load(common)?;
    if reduced {
        net = reduce(common, &net)?.0;
    }
    write_out(common.out.as_deref(), &export_dot(&net, name))?;
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match &cli.command {
        Command::Verify { common, early_exit } => cmd_verify(common, *early_exit),
        Command::Reduce { common, provenance } => cmd_reduce(common, provenance.as_deref()),
        Command::Report {
            common,
            sigma,
            repair_rounds,
            force_omega,
        } => cmd_report(common, sigma.as_deref(), *repair_rounds, *force_omega),
        Command::ExportDot {
            common,
            reduced,
            name,
        } => cmd_export_dot(common, *reduced, name),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

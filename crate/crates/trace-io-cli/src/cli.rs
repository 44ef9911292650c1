//! The `mcck` command-line interface.
//!
//! Exit codes: 0 consistent / success, 1 inconsistent or `diff`
//! disagreement, 2 usage or parse error, 3 resource limit (oracle TooLarge,
//! SRA search state cap).

use crate::format::{parse_trace, parse_trace_events, serialize_trace};
use axioms_oracle::Model;
use checkers::{CheckError, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use exec_core::{ModificationOrder, Op, PartialExecution};
use std::fmt::Write as _;
use std::time::Instant;

pub const EXIT_CONSISTENT: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Parser)]
#[command(name = "mcck", version, about = "Memory-consistency checker for partial execution graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check consistency of trace files under a model.
    Check(CheckArgs),
    /// Brute-force oracle verdict (enumerates modification orders).
    Oracle(OracleArgs),
    /// Run several checkers/oracles and cross-validate their verdicts.
    Diff(DiffArgs),
    /// Generate trace files.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Stream a trace through the incremental RA checker in file order.
    Stream { file: String },
    /// Time a checker on a generator preset across sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckerName {
    Wra,
    Sra,
    #[value(name = "sra-normw")]
    SraNormw,
    Ra,
    Rc20,
    Relaxed,
}

impl CheckerName {
    fn as_str(self) -> &'static str {
        match self {
            CheckerName::Wra => "wra",
            CheckerName::Sra => "sra",
            CheckerName::SraNormw => "sra-normw",
            CheckerName::Ra => "ra",
            CheckerName::Rc20 => "rc20",
            CheckerName::Relaxed => "relaxed",
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    model: CheckerName,
    /// Also print the derived partial m̄o and any total witness.
    #[arg(long)]
    witness: bool,
    #[arg(required = true)]
    files: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleModel {
    Sc,
    Sra,
    Ra,
    Wra,
    Rc20,
    Relaxed,
}

impl From<OracleModel> for Model {
    fn from(m: OracleModel) -> Model {
        match m {
            OracleModel::Sc => Model::Sc,
            OracleModel::Sra => Model::Sra,
            OracleModel::Ra => Model::Ra,
            OracleModel::Wra => Model::Wra,
            OracleModel::Rc20 => Model::Rc20,
            OracleModel::Relaxed => Model::Relaxed,
        }
    }
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    model: OracleModel,
    /// Maximum number of candidate modification orders.
    #[arg(long, default_value_t = axioms_oracle::DEFAULT_ORACLE_LIMIT)]
    limit: u128,
    file: String,
}

#[derive(Args)]
struct DiffArgs {
    /// Comma-separated runs: checker names (wra, sra, sra-normw, ra, rc20,
    /// relaxed) and/or oracles (oracle:sc, oracle:ra, ...).
    #[arg(long, required = true, value_delimiter = ',')]
    models: Vec<String>,
    #[arg(required = true)]
    files: Vec<String>,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Reduce a triangle-detection instance to a WRA trace.
    Triangle {
        /// Edge-list file: `u v` per line, 1-based, `#` comments.
        #[arg(long)]
        graph: String,
        #[arg(short, long)]
        out: String,
    },
    /// Seeded random execution.
    Random {
        #[arg(long)]
        events: usize,
        #[arg(long)]
        threads: usize,
        #[arg(long)]
        locs: usize,
        #[arg(long, default_value_t = 0.2)]
        rmw: f64,
        #[arg(long, default_value_t = 0.05)]
        fence: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_writes_per_loc: Option<usize>,
        #[arg(short, long)]
        out: String,
    },
    /// Named litmus execution from the figures.
    Litmus {
        name: String,
        #[arg(short, long)]
        out: String,
    },
    /// Benchmark preset family at a given scale.
    Preset {
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        out: String,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    checker: CheckerName,
    #[arg(long)]
    preset: String,
    /// Comma-separated event counts.
    #[arg(long, required = true, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    /// Satellite thread count handed to the preset.
    #[arg(long, default_value_t = 4)]
    k: usize,
}

/// Entry point; returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version on stdout with success.
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.cmd {
        Cmd::Check(args) => run_check(args),
        Cmd::Oracle(args) => run_oracle(args),
        Cmd::Diff(args) => run_diff(args),
        Cmd::Gen(cmd) => run_gen(cmd),
        Cmd::Stream { file } => run_stream(&file),
        Cmd::Bench(args) => run_bench(args),
    }
}

fn load(file: &str) -> Result<PartialExecution, i32> {
    let text = std::fs::read_to_string(file).map_err(|e| {
        eprintln!("error: cannot read {file}: {e}");
        EXIT_USAGE
    })?;
    parse_trace(&text).map_err(|e| {
        eprintln!("error: {file}: {e}");
        EXIT_USAGE
    })
}

fn run_checker(name: CheckerName, x: &PartialExecution) -> Result<Verdict, CheckError> {
    match name {
        CheckerName::Wra => Ok(checkers::check_wra(x)),
        CheckerName::Ra => Ok(checkers::check_ra(x)),
        CheckerName::Rc20 => Ok(checkers::check_rc20(x)),
        CheckerName::Relaxed => Ok(checkers::check_relaxed(x)),
        CheckerName::Sra => checkers::check_sra_full(x, checkers::SraSearchConfig::default()),
        CheckerName::SraNormw => checkers::check_sra_normw(x),
    }
}

fn verdict_line(v: &Verdict) -> String {
    if v.consistent {
        "Consistent".into()
    } else {
        let reason = v.reason.as_ref().map(|r| r.tag()).unwrap_or("Unknown");
        format!("Inconsistent reason={reason}")
    }
}

fn render_mo(label: &str, mo: &ModificationOrder, x: &PartialExecution) -> String {
    let mut out = String::new();
    match mo {
        ModificationOrder::Partial(_) => {
            let mut pairs = mo.all_pairs();
            pairs.sort_unstable();
            let body: Vec<String> =
                pairs.iter().map(|(a, b)| format!("{a}<{b}")).collect();
            let _ = writeln!(out, "{label}: {}", body.join(" "));
        }
        ModificationOrder::Total(_) => {
            for loc in 0..x.num_locs() {
                let seq = mo.sequence_on(loc);
                if seq.is_empty() {
                    continue;
                }
                let body: Vec<String> = seq.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "{label} {}: {}", x.loc_name(loc), body.join(" "));
            }
        }
    }
    out
}

fn run_check(args: CheckArgs) -> i32 {
    let prefix_files = args.files.len() > 1;
    let mut worst = EXIT_CONSISTENT;
    for file in &args.files {
        let x = match load(file) {
            Ok(x) => x,
            Err(code) => return code,
        };
        let v = match run_checker(args.model, &x) {
            Ok(v) => v,
            Err(CheckError::RmwPresent) => {
                eprintln!("error: {file}: sra-normw requires an RMW-free trace");
                return EXIT_USAGE;
            }
            Err(CheckError::StateLimit { cap }) => {
                eprintln!("error: {file}: SRA search exceeded the state cap ({cap})");
                return EXIT_TOO_LARGE;
            }
        };
        let prefix = if prefix_files { format!("{file}: ") } else { String::new() };
        println!("{prefix}{}", verdict_line(&v));
        if args.witness {
            if let Some(pm) = &v.partial_mo {
                print!("{}", render_mo("partial-mo", pm, &x));
            }
            if let Some(wm) = &v.witness_mo {
                print!("{}", render_mo("witness-mo", wm, &x));
            }
        }
        if !v.consistent {
            worst = EXIT_INCONSISTENT;
        }
    }
    worst
}

fn run_oracle(args: OracleArgs) -> i32 {
    let x = match load(&args.file) {
        Ok(x) => x,
        Err(code) => return code,
    };
    match axioms_oracle::oracle_consistent(&x, args.model.into(), args.limit) {
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_TOO_LARGE
        }
        Ok(Some(mo)) => {
            println!("Consistent");
            print!("{}", render_mo("witness-mo", &mo, &x));
            EXIT_CONSISTENT
        }
        Ok(None) => {
            println!("Inconsistent");
            EXIT_INCONSISTENT
        }
    }
}

/// Strength order used by `diff` to validate the verdict matrix:
/// consistency under the stronger model implies consistency under the
/// weaker one on the same trace.
const LATTICE: &[(&str, &str)] = &[
    ("oracle:sc", "sra"),
    ("oracle:sc", "oracle:sra"),
    ("sra", "ra"),
    ("sra-normw", "ra"),
    ("oracle:sra", "ra"),
    ("ra", "wra"),
    ("ra", "rc20"),
    ("oracle:ra", "wra"),
    ("oracle:ra", "rc20"),
    ("rc20", "relaxed"),
    ("oracle:rc20", "relaxed"),
];

fn run_diff(args: DiffArgs) -> i32 {
    let mut disagreement = false;
    for file in &args.files {
        let x = match load(file) {
            Ok(x) => x,
            Err(code) => return code,
        };
        let mut verdicts: Vec<(String, Option<bool>)> = Vec::new();
        for token in &args.models {
            let v = match run_diff_model(token, &x) {
                Ok(v) => v,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return EXIT_USAGE;
                }
            };
            let rendered = match v {
                Some(true) => "Consistent",
                Some(false) => "Inconsistent",
                None => "-",
            };
            println!("{file} {token} {rendered}");
            verdicts.push((token.clone(), v));
        }
        // Checker vs oracle of the same model must agree exactly.
        for (a, va) in &verdicts {
            for (b, vb) in &verdicts {
                let (Some(va), Some(vb)) = (va, vb) else { continue };
                let same_model = format!("oracle:{a}") == *b
                    || (a == "sra-normw" && b == "oracle:sra")
                    || (a == "sra" && b == "oracle:sra");
                if same_model && va != vb {
                    println!("{file} MISMATCH {a}={va} {b}={vb}");
                    disagreement = true;
                }
                if LATTICE.contains(&(a.as_str(), b.as_str())) && *va && !*vb {
                    println!("{file} LATTICE-VIOLATION {a}={va} {b}={vb}");
                    disagreement = true;
                }
            }
        }
    }
    if disagreement {
        EXIT_INCONSISTENT
    } else {
        EXIT_CONSISTENT
    }
}

/// Run one diff token. `Ok(None)` means inapplicable on this trace
/// (sra-normw with RMWs, oracle over the enumeration limit, SRA state cap);
/// `Err` is an unknown token.
fn run_diff_model(token: &str, x: &PartialExecution) -> Result<Option<bool>, String> {
    if let Some(m) = token.strip_prefix("oracle:") {
        let model: Model =
            m.parse().map_err(|_| format!("unknown oracle model `{m}`"))?;
        return Ok(
            axioms_oracle::oracle_consistent(x, model, axioms_oracle::DEFAULT_ORACLE_LIMIT)
                .ok()
                .map(|w| w.is_some()),
        );
    }
    let name = match token {
        "wra" => CheckerName::Wra,
        "sra" => CheckerName::Sra,
        "sra-normw" => CheckerName::SraNormw,
        "ra" => CheckerName::Ra,
        "rc20" => CheckerName::Rc20,
        "relaxed" => CheckerName::Relaxed,
        _ => return Err(format!("unknown model `{token}`")),
    };
    Ok(run_checker(name, x).ok().map(|v| v.consistent))
}

fn run_gen(cmd: GenCmd) -> i32 {
    let (x, out) = match cmd {
        GenCmd::Triangle { graph, out } => {
            let text = match std::fs::read_to_string(&graph) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {graph}: {e}");
                    return EXIT_USAGE;
                }
            };
            let g = match generators::UndirectedGraph::from_edge_list(&text) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("error: {graph}: {e}");
                    return EXIT_USAGE;
                }
            };
            (generators::gen_triangle_reduction(&g), out)
        }
        GenCmd::Random { events, threads, locs, rmw, fence, seed, max_writes_per_loc, out } => {
            let params = generators::GenParams {
                events,
                threads,
                locs,
                rmw_prob: rmw,
                fence_prob: fence,
                seed,
                max_writes_per_loc,
            };
            (generators::gen_random(&params), out)
        }
        GenCmd::Litmus { name, out } => match generators::gen_litmus(&name) {
            Some(x) => (x, out),
            None => {
                eprintln!(
                    "error: unknown litmus `{name}` (known: {})",
                    generators::LITMUS_NAMES.join(", ")
                );
                return EXIT_USAGE;
            }
        },
        GenCmd::Preset { name, n, k, out } => match generators::gen_preset(&name, n, k) {
            Some(x) => (x, out),
            None => {
                eprintln!(
                    "error: unknown preset `{name}` (known: {})",
                    generators::PRESET_NAMES.join(", ")
                );
                return EXIT_USAGE;
            }
        },
    };
    if let Err(e) = std::fs::write(&out, serialize_trace(&x)) {
        eprintln!("error: cannot write {out}: {e}");
        return EXIT_USAGE;
    }
    EXIT_CONSISTENT
}

fn run_stream(file: &str) -> i32 {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {file}: {e}");
            return EXIT_USAGE;
        }
    };
    let (events, k) = match parse_trace_events(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {file}: {e}");
            return EXIT_USAGE;
        }
    };
    let mut session = incremental_ra::new_session(k);
    for ev in &events {
        let loc = ev.spec.loc.as_deref().unwrap_or("");
        let step = match ev.spec.op {
            Op::Write => session.on_write(ev.spec.id, ev.tid, loc),
            Op::Read => session.on_read(ev.spec.id, ev.tid, loc, ev.from.unwrap_or(0)),
            Op::Rmw => session.on_rmw(ev.spec.id, ev.tid, loc, ev.from.unwrap_or(0)),
            Op::Fence => session.on_fence(ev.spec.id, ev.tid),
        };
        match step {
            Ok(incremental_ra::StepResult::Accepted) => {}
            Ok(incremental_ra::StepResult::Rejected) => {
                println!("inconsistent at id={}", ev.spec.id);
                return EXIT_INCONSISTENT;
            }
            Err(e) => {
                eprintln!("error: {file}: event id={}: {e}", ev.spec.id);
                return EXIT_USAGE;
            }
        }
    }
    println!("consistent");
    EXIT_CONSISTENT
}

fn run_bench(args: BenchArgs) -> i32 {
    let mut prev: Option<f64> = None;
    println!("checker={} preset={} k={} repeat={}", args.checker.as_str(), args.preset, args.k, args.repeat);
    for &n in &args.sizes {
        let Some(x) = generators::gen_preset(&args.preset, n, args.k) else {
            eprintln!(
                "error: unknown preset `{}` (known: {})",
                args.preset,
                generators::PRESET_NAMES.join(", ")
            );
            return EXIT_USAGE;
        };
        let mut best = f64::INFINITY;
        for _ in 0..args.repeat.max(1) {
            let t0 = Instant::now();
            let v = match run_checker(args.checker, &x) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e:?}");
                    return EXIT_TOO_LARGE;
                }
            };
            let dt = t0.elapsed().as_secs_f64() * 1e3;
            best = best.min(dt);
            std::hint::black_box(v);
        }
        let ratio = prev.map(|p| best / p);
        match ratio {
            Some(r) => println!("n={n} time_ms={best:.3} ratio={r:.2}"),
            None => println!("n={n} time_ms={best:.3} ratio=-"),
        }
        prev = Some(best);
    }
    EXIT_CONSISTENT
}

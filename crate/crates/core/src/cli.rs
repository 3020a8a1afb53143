//! The `x1scan` command line.

use std::io::Read as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bench::{run_bench, BenchParams, DEFAULT_LADDER};
use crate::formula::{classify, convert_special, parse_x1cnf, Classification, Formula, ParseError};
use crate::net::{build_forward_net, build_inverse_net, explore_target, export_dot, ReachOptions};
use crate::oracle::{
    brute_force_sat, differential_run, exhaustive_general, run_corpus, DiffConfig, DiffParams,
    DiffReport, Instance, OracleVerdict, Origin, Profile,
};
use crate::solver::{scan, CheckMode, CheckOrder, ScanOptions, Status, Verification};

// A closed stdout (e.g. piping into `head`) is not an error worth a panic.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_UNVERIFIED: i32 = 30;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "x1scan",
    version,
    about = "Exactly-1 3SAT scan solver, oracles and Petri net tools"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include the reduction event log in solve output.
    #[arg(long, global = true)]
    pub trace: bool,
    #[arg(long, global = true, env = "X1SCAN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Literal check order.
    #[arg(long, global = true, value_enum, default_value_t = OrderArg::Fixed)]
    pub order: OrderArg,
    /// Check all open literals of a round concurrently.
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Markings explored before a reachability check gives up.
    #[arg(long, global = true, env = "X1SCAN_BUDGET", default_value_t = ReachOptions::default().max_states)]
    pub budget_states: usize,
    /// Leave wall-clock fields out of JSON output.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Fixed,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a formula with the scan procedure.
    Solve(InputArgs),
    /// Decide a formula by enumerating assignments.
    Oracle(InputArgs),
    /// Build the forward or inverse net of a formula.
    Net(NetArgs),
    /// Compare the scan against the oracle on a corpus.
    Diff(DiffArgs),
    /// Time the scan over a size ladder.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// X-DIMACS file, `-` for stdin.
    #[arg(required_unless_present = "formula")]
    pub path: Option<PathBuf>,
    /// Inline clauses, each ended by 0, e.g. "1 -3 0 1 -2 3 0 2 -3 0".
    #[arg(short = 'e', long, conflicts_with = "path")]
    pub formula: Option<String>,
}

#[derive(Args, Debug)]
pub struct NetArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, conflicts_with = "inverse")]
    pub forward: bool,
    /// The default.
    #[arg(long)]
    pub inverse: bool,
    /// Print Graphviz DOT.
    #[arg(long, conflicts_with = "json")]
    pub dot: bool,
    /// Search for a firing sequence to the marking {top}.
    #[arg(long)]
    pub check_reach: bool,
}

#[derive(Args, Debug)]
pub struct DiffArgs {
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 2)]
    pub n_min: u32,
    #[arg(long, default_value_t = 8)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1)]
    pub m_min: usize,
    #[arg(long, default_value_t = 12)]
    pub m_max: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mixed")]
    pub profile: Vec<Profile>,
    /// Extra runs per instance with random check orders.
    #[arg(long, default_value_t = 0)]
    pub order_trials: usize,
    /// Run every formula with at most this many variables instead of a
    /// random corpus.
    #[arg(long, value_name = "N_MAX")]
    pub exhaustive: Option<u32>,
    /// Clause bound for --exhaustive.
    #[arg(long, default_value_t = 4)]
    pub exhaustive_m: usize,
    /// Directory for minimized disagreements.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LADDER)]
    pub sizes: Vec<u32>,
    /// Clauses per variable.
    #[arg(long, default_value_t = 4)]
    pub ratio: usize,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = Profile::Uniform3)]
    pub profile: Profile,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("x1scan: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Solve(input) => cmd_solve(g, input),
        Command::Oracle(input) => cmd_oracle(g, input),
        Command::Net(args) => cmd_net(g, args),
        Command::Diff(args) => cmd_diff(g, args),
        Command::Bench(args) => cmd_bench(g, args),
    }
}

fn scan_options(g: &Global) -> ScanOptions {
    ScanOptions {
        order: match g.order {
            OrderArg::Fixed => CheckOrder::Fixed,
            OrderArg::Random => CheckOrder::Random(g.seed),
        },
        mode: if g.parallel {
            CheckMode::Snapshot
        } else {
            CheckMode::Sequential
        },
        parallel: g.parallel,
        record_scopes: g.json,
    }
}

fn reach_options(g: &Global) -> ReachOptions {
    ReachOptions {
        max_states: g.budget_states,
        ..ReachOptions::default()
    }
}

fn print_json(value: &impl serde::Serialize) {
    out!(
        "{}",
        serde_json::to_string_pretty(value).expect("output serializes")
    );
}

/// Reads the formula named by the input arguments.
pub fn read_formula(input: &InputArgs) -> Result<Formula, CliError> {
    if let Some(inline) = &input.formula {
        let text = if inline.trim_start().starts_with('p') {
            inline.clone()
        } else {
            inline_to_x1cnf(inline)?
        };
        return parse_x1cnf(&text).map_err(|source| CliError::Parse {
            path: "<inline>".into(),
            source,
        });
    }
    let path = input
        .path
        .as_ref()
        .ok_or_else(|| CliError::Usage("no input given".into()))?;
    let name = path.display().to_string();
    let text = if name == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io {
                path: name.clone(),
                source,
            })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: name.clone(),
            source,
        })?
    };
    parse_x1cnf(&text).map_err(|source| CliError::Parse { path: name, source })
}

fn inline_to_x1cnf(inline: &str) -> Result<String, CliError> {
    let mut clauses: Vec<Vec<i64>> = vec![Vec::new()];
    for tok in inline.split_whitespace() {
        let lit: i64 = tok
            .parse()
            .map_err(|_| CliError::Usage(format!("<inline>: invalid token `{tok}`")))?;
        if lit == 0 {
            clauses.push(Vec::new());
        } else {
            clauses.last_mut().expect("never empty").push(lit);
        }
    }
    if clauses.last().is_some_and(|c| !c.is_empty()) {
        return Err(CliError::Usage(
            "<inline>: last clause is not terminated by 0".into(),
        ));
    }
    clauses.pop();
    let n = clauses
        .iter()
        .flatten()
        .map(|l| l.unsigned_abs())
        .max()
        .unwrap_or(0);
    let mut text = format!("p x1cnf {n} {}\n", clauses.len());
    for c in &clauses {
        for l in c {
            text.push_str(&format!("{l} "));
        }
        text.push_str("0\n");
    }
    Ok(text)
}

fn literals_line(values: &[i64]) -> String {
    let mut s = String::from("v");
    for v in values {
        s.push_str(&format!(" {v}"));
    }
    s.push_str(" 0");
    s
}

fn cmd_solve(g: &Global, input: &InputArgs) -> Result<i32, CliError> {
    let f = read_formula(input)?;
    let start = Instant::now();
    let verdict = scan(&f, &scan_options(g)).map_err(|e| CliError::Internal(e.to_string()))?;
    let elapsed = start.elapsed();

    if g.json {
        let mut value = verdict.to_value(g.trace);
        if !g.no_timing {
            value["elapsed_us"] = serde_json::json!(elapsed.as_micros() as u64);
        }
        print_json(&value);
    } else {
        let line = match verdict.status {
            Status::Sat => "s SATISFIABLE",
            Status::Unsat => "s UNSATISFIABLE",
            Status::ClaimedSatUnverified => {
                "s UNKNOWN (claimed satisfiable, assignment fails verification)"
            }
        };
        out!("{line}");
        if let Some(a) = &verdict.assignment {
            let lits: Vec<i64> = a.to_literals().iter().map(|l| l.to_dimacs()).collect();
            out!("{}", literals_line(&lits));
        }
        if let Some(Verification::Failed { clauses }) = &verdict.verification {
            out!("c violated clauses: {clauses:?}");
        }
        out!(
            "c rounds {} discards {} checks {} completion {}",
            verdict.rounds,
            verdict.discards.len(),
            verdict.checks,
            verdict.completion_used
        );
        for d in &verdict.discards {
            out!(
                "c round {} discard {} ({:?})",
                d.round,
                d.literal.to_dimacs(),
                d.reason
            );
        }
        if g.trace {
            for e in &verdict.trace {
                out!(
                    "c event {}",
                    serde_json::to_string(e).expect("event serializes")
                );
            }
        }
        if !g.no_timing {
            out!("c time {:.3} ms", elapsed.as_secs_f64() * 1e3);
        }
    }
    Ok(match verdict.status {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::ClaimedSatUnverified => EXIT_UNVERIFIED,
    })
}

fn cmd_oracle(g: &Global, input: &InputArgs) -> Result<i32, CliError> {
    let f = read_formula(input)?;
    let verdict = brute_force_sat(&f).map_err(|e| CliError::Internal(e.to_string()))?;
    if g.json {
        print_json(&verdict);
    } else {
        match &verdict {
            OracleVerdict::Sat(a) => {
                out!("s SATISFIABLE");
                let lits: Vec<i64> = a.to_literals().iter().map(|l| l.to_dimacs()).collect();
                out!("{}", literals_line(&lits));
            }
            OracleVerdict::Unsat => out!("s UNSATISFIABLE"),
        }
    }
    Ok(if verdict.is_sat() {
        EXIT_SAT
    } else {
        EXIT_UNSAT
    })
}

fn cmd_net(g: &Global, args: &NetArgs) -> Result<i32, CliError> {
    let mut f = read_formula(&args.input)?;
    if let Classification::Special(clauses) = classify(&f) {
        let conv = convert_special(&f).map_err(|e| {
            CliError::Internal(format!(
                "{e}; the formula is unsatisfiable and has no general net"
            ))
        })?;
        eprintln!(
            "note: {} special clause(s) converted, forced {:?}",
            clauses.len(),
            conv.forced_literals()
                .iter()
                .map(|l| l.to_dimacs())
                .collect::<Vec<_>>()
        );
        f = conv.conjoined();
    }
    let net = if args.forward {
        build_forward_net(&f)
    } else {
        build_inverse_net(&f)
    };
    let kind = if args.forward { "forward" } else { "inverse" };

    if args.dot {
        out_raw!("{}", export_dot(&net, None));
    } else if g.json && !args.check_reach {
        out!("{}", net.to_json());
    } else if !g.json {
        out!(
            "{kind} net: {} places, {} transitions, {} arcs, depth {}, {} clause conflict sets",
            net.places().len(),
            net.transitions().len(),
            net.flow_len(),
            net.depth(),
            net.clause_conflicts().len()
        );
    }

    if args.check_reach {
        let target = net
            .marking_of(&["top"])
            .expect("both nets have a top place");
        let stats = explore_target(&net, &target, &reach_options(g))
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let witness: Option<Vec<String>> = stats
            .witness
            .as_ref()
            .map(|w| w.iter().map(|&t| net.transition(t).label.clone()).collect());
        if g.json {
            let mut value = serde_json::json!({
                "kind": kind,
                "reachable": stats.reachable,
                "states": stats.states,
                "witness": witness,
            });
            if args.dot {
                eprintln!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("serializes")
                );
            } else {
                value["net"] = serde_json::from_str(&net.to_json()).expect("net json parses");
                print_json(&value);
            }
        } else {
            let out = format!(
                "target {{top}}: {} ({} markings explored){}",
                if stats.reachable {
                    "reachable"
                } else {
                    "unreachable"
                },
                stats.states,
                witness
                    .map(|w| format!(", witness {}", w.join(" ")))
                    .unwrap_or_default()
            );
            if args.dot {
                eprintln!("{out}");
            } else {
                out!("{out}");
            }
        }
    }
    Ok(0)
}

fn cmd_diff(g: &Global, args: &DiffArgs) -> Result<i32, CliError> {
    if args.n_min > args.n_max || args.m_min > args.m_max {
        return Err(CliError::Usage("empty size range".into()));
    }
    let cfg = DiffConfig {
        scan: ScanOptions {
            record_scopes: false,
            ..scan_options(g)
        },
        order_trials: args.order_trials,
        net_check: true,
        reach: reach_options(g),
        timing: !g.no_timing,
        discrepancy_dir: args.out_dir.clone(),
        program: "x1scan".into(),
    };
    let report = match args.exhaustive {
        Some(n_max) => {
            if n_max > 3 && args.exhaustive_m > 3 {
                eprintln!(
                    "note: the exhaustive corpus grows quickly beyond 3 variables and 3 clauses"
                );
            }
            let corpus: Vec<Instance> = exhaustive_general(n_max, args.exhaustive_m)
                .into_iter()
                .enumerate()
                .map(|(id, formula)| Instance {
                    id,
                    formula,
                    origin: Origin::Exhaustive,
                })
                .collect();
            run_corpus(&corpus, &cfg)
        }
        None => {
            let params = DiffParams {
                count: args.count,
                n_min: args.n_min,
                n_max: args.n_max,
                m_min: args.m_min,
                m_max: args.m_max,
                profiles: args.profile.clone(),
                seed: g.seed,
            };
            differential_run(&params, &cfg)
        }
    };
    if g.json {
        out!("{}", report.to_json());
    } else {
        print_diff_summary(&report);
    }
    Ok(0)
}

fn print_diff_summary(r: &DiffReport) {
    out!("instances        {}", r.count);
    out!("agreements       {}", r.agreements);
    out!("disagreements    {}", r.disagreements.len());
    out!("oracle sat       {}", r.oracle_sat);
    out!(
        "scan status      sat {} unsat {} unverified {} errors {}",
        r.status.sat,
        r.status.unsat,
        r.status.claimed_sat_unverified,
        r.status.errors
    );
    out!("completion runs  {}", r.completion_runs);
    out!(
        "net checks       {} ({} mismatches)",
        r.net_checks.checked,
        r.net_checks.mismatches.len()
    );
    if r.order_invariance.trials_per_instance > 0 {
        out!("order varying    {}", r.order_invariance.varying);
    }
    if let Some(t) = &r.timing {
        out!(
            "scan time us     p50 {} p90 {} p99 {} max {}",
            t.p50_us,
            t.p90_us,
            t.p99_us,
            t.max_us
        );
    }
    for d in &r.disagreements {
        out!("disagreement {}: {}", d.id, d.reproducer);
    }
}

fn cmd_bench(g: &Global, args: &BenchArgs) -> Result<i32, CliError> {
    let params = BenchParams {
        sizes: args.sizes.clone(),
        ratio: args.ratio,
        reps: args.reps,
        seed: g.seed,
        profile: args.profile,
        scan: ScanOptions {
            record_scopes: false,
            ..scan_options(g)
        },
    };
    let report = run_bench(&params).map_err(|e| CliError::Internal(e.to_string()))?;
    if g.json {
        print_json(&report);
    } else {
        out_raw!("{}", report.to_csv());
    }
    Ok(0)
}

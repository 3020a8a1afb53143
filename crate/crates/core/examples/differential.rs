//! Seeded differential campaign against the brute-force oracle, followed by
//! the exhaustive corpus of formulas over at most 3 variables and 4 clauses.
//! Prints a summary of both reports.
//!
//! cargo run --release --example differential [count] [seed]

use std::time::Instant;

use x1scan::oracle::{
    differential_run, exhaustive_general, run_corpus, DiffConfig, DiffParams, DiffReport, Instance,
    Origin, Profile,
};

fn summary(name: &str, r: &DiffReport, secs: f64) {
    println!(
        "{name}: {} instances, {} agree, {} disagree, oracle sat {}, scan sat/unsat/unverified/errors {}/{}/{}/{}, \
         completions {}, nets checked {} (mismatches {}), {:.1}s",
        r.count,
        r.agreements,
        r.disagreements.len(),
        r.oracle_sat,
        r.status.sat,
        r.status.unsat,
        r.status.claimed_sat_unverified,
        r.status.errors,
        r.completion_runs,
        r.net_checks.checked,
        r.net_checks.mismatches.len(),
        secs,
    );
    for d in r.disagreements.iter().take(3) {
        println!(
            "  instance {} ({:?}, oracle sat {}), minimized:\n{}",
            d.id, d.scan_status, d.oracle_sat, d.minimized
        );
    }
}

fn main() {
    let mut args = std::env::args().skip(1);
    let count = args.next().and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(2024);

    let params = DiffParams {
        count,
        n_min: 2,
        n_max: 8,
        m_min: 1,
        m_max: 12,
        profiles: vec![Profile::Mixed],
        seed,
    };
    let cfg = DiffConfig {
        order_trials: 1,
        ..DiffConfig::default()
    };
    let t = Instant::now();
    let report = differential_run(&params, &cfg);
    summary("random mixed", &report, t.elapsed().as_secs_f64());

    let corpus: Vec<Instance> = exhaustive_general(3, 4)
        .into_iter()
        .enumerate()
        .map(|(id, formula)| Instance {
            id,
            formula,
            origin: Origin::Exhaustive,
        })
        .collect();
    let t = Instant::now();
    let report = run_corpus(&corpus, &DiffConfig::default());
    summary("exhaustive n<=3 m<=4", &report, t.elapsed().as_secs_f64());
}

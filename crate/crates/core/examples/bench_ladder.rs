//! Times the scan on the default size ladder and prints CSV with the fitted
//! log-log slope.
//!
//! cargo run --release --example bench_ladder [reps]

use x1scan::bench::{run_bench, BenchParams};

fn main() {
    let reps = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3);
    let params = BenchParams {
        reps,
        ..BenchParams::default()
    };
    match run_bench(&params) {
        Ok(report) => print!("{}", report.to_csv()),
        Err(e) => {
            eprintln!("bench failed: {e}");
            std::process::exit(2);
        }
    }
}

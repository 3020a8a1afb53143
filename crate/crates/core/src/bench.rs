//! Scan timings over a seeded size ladder.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::oracle::{generate_random, GenerateError, Profile};
use crate::solver::{scan, ScanError, ScanOptions, Status};

pub const DEFAULT_LADDER: [u32; 5] = [25, 50, 100, 200, 400];

#[derive(Clone, Debug)]
pub struct BenchParams {
    pub sizes: Vec<u32>,
    /// Clauses per variable.
    pub ratio: usize,
    pub reps: usize,
    pub seed: u64,
    pub profile: Profile,
    pub scan: ScanOptions,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams {
            sizes: DEFAULT_LADDER.to_vec(),
            ratio: 4,
            reps: 3,
            seed: 1,
            profile: Profile::Uniform3,
            scan: ScanOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: u32,
    pub m: usize,
    pub reps: usize,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub sat: usize,
    pub unsat: usize,
    pub unverified: usize,
    pub median_rounds: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub profile: Profile,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of log(median time) against log(n).
    pub slope: Option<f64>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("n = {n}: {source}")]
    Generate { n: u32, source: GenerateError },
    #[error("n = {n}: {source}")]
    Scan { n: u32, source: ScanError },
}

fn median<T: Copy + PartialOrd>(xs: &mut [T]) -> T {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN timings"));
    xs[xs.len() / 2]
}

pub fn run_bench(params: &BenchParams) -> Result<BenchReport, BenchError> {
    let mut rows = Vec::new();
    for (i, &n) in params.sizes.iter().enumerate() {
        let m = params.ratio * n as usize;
        let reps = params.reps.max(1);
        let mut times = Vec::with_capacity(reps);
        let mut rounds = Vec::with_capacity(reps);
        let (mut sat, mut unsat, mut unverified) = (0, 0, 0);
        for r in 0..reps {
            let seed = params.seed.wrapping_add(1000 * i as u64 + r as u64);
            let f = generate_random(n, m, seed, params.profile)
                .map_err(|source| BenchError::Generate { n, source })?;
            let start = Instant::now();
            let v = scan(&f, &params.scan).map_err(|source| BenchError::Scan { n, source })?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            rounds.push(v.rounds);
            match v.status {
                Status::Sat => sat += 1,
                Status::Unsat => unsat += 1,
                Status::ClaimedSatUnverified => unverified += 1,
            }
        }
        let min_ms = times.iter().copied().fold(f64::INFINITY, f64::min);
        let max_ms = times.iter().copied().fold(0.0, f64::max);
        rows.push(BenchRow {
            n,
            m,
            reps,
            median_ms: median(&mut times),
            min_ms,
            max_ms,
            sat,
            unsat,
            unverified,
            median_rounds: median(&mut rounds),
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.median_ms > 0.0)
        .map(|r| (f64::from(r.n).ln(), r.median_ms.ln()))
        .collect();
    Ok(BenchReport {
        profile: params.profile,
        seed: params.seed,
        slope: loglog_slope(&points),
        rows,
    })
}

/// Ordinary least squares slope, `None` with fewer than two distinct x values.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (points.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("n,m,reps,median_ms,min_ms,max_ms,sat,unsat,unverified,median_rounds\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.3},{:.3},{:.3},{},{},{},{}\n",
                r.n,
                r.m,
                r.reps,
                r.median_ms,
                r.min_ms,
                r.max_ms,
                r.sat,
                r.unsat,
                r.unverified,
                r.median_rounds
            ));
        }
        match self.slope {
            Some(s) => out.push_str(&format!("# loglog_slope,{s:.3}\n")),
            None => out.push_str("# loglog_slope,NA\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0]
            .iter()
            .map(|&n| (n.ln(), (3.0 * n.powi(2)).ln()))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn small_ladder_shape() {
        let params = BenchParams {
            sizes: vec![5, 10],
            reps: 1,
            ..BenchParams::default()
        };
        let report = run_bench(&params).unwrap();
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("n,m,"));
        assert_eq!(report.rows[1].m, 40);
    }
}

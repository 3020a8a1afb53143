//! Differential runs of the scan against the brute-force oracle.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::formula::{classify, emit_x1cnf, Classification, Formula};
use crate::net::{build_forward_net, build_inverse_net, target_reachable, Net, ReachOptions};
use crate::solver::{scan, CheckOrder, ScanOptions, Status};

use super::{brute_force_sat, generate_random, minimize_counterexample, Profile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Random {
        profile: Profile,
        n: u32,
        m: usize,
        seed: u64,
    },
    Exhaustive,
    Fixed {
        name: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub id: usize,
    pub formula: Formula,
    pub origin: Origin,
}

/// How each instance is checked.
#[derive(Clone, Debug)]
pub struct DiffConfig {
    pub scan: ScanOptions,
    /// Extra runs per instance with seeded random check orders.
    pub order_trials: usize,
    /// Cross-check both nets on instances with at most 3 variables and 4 clauses.
    pub net_check: bool,
    pub reach: ReachOptions,
    pub timing: bool,
    /// Where minimized disagreements are written, if anywhere.
    pub discrepancy_dir: Option<PathBuf>,
    /// Command prefix used in reproducer lines.
    pub program: String,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            scan: ScanOptions::default(),
            order_trials: 0,
            net_check: true,
            reach: ReachOptions::default(),
            timing: false,
            discrepancy_dir: None,
            program: "x1scan".into(),
        }
    }
}

/// A seeded random corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffParams {
    pub count: usize,
    pub n_min: u32,
    pub n_max: u32,
    pub m_min: usize,
    pub m_max: usize,
    pub profiles: Vec<Profile>,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatusCounts {
    pub sat: usize,
    pub unsat: usize,
    pub claimed_sat_unverified: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrderInvariance {
    pub trials_per_instance: usize,
    pub invariant: usize,
    pub varying: usize,
    pub varying_ids: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NetChecks {
    pub checked: usize,
    pub mismatches: Vec<usize>,
    pub errors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub p50_us: u64,
    pub p90_us: u64,
    pub p99_us: u64,
    pub max_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub id: usize,
    pub origin: Origin,
    pub formula: String,
    pub scan_status: Option<Status>,
    pub scan_error: Option<String>,
    pub oracle_sat: bool,
    pub minimized: String,
    pub minimized_clauses: usize,
    pub reproducer: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub count: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    pub oracle_sat: usize,
    pub status: StatusCounts,
    /// Sat verdicts whose assignment passed verification.
    pub verified_models: usize,
    pub completion_runs: usize,
    pub monotonicity_violations: usize,
    pub order_invariance: OrderInvariance,
    pub net_checks: NetChecks,
    pub generation_errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl DiffReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Outcome {
    id: usize,
    status: Result<Status, String>,
    oracle_sat: bool,
    verified: bool,
    completion: bool,
    monotonicity: usize,
    order_varies: bool,
    net: Option<Result<bool, ()>>,
    micros: u64,
}

fn evaluate(inst: &Instance, cfg: &DiffConfig) -> Outcome {
    let oracle = brute_force_sat(&inst.formula).expect("corpus instances fit the oracle");
    let start = Instant::now();
    let verdict = scan(&inst.formula, &cfg.scan);
    let micros = start.elapsed().as_micros() as u64;

    let (status, verified, completion, monotonicity) = match &verdict {
        Ok(v) => (
            Ok(v.status),
            v.status == Status::Sat,
            v.completion_used,
            v.monotonicity_violations.len(),
        ),
        Err(e) => (Err(e.to_string()), false, false, 0),
    };

    let mut order_varies = false;
    for t in 0..cfg.order_trials {
        let seed = (inst.id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ t as u64;
        let opts = ScanOptions {
            order: CheckOrder::Random(seed),
            record_scopes: false,
            ..cfg.scan
        };
        let other = scan(&inst.formula, &opts)
            .map(|v| v.status)
            .map_err(|e| e.to_string());
        if other != status {
            order_varies = true;
        }
    }

    let small = inst.formula.n_vars() <= 3 && inst.formula.len() <= 4;
    let net = (cfg.net_check && small && classify(&inst.formula) == Classification::General)
        .then(|| nets_agree(&inst.formula, oracle.is_sat(), &cfg.reach));

    Outcome {
        id: inst.id,
        status,
        oracle_sat: oracle.is_sat(),
        verified,
        completion,
        monotonicity,
        order_varies,
        net,
        micros,
    }
}

fn top_reachable(net: &Net, reach: &ReachOptions) -> Result<bool, ()> {
    let target = net
        .marking_of(&["top"])
        .expect("both nets have a top place");
    target_reachable(net, &target, reach).map_err(|_| ())
}

/// Both nets reach their target exactly when the formula is satisfiable.
fn nets_agree(f: &Formula, sat: bool, reach: &ReachOptions) -> Result<bool, ()> {
    let forward = top_reachable(&build_forward_net(f), reach)?;
    let inverse = top_reachable(&build_inverse_net(f), reach)?;
    Ok(forward == sat && inverse == sat)
}

fn percentile(sorted: &[u64], p: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((p / 100.0) * (sorted.len() - 1) as f64).round() as usize;
    sorted[rank]
}

/// Checks every instance; the report is ordered by instance id.
pub fn run_corpus(instances: &[Instance], cfg: &DiffConfig) -> DiffReport {
    let mut outcomes: Vec<Outcome> = instances
        .par_iter()
        .map(|inst| evaluate(inst, cfg))
        .collect();
    outcomes.sort_by_key(|o| o.id);

    let mut report = DiffReport {
        count: instances.len(),
        agreements: 0,
        disagreements: Vec::new(),
        oracle_sat: 0,
        status: StatusCounts::default(),
        verified_models: 0,
        completion_runs: 0,
        monotonicity_violations: 0,
        order_invariance: OrderInvariance {
            trials_per_instance: cfg.order_trials,
            ..Default::default()
        },
        net_checks: NetChecks::default(),
        generation_errors: Vec::new(),
        timing: None,
    };
    let by_id = |id: usize| {
        instances
            .iter()
            .find(|i| i.id == id)
            .expect("outcome for a known instance")
    };

    for o in &outcomes {
        report.oracle_sat += usize::from(o.oracle_sat);
        report.verified_models += usize::from(o.verified);
        report.completion_runs += usize::from(o.completion);
        report.monotonicity_violations += o.monotonicity;
        match &o.status {
            Ok(Status::Sat) => report.status.sat += 1,
            Ok(Status::Unsat) => report.status.unsat += 1,
            Ok(Status::ClaimedSatUnverified) => report.status.claimed_sat_unverified += 1,
            Err(_) => report.status.errors += 1,
        }
        if cfg.order_trials > 0 {
            if o.order_varies {
                report.order_invariance.varying += 1;
                report.order_invariance.varying_ids.push(o.id);
            } else {
                report.order_invariance.invariant += 1;
            }
        }
        match o.net {
            Some(Ok(true)) => report.net_checks.checked += 1,
            Some(Ok(false)) => {
                report.net_checks.checked += 1;
                report.net_checks.mismatches.push(o.id);
            }
            Some(Err(())) => report.net_checks.errors.push(o.id),
            None => {}
        }

        let agrees = match &o.status {
            Ok(s) => (*s != Status::Unsat) == o.oracle_sat,
            Err(_) => false,
        };
        if agrees {
            report.agreements += 1;
        } else {
            report.disagreements.push(describe(by_id(o.id), o, cfg));
        }
    }

    if cfg.timing {
        let mut t: Vec<u64> = outcomes.iter().map(|o| o.micros).collect();
        t.sort_unstable();
        report.timing = Some(Timing {
            p50_us: percentile(&t, 50.0),
            p90_us: percentile(&t, 90.0),
            p99_us: percentile(&t, 99.0),
            max_us: t.last().copied().unwrap_or(0),
        });
    }
    report
}

fn describe(inst: &Instance, o: &Outcome, cfg: &DiffConfig) -> Disagreement {
    let minimized =
        minimize_counterexample(&inst.formula, &cfg.scan).unwrap_or_else(|_| inst.formula.clone());
    let file = discrepancy_stem(inst.id);
    let mut flags = String::new();
    if cfg.scan.parallel {
        flags.push_str(" --parallel");
    }
    if let CheckOrder::Random(seed) = cfg.scan.order {
        flags.push_str(&format!(" --order random --seed {seed}"));
    }
    let d = Disagreement {
        id: inst.id,
        origin: inst.origin.clone(),
        formula: emit_x1cnf(&inst.formula),
        scan_status: o.status.as_ref().ok().copied(),
        scan_error: o.status.as_ref().err().cloned(),
        oracle_sat: o.oracle_sat,
        minimized: emit_x1cnf(&minimized),
        minimized_clauses: minimized.len(),
        reproducer: format!("{} solve {file}.x1cnf --json{flags}", cfg.program),
    };
    if let Some(dir) = &cfg.discrepancy_dir {
        if let Err(e) = write_discrepancy(dir, &file, &d) {
            eprintln!("warning: could not write discrepancy {file}: {e}");
        }
    }
    d
}

fn discrepancy_stem(id: usize) -> String {
    format!("disc-{id:06}")
}

fn write_discrepancy(dir: &Path, stem: &str, d: &Disagreement) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let header = format!(
        "c minimized from instance {}\nc reproduce: {}\n",
        d.id, d.reproducer
    );
    std::fs::write(dir.join(format!("{stem}.x1cnf")), header + &d.minimized)?;
    let sidecar = serde_json::to_string_pretty(d).expect("disagreement serializes");
    std::fs::write(dir.join(format!("{stem}.json")), sidecar + "\n")
}

/// Generates `count` instances. Each draws its profile, size and seed from a
/// generator seeded with `params.seed`.
pub fn random_instances(params: &DiffParams) -> (Vec<Instance>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut instances = Vec::with_capacity(params.count);
    let mut errors = Vec::new();
    for id in 0..params.count {
        let profile = params.profiles[rng.gen_range(0..params.profiles.len())];
        let n = rng.gen_range(params.n_min..=params.n_max);
        let m_cap = usize::try_from(profile.capacity(n)).unwrap_or(usize::MAX);
        let m = rng.gen_range(params.m_min..=params.m_max).min(m_cap);
        let seed: u64 = rng.gen();
        match generate_random(n, m, seed, profile) {
            Ok(formula) => instances.push(Instance {
                id,
                formula,
                origin: Origin::Random {
                    profile,
                    n,
                    m,
                    seed,
                },
            }),
            Err(e) => errors.push(format!("instance {id}: {e}")),
        }
    }
    (instances, errors)
}

/// Generates a seeded random corpus and runs it.
pub fn differential_run(params: &DiffParams, cfg: &DiffConfig) -> DiffReport {
    if params.count == 0 || params.profiles.is_empty() {
        return run_corpus(&[], cfg);
    }
    let (instances, errors) = random_instances(params);
    let mut report = run_corpus(&instances, cfg);
    report.generation_errors = errors;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exhaustive_general;

    fn fixed(formulas: Vec<Formula>) -> Vec<Instance> {
        formulas
            .into_iter()
            .enumerate()
            .map(|(id, formula)| Instance {
                id,
                formula,
                origin: Origin::Fixed {
                    name: format!("f{id}"),
                },
            })
            .collect()
    }

    #[test]
    fn empty_corpus() {
        let params = DiffParams {
            count: 0,
            n_min: 1,
            n_max: 2,
            m_min: 1,
            m_max: 2,
            profiles: vec![Profile::Mixed],
            seed: 1,
        };
        let r = differential_run(&params, &DiffConfig::default());
        assert_eq!(r.count, 0);
        assert_eq!(r.agreements, 0);
        assert!(r.disagreements.is_empty());
    }

    #[test]
    fn worked_formula_agrees() {
        let f = Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]);
        let r = run_corpus(&fixed(vec![f]), &DiffConfig::default());
        assert_eq!(r.agreements, 1);
        assert_eq!(r.status.sat, 1);
        assert_eq!(r.net_checks.checked, 1);
        assert!(r.net_checks.mismatches.is_empty());
    }

    #[test]
    fn small_exhaustive_corpus_report() {
        let corpus = fixed(exhaustive_general(2, 2));
        let cfg = DiffConfig {
            order_trials: 2,
            ..DiffConfig::default()
        };
        let r = run_corpus(&corpus, &cfg);
        assert_eq!(r.agreements + r.disagreements.len(), r.count);
        assert!(r.net_checks.mismatches.is_empty());
        assert_eq!(r.to_json(), run_corpus(&corpus, &cfg).to_json());
    }

    #[test]
    fn random_corpus_is_reproducible() {
        let params = DiffParams {
            count: 40,
            n_min: 2,
            n_max: 5,
            m_min: 1,
            m_max: 8,
            profiles: vec![Profile::Mixed],
            seed: 3,
        };
        let a = differential_run(&params, &DiffConfig::default());
        let b = differential_run(&params, &DiffConfig::default());
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.count, 40);
    }

    #[test]
    fn disagreements_are_written_with_a_reproducer() {
        let dir = tempfile::tempdir().unwrap();
        let inst = Instance {
            id: 7,
            formula: Formula::from_signed(1, &[&[1], &[-1]]),
            origin: Origin::Exhaustive,
        };
        // a fabricated wrong verdict; the real scan agrees, so nothing shrinks
        let o = Outcome {
            id: 7,
            status: Ok(Status::Sat),
            oracle_sat: false,
            verified: false,
            completion: false,
            monotonicity: 0,
            order_varies: false,
            net: None,
            micros: 0,
        };
        let cfg = DiffConfig {
            discrepancy_dir: Some(dir.path().to_owned()),
            ..DiffConfig::default()
        };
        let d = describe(&inst, &o, &cfg);
        assert_eq!(d.reproducer, "x1scan solve disc-000007.x1cnf --json");
        let text = std::fs::read_to_string(dir.path().join("disc-000007.x1cnf")).unwrap();
        assert_eq!(crate::formula::parse_x1cnf(&text).unwrap(), inst.formula);
        let sidecar: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("disc-000007.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(sidecar["scan_status"], "sat");
        assert_eq!(sidecar["oracle_sat"], false);
    }
}

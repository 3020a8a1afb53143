mod common;

use common::worked_formula;
use x1scan::oracle::{differential_run, DiffConfig, DiffParams, Profile};
use x1scan::solver::{scan, CheckOrder, ScanOptions};

#[test]
fn verdict_json_is_stable() {
    let f = worked_formula();
    for order in [CheckOrder::Fixed, CheckOrder::Random(11)] {
        let opts = ScanOptions {
            order,
            record_scopes: true,
            ..ScanOptions::default()
        };
        let first = scan(&f, &opts).unwrap().to_json(true);
        for _ in 0..5 {
            assert_eq!(scan(&f, &opts).unwrap().to_json(true), first);
        }
    }
}

#[test]
fn reports_are_stable_across_thread_counts() {
    let params = DiffParams {
        count: 300,
        n_min: 2,
        n_max: 7,
        m_min: 1,
        m_max: 10,
        profiles: vec![Profile::Mixed, Profile::Adversarial],
        seed: 5,
    };
    let cfg = DiffConfig {
        order_trials: 1,
        ..DiffConfig::default()
    };
    let pooled = differential_run(&params, &cfg).to_json();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let serial = single.install(|| differential_run(&params, &cfg).to_json());
    assert_eq!(pooled, serial);
}

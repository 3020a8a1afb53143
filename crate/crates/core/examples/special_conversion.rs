//! Converts a formula with a clause holding both polarities of a variable,
//! then confirms with the oracle that conversion keeps satisfiability on every
//! special formula over 3 variables with at most 2 clauses.
//!
//! cargo run --example special_conversion

use x1scan::formula::{classify, convert_special, emit_x1cnf, Formula};
use x1scan::oracle::{brute_force_sat, exhaustive_special};
use x1scan::solver::{scan, ScanOptions};

fn main() {
    let phi = Formula::from_signed(4, &[&[1, -3, 4], &[1, -2, 2], &[2, -3]]);
    println!("classification: {:?}", classify(&phi));
    let conv = convert_special(&phi).expect("no contradiction");
    let forced: Vec<i64> = conv
        .forced_literals()
        .iter()
        .map(|l| l.to_dimacs())
        .collect();
    print!(
        "converted, forced {forced:?}:\n{}",
        emit_x1cnf(&conv.formula)
    );

    let verdict = scan(&phi, &ScanOptions::default()).expect("small formula");
    println!(
        "scan on the original: {:?}, forced {:?}",
        verdict.status, verdict.forced
    );

    let corpus = exhaustive_special(3, 2);
    let mut contradictions = 0;
    for f in &corpus {
        let sat = brute_force_sat(f).unwrap().is_sat();
        match convert_special(f) {
            Ok(c) => assert_eq!(brute_force_sat(&c.conjoined()).unwrap().is_sat(), sat),
            Err(_) => {
                assert!(!sat);
                contradictions += 1;
            }
        }
    }
    println!(
        "{} special formulas checked, {contradictions} refuted by conversion alone",
        corpus.len()
    );
}

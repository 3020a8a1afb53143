//! Solves the three-clause worked formula
//! (x1 ⊻ ¬x3) ∧ (x1 ⊻ ¬x2 ⊻ x3) ∧ (x2 ⊻ ¬x3)
//! and prints every reduction event, the formula left after each discard and
//! the verdict.
//!
//! cargo run --example walkthrough

use x1scan::formula::{emit_x1cnf, Formula};
use x1scan::reduction::{init_state, replay, EventKind};
use x1scan::solver::{scan, ScanOptions};

fn main() {
    let phi = Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]);
    print!("input:\n{}", emit_x1cnf(&phi));

    let verdict = scan(
        &phi,
        &ScanOptions {
            record_scopes: true,
            ..ScanOptions::default()
        },
    )
    .expect("small formula");
    for s in &verdict.scopes {
        let e: Vec<i64> = s.units.iter().map(|l| l.to_dimacs()).collect();
        println!(
            "round {} check {:>2}: E = {e:?} -> {}",
            s.round,
            s.literal.to_dimacs(),
            s.verdict.name()
        );
    }

    // Replay the log one discard at a time to show the intermediate formulas.
    let mut upto = Vec::new();
    for event in &verdict.trace {
        upto.push(event.clone());
        let lits: Vec<i64> = event.literals.iter().map(|l| l.to_dimacs()).collect();
        let clause = event
            .clause
            .map(|c| format!("c{c}"))
            .unwrap_or_else(|| "-".into());
        println!("  [{}] {:?} {clause} {lits:?}", event.round, event.kind);
        if event.kind == EventKind::LiteralDiscarded {
            let state = replay(&phi, &upto).expect("log replays");
            print!(
                "after round {}:\n{}",
                event.round,
                emit_x1cnf(&state.current_formula())
            );
        }
    }
    assert_eq!(
        replay(&phi, &verdict.trace).unwrap().round(),
        init_state(&phi).unwrap().round() + 3
    );

    let model: Vec<i64> = verdict
        .assignment
        .as_ref()
        .map(|a| a.to_literals().iter().map(|l| l.to_dimacs()).collect())
        .unwrap_or_default();
    println!(
        "status {:?}, model {model:?}, verification {:?}",
        verdict.status, verdict.verification
    );
}

//! Builds the scope of single literals on the worked formula and classifies
//! each one: incompatible, not yet decided, or covering a model.
//!
//! cargo run --example scope_check

use x1scan::formula::{Formula, Literal};
use x1scan::reduction::init_state;
use x1scan::scope::{build_scope, check_literal, xor2sat_satisfiable, ScopeResult};

fn main() {
    let phi = Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]);
    let state = init_state(&phi).expect("general formula");

    for v in 1..=3 {
        for lit in [Literal::pos(v), Literal::neg(v)] {
            let report = check_literal(&state, lit);
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
        }
    }

    // The parts of one scope, by hand.
    match build_scope(&state, Literal::neg(2)) {
        ScopeResult::Built { scope, residual3 } => {
            let units: Vec<i64> = scope.units.iter().map(|l| l.to_dimacs()).collect();
            let pairs: Vec<[i64; 2]> = scope
                .xor_pairs
                .iter()
                .map(|p| [p[0].to_dimacs(), p[1].to_dimacs()])
                .collect();
            println!(
                "scope of -2: units {units:?}, pairs {pairs:?}, untouched 3-clauses {residual3:?}"
            );
            println!("two-literal part: {:?}", xor2sat_satisfiable(&scope));
        }
        ScopeResult::EarlyConflict { var, units } => println!("conflict on x{var} after {units:?}"),
    }
}

//! Shrinks a formula with respect to a planted fault: a pretend solver that
//! answers "unsatisfiable" whenever the clause (x1 ⊻ x2) is present.
//!
//! cargo run --example minimize

use x1scan::formula::{emit_x1cnf, Formula};
use x1scan::oracle::{brute_force_sat, minimize_with};

fn faulty_claims_unsat(f: &Formula) -> bool {
    f.clauses().iter().any(|c| {
        let mut l: Vec<i64> = c.literals.iter().map(|l| l.to_dimacs()).collect();
        l.sort();
        l == [1, 2]
    })
}

fn main() {
    let f = Formula::from_signed(5, &[&[3, 4], &[1, 2], &[-1, 3, 4], &[2, -4], &[5]]);
    let wrong = |g: &Formula| faulty_claims_unsat(g) == brute_force_sat(g).unwrap().is_sat();
    print!("input:\n{}", emit_x1cnf(&f));
    match minimize_with(&f, wrong) {
        Ok(min) => print!("minimized:\n{}", emit_x1cnf(&min)),
        Err(e) => println!("{e}"),
    }
}

//! Greedy shrinking of formulas on which the scan and the oracle disagree.

use thiserror::Error;

use crate::formula::{Clause, Formula};
use crate::solver::{scan, ScanOptions, Status};

use super::brute_force_sat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinimizeError {
    #[error("the input does not exhibit the property being minimized")]
    NotADisagreement,
}

/// True when the scan verdict and the brute-force oracle differ on
/// satisfiability. A scan error counts as a disagreement.
pub fn disagrees(f: &Formula, opts: &ScanOptions) -> bool {
    let Ok(oracle) = brute_force_sat(f) else {
        return false;
    };
    match scan(f, opts) {
        Ok(v) => (v.status != Status::Unsat) != oracle.is_sat(),
        Err(_) => true,
    }
}

/// Shrinks a disagreement with the default scan.
pub fn minimize_counterexample(f: &Formula, opts: &ScanOptions) -> Result<Formula, MinimizeError> {
    minimize_with(f, |g| disagrees(g, opts))
}

/// Drops single clauses while `keep` holds, then removes single literals of
/// 3-literal clauses while it holds, until neither step applies. The result
/// has ids `1..=m`.
pub fn minimize_with(
    f: &Formula,
    mut keep: impl FnMut(&Formula) -> bool,
) -> Result<Formula, MinimizeError> {
    if !keep(f) {
        return Err(MinimizeError::NotADisagreement);
    }
    let mut clauses: Vec<Clause> = f.clauses().to_vec();
    let build = |cs: &[Clause]| {
        Formula::with_ids(f.n_vars(), cs.to_vec()).expect("shrinking keeps clauses valid")
    };

    loop {
        let mut changed = false;
        let mut i = 0;
        while i < clauses.len() {
            let mut trial = clauses.clone();
            trial.remove(i);
            if keep(&build(&trial)) {
                clauses = trial;
                changed = true;
            } else {
                i += 1;
            }
        }
        for i in 0..clauses.len() {
            if clauses[i].len() != 3 {
                continue;
            }
            for drop in 0..3 {
                let mut trial = clauses.clone();
                trial[i].literals.remove(drop);
                if keep(&build(&trial)) {
                    clauses = trial;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return Ok(build(&clauses).renumbered());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A deliberately broken solver: claims Unsat whenever clause (x1 ⊻ x2)
    /// appears, regardless of the rest.
    fn planted(f: &Formula) -> bool {
        let broken_unsat = f.clauses().iter().any(|c| {
            let mut l: Vec<i64> = c.literals.iter().map(|l| l.to_dimacs()).collect();
            l.sort();
            l == [1, 2]
        });
        let sat = brute_force_sat(f).unwrap().is_sat();
        broken_unsat == sat
    }

    #[test]
    fn recovers_the_planted_core() {
        let f = Formula::from_signed(4, &[&[3, 4], &[1, 2], &[-1, 3, 4], &[2, -4]]);
        assert!(planted(&f));
        let min = minimize_with(&f, planted).unwrap();
        assert_eq!(min, Formula::from_signed(4, &[&[1, 2]]));
    }

    #[test]
    fn result_is_single_drop_minimal() {
        let f = Formula::from_signed(4, &[&[1, 2, 3], &[1, 2], &[-1, -2, 4], &[2, 3, 4]]);
        let min = minimize_with(&f, planted).unwrap();
        assert!(planted(&min));
        for i in 0..min.len() {
            let dropped = min.retain_clauses(|c| c.id != i + 1);
            assert!(!planted(&dropped));
        }
    }

    #[test]
    fn minimal_input_is_unchanged() {
        let f = Formula::from_signed(2, &[&[1, 2]]);
        assert_eq!(minimize_with(&f, planted).unwrap(), f);
    }

    #[test]
    fn non_disagreement_is_rejected() {
        let f = Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]);
        assert_eq!(
            minimize_counterexample(&f, &ScanOptions::default()),
            Err(MinimizeError::NotADisagreement)
        );
    }
}

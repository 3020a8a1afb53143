//! Ground truth and differential testing.

mod corpus;
mod diff;
mod generate;
mod minimize;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Assignment, Formula};

pub use corpus::{clause_types, exhaustive_general, exhaustive_special};
pub use diff::{
    differential_run, random_instances, run_corpus, DiffConfig, DiffParams, DiffReport,
    Disagreement, Instance, NetChecks, OrderInvariance, Origin, StatusCounts, Timing,
};
pub use generate::{generate_random, GenerateError, Profile};
pub use minimize::{disagrees, minimize_counterexample, minimize_with, MinimizeError};

/// Variable limit for enumeration.
pub const MAX_ORACLE_VARS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "model", rename_all = "snake_case")]
pub enum OracleVerdict {
    /// First model in enumeration order.
    Sat(Assignment),
    Unsat,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleVerdict::Sat(_))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n_vars} variables exceed the enumeration limit of {limit}")]
    TooManyVars { n_vars: u32, limit: u32 },
}

/// Clause as bit masks over an assignment word where x1 is the most
/// significant of `n` bits.
struct MaskClause {
    pos: u32,
    neg: u32,
}

fn masks(f: &Formula) -> Vec<MaskClause> {
    let n = f.n_vars();
    f.clauses()
        .iter()
        .map(|c| {
            let mut m = MaskClause { pos: 0, neg: 0 };
            for lit in &c.literals {
                let bit = 1u32 << (n - lit.var());
                if lit.is_positive() {
                    m.pos |= bit;
                } else {
                    m.neg |= bit;
                }
            }
            m
        })
        .collect()
}

fn satisfied(clauses: &[MaskClause], word: u32) -> bool {
    clauses
        .iter()
        .all(|c| (word & c.pos).count_ones() + (!word & c.neg).count_ones() == 1)
}

fn decode(n: u32, word: u32) -> Assignment {
    let values: Vec<bool> = (1..=n).map(|v| word & (1 << (n - v)) != 0).collect();
    Assignment::from_values(&values)
}

fn check_budget(f: &Formula) -> Result<(), OracleError> {
    if f.n_vars() > MAX_ORACLE_VARS {
        return Err(OracleError::TooManyVars {
            n_vars: f.n_vars(),
            limit: MAX_ORACLE_VARS,
        });
    }
    Ok(())
}

/// Enumerates assignments in lexicographic order, x1 first and false before
/// true, and returns the first model.
pub fn brute_force_sat(f: &Formula) -> Result<OracleVerdict, OracleError> {
    check_budget(f)?;
    let clauses = masks(f);
    let n = f.n_vars();
    Ok((0..1u32 << n)
        .find(|&w| satisfied(&clauses, w))
        .map_or(OracleVerdict::Unsat, |w| OracleVerdict::Sat(decode(n, w))))
}

/// Every model, in enumeration order.
pub fn all_models(f: &Formula) -> Result<Vec<Assignment>, OracleError> {
    check_budget(f)?;
    let clauses = masks(f);
    let n = f.n_vars();
    Ok((0..1u32 << n)
        .filter(|&w| satisfied(&clauses, w))
        .map(|w| decode(n, w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_formula_first_model_is_all_false() {
        let f = Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]);
        assert_eq!(
            brute_force_sat(&f).unwrap(),
            OracleVerdict::Sat(Assignment::from_values(&[false; 3]))
        );
    }

    #[test]
    fn unsat_examples() {
        assert_eq!(
            brute_force_sat(&Formula::from_signed(1, &[&[1], &[-1]])).unwrap(),
            OracleVerdict::Unsat
        );
        assert_eq!(
            brute_force_sat(&Formula::from_signed(2, &[&[1, 2], &[1, -2]])).unwrap(),
            OracleVerdict::Unsat
        );
    }

    #[test]
    fn enumeration_order() {
        // models of x1 ⊻ x2 are 01 then 10
        let f = Formula::from_signed(2, &[&[1, 2]]);
        let models = all_models(&f).unwrap();
        assert_eq!(
            models,
            vec![
                Assignment::from_values(&[false, true]),
                Assignment::from_values(&[true, false])
            ]
        );
        for m in &models {
            assert!(f.evaluate_exactly1(m).unwrap());
        }
    }

    #[test]
    fn budget_guard() {
        let f = Formula::empty(30);
        assert_eq!(
            brute_force_sat(&f),
            Err(OracleError::TooManyVars {
                n_vars: 30,
                limit: 24
            })
        );
    }

    #[test]
    fn empty_formula_is_sat() {
        assert!(brute_force_sat(&Formula::empty(0)).unwrap().is_sat());
    }
}

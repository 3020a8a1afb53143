//! Special formulas (a clause holding both polarities of one variable) and
//! their conversion to general ones.
//!
//! In a clause `{z, x, ¬x}` exactly one of `x`, `¬x` is always true, so `z`
//! must be false everywhere: it is removed from every clause and `¬z` is
//! recorded as forced. The pair `{x, ¬x}` that remains is always satisfied
//! and is dropped.

use serde::Serialize;
use thiserror::Error;

use super::{Clause, ClauseId, Formula, Literal, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    General,
    /// `(clause id, var)` for every clause holding both polarities of `var`.
    Special(Vec<(ClauseId, Var)>),
}

pub fn classify(f: &Formula) -> Classification {
    let special: Vec<(ClauseId, Var)> = f
        .clauses()
        .iter()
        .filter_map(|c| complementary_var(c).map(|v| (c.id, v)))
        .collect();
    if special.is_empty() {
        Classification::General
    } else {
        Classification::Special(special)
    }
}

fn complementary_var(clause: &Clause) -> Option<Var> {
    clause
        .literals
        .iter()
        .find(|lit| clause.literals.contains(&lit.negate()))
        .map(|lit| lit.var())
}

/// A literal fixed true by conversion, with the special clause that forced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ForcedLiteral {
    pub literal: Literal,
    pub clause: ClauseId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conversion {
    /// General formula; the original is equivalent to it conjoined with `forced`.
    pub formula: Formula,
    pub forced: Vec<ForcedLiteral>,
}

impl Conversion {
    pub fn forced_literals(&self) -> Vec<Literal> {
        self.forced.iter().map(|f| f.literal).collect()
    }

    /// The converted formula with the forced literals as unit clauses.
    pub fn conjoined(&self) -> Formula {
        self.formula.with_units(&self.forced_literals())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConversionError {
    #[error("conversion forces both polarities of x{var}")]
    Contradiction {
        var: Var,
        forced: Vec<ForcedLiteral>,
    },
}

pub fn convert_special(f: &Formula) -> Result<Conversion, ConversionError> {
    let mut clauses: Vec<Clause> = f.clauses().to_vec();
    let mut forced: Vec<ForcedLiteral> = Vec::new();

    while let Some(pos) = clauses.iter().position(|c| complementary_var(c).is_some()) {
        let clause = clauses.remove(pos);
        let var = complementary_var(&clause).expect("position found a special clause");
        let Some(&other) = clause.literals.iter().find(|l| l.var() != var) else {
            // `{x, ¬x}` alone always has exactly one true literal
            continue;
        };
        let forced_lit = other.negate();
        if forced.iter().any(|f| f.literal == other) {
            forced.push(ForcedLiteral {
                literal: forced_lit,
                clause: clause.id,
            });
            return Err(ConversionError::Contradiction {
                var: other.var(),
                forced,
            });
        }
        if !forced.iter().any(|f| f.literal == forced_lit) {
            forced.push(ForcedLiteral {
                literal: forced_lit,
                clause: clause.id,
            });
        }
        for c in &mut clauses {
            c.literals.retain(|&l| l != other);
        }
        if clauses.iter().any(|c| c.literals.is_empty()) {
            return Err(ConversionError::Contradiction {
                var: other.var(),
                forced,
            });
        }
    }

    let formula =
        Formula::with_ids(f.n_vars(), clauses).expect("removing literals keeps clauses valid");
    Ok(Conversion { formula, forced })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_worked_examples() {
        let general = Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]);
        assert_eq!(classify(&general), Classification::General);
        let special = Formula::from_signed(4, &[&[1, -3, 4], &[1, -2, 2], &[2, -3]]);
        assert_eq!(classify(&special), Classification::Special(vec![(2, 2)]));
        assert_eq!(
            classify(&Formula::from_signed(2, &[&[1, 2]])),
            Classification::General
        );
    }

    #[test]
    fn converts_the_special_example() {
        let special = Formula::from_signed(4, &[&[1, -3, 4], &[1, -2, 2], &[2, -3]]);
        let conv = convert_special(&special).unwrap();
        assert_eq!(
            conv.forced,
            vec![ForcedLiteral {
                literal: Literal::neg(1),
                clause: 2
            }]
        );
        let expected = Formula::with_ids(
            4,
            vec![
                Clause {
                    id: 1,
                    literals: vec![Literal::neg(3), Literal::pos(4)],
                },
                Clause {
                    id: 3,
                    literals: vec![Literal::pos(2), Literal::neg(3)],
                },
            ],
        )
        .unwrap();
        assert_eq!(conv.formula, expected);
        assert_eq!(classify(&conv.formula), Classification::General);
    }

    #[test]
    fn general_formula_passes_through() {
        let f = Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]);
        let conv = convert_special(&f).unwrap();
        assert_eq!(conv.formula, f);
        assert!(conv.forced.is_empty());
    }

    #[test]
    fn contradictory_forcing_is_reported() {
        let f = Formula::from_signed(3, &[&[1, 2, -2], &[-1, 3, -3]]);
        let err = convert_special(&f).unwrap_err();
        let ConversionError::Contradiction { var, forced } = err;
        assert_eq!(var, 1);
        let lits: Vec<Literal> = forced.iter().map(|f| f.literal).collect();
        assert_eq!(lits, vec![Literal::neg(1), Literal::pos(1)]);
    }

    #[test]
    fn two_literal_tautology_is_dropped() {
        let f = Formula::from_signed(2, &[&[1, -1], &[2]]);
        let conv = convert_special(&f).unwrap();
        assert_eq!(conv.formula.len(), 1);
        assert!(conv.forced.is_empty());
    }

    #[test]
    fn forcing_against_a_unit_clause_is_a_contradiction() {
        let f = Formula::from_signed(2, &[&[2], &[2, 1, -1]]);
        assert!(matches!(
            convert_special(&f),
            Err(ConversionError::Contradiction { var: 2, .. })
        ));
    }
}

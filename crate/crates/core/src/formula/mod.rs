//! Exactly-1 formulas: literals, clauses, assignments and evaluation.
//!
//! A clause holds one to three literals and is satisfied when exactly one of
//! them is true. A formula is the conjunction of its clauses.

mod convert;
mod x1cnf;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use convert::{
    classify, convert_special, Classification, Conversion, ConversionError, ForcedLiteral,
};
pub use x1cnf::{emit_x1cnf, parse_x1cnf, ParseError};

/// Variable index, starting at 1.
pub type Var = u32;

/// Stable clause identifier. Reductions empty clauses, they never renumber them.
pub type ClauseId = usize;

/// A signed variable occurrence.
///
/// Serialized in DIMACS style: `3` is `x3`, `-3` is `¬x3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Literal {
    var: Var,
    negative: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal {
            var,
            negative: !positive,
        }
    }

    pub fn pos(var: Var) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: Var) -> Self {
        Literal::new(var, false)
    }

    /// Parses a nonzero DIMACS integer.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 || value.unsigned_abs() > u64::from(Var::MAX) {
            return None;
        }
        Some(Literal::new(value.unsigned_abs() as Var, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var);
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        !self.negative
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negative: !self.negative,
        }
    }

    /// Dense index: `2 * (var - 1) + negative`.
    pub fn code(self) -> usize {
        2 * (self.var as usize - 1) + usize::from(self.negative)
    }

    pub fn from_code(code: usize) -> Self {
        Literal {
            var: (code / 2 + 1) as Var,
            negative: code % 2 == 1,
        }
    }

    /// Truth value of the literal when its variable takes `value`.
    pub fn holds(self, value: bool) -> bool {
        value != self.negative
    }
}

/// Free-function form of [`Literal::negate`].
pub fn negate(lit: Literal) -> Literal {
    lit.negate()
}

impl TryFrom<i64> for Literal {
    type Error = String;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        Literal::from_dimacs(value).ok_or_else(|| format!("invalid literal {value}"))
    }
}

impl From<Literal> for i64 {
    fn from(lit: Literal) -> i64 {
        lit.to_dimacs()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.contains(&lit)
    }

    /// A single-literal clause is a conjunct rather than a choice.
    pub fn is_conjunct(&self) -> bool {
        self.literals.len() == 1
    }

    /// Number of true literals under a complete assignment.
    fn true_count(&self, a: &Assignment) -> Option<usize> {
        let mut count = 0;
        for lit in &self.literals {
            if a.literal_value(*lit)? {
                count += 1;
            }
        }
        Some(count)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause {clause} has {len} literals, expected 1 to 3")]
    ClauseSize { clause: ClauseId, len: usize },
    #[error("clause {clause} repeats literal {literal}")]
    DuplicateLiteral { clause: ClauseId, literal: Literal },
    #[error("clause {clause} mentions x{var} but the formula has {n_vars} variables")]
    VarOutOfRange {
        clause: ClauseId,
        var: Var,
        n_vars: u32,
    },
    #[error("clause id {0} is used twice")]
    DuplicateClauseId(ClauseId),
    #[error("assignment leaves x{0} unassigned")]
    IncompleteAssignment(Var),
    #[error("assignment covers {found} variables, formula has {expected}")]
    AssignmentSize { expected: u32, found: u32 },
}

/// Conjunction of exactly-one clauses over variables `1..=n_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Formula {
    n_vars: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    /// Builds a formula with clause ids `1..=m` in the given order.
    pub fn new(n_vars: u32, clauses: Vec<Vec<Literal>>) -> Result<Self, FormulaError> {
        let clauses = clauses
            .into_iter()
            .enumerate()
            .map(|(i, literals)| Clause {
                id: i + 1,
                literals,
            })
            .collect();
        Formula::with_ids(n_vars, clauses)
    }

    pub fn with_ids(n_vars: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        let mut seen_ids = BTreeSet::new();
        for clause in &clauses {
            if !seen_ids.insert(clause.id) {
                return Err(FormulaError::DuplicateClauseId(clause.id));
            }
            if clause.literals.is_empty() || clause.literals.len() > 3 {
                return Err(FormulaError::ClauseSize {
                    clause: clause.id,
                    len: clause.literals.len(),
                });
            }
            for (i, lit) in clause.literals.iter().enumerate() {
                if lit.var() > n_vars {
                    return Err(FormulaError::VarOutOfRange {
                        clause: clause.id,
                        var: lit.var(),
                        n_vars,
                    });
                }
                if clause.literals[..i].contains(lit) {
                    return Err(FormulaError::DuplicateLiteral {
                        clause: clause.id,
                        literal: *lit,
                    });
                }
            }
        }
        Ok(Formula { n_vars, clauses })
    }

    /// Shorthand for tests and examples: clauses as DIMACS integers.
    ///
    /// Panics on invalid input.
    pub fn from_signed(n_vars: u32, clauses: &[&[i64]]) -> Self {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| Literal::from_dimacs(v).expect("nonzero literal"))
                    .collect()
            })
            .collect();
        Formula::new(n_vars, clauses).expect("valid formula")
    }

    pub fn empty(n_vars: u32) -> Self {
        Formula {
            n_vars,
            clauses: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn max_clause_id(&self) -> ClauseId {
        self.clauses.iter().map(|c| c.id).max().unwrap_or(0)
    }

    /// Copy of this formula restricted to the clauses `keep` accepts.
    pub fn retain_clauses(&self, mut keep: impl FnMut(&Clause) -> bool) -> Formula {
        Formula {
            n_vars: self.n_vars,
            clauses: self.clauses.iter().filter(|c| keep(c)).cloned().collect(),
        }
    }

    /// Appends `lits` as unit clauses with fresh ids.
    pub fn with_units(&self, lits: &[Literal]) -> Formula {
        let mut clauses = self.clauses.clone();
        for (id, lit) in (self.max_clause_id() + 1..).zip(lits) {
            clauses.push(Clause {
                id,
                literals: vec![*lit],
            });
        }
        Formula {
            n_vars: self.n_vars,
            clauses,
        }
    }

    /// Formula with its clauses in the same order but ids `1..=m`.
    pub fn renumbered(&self) -> Formula {
        Formula::new(
            self.n_vars,
            self.clauses.iter().map(|c| c.literals.clone()).collect(),
        )
        .expect("renumbering keeps a valid formula valid")
    }

    /// True iff every clause has exactly one true literal under `a`.
    pub fn evaluate_exactly1(&self, a: &Assignment) -> Result<bool, FormulaError> {
        Ok(self.violated_clauses(a)?.is_empty())
    }

    /// Clause ids that do not have exactly one true literal under `a`.
    pub fn violated_clauses(&self, a: &Assignment) -> Result<Vec<ClauseId>, FormulaError> {
        if a.n_vars() < self.n_vars {
            return Err(FormulaError::AssignmentSize {
                expected: self.n_vars,
                found: a.n_vars(),
            });
        }
        if let Some(var) = (1..=self.n_vars).find(|&v| a.get(v).is_none()) {
            return Err(FormulaError::IncompleteAssignment(var));
        }
        Ok(self
            .clauses
            .iter()
            .filter(|c| c.true_count(a) != Some(1))
            .map(|c| c.id)
            .collect())
    }
}

/// Free-function form of [`Formula::evaluate_exactly1`].
pub fn evaluate_exactly1(f: &Formula, a: &Assignment) -> Result<bool, FormulaError> {
    f.evaluate_exactly1(a)
}

/// Value per variable; `None` marks an unassigned variable.
///
/// Serialized as the list of true literals, DIMACS style.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn unassigned(n_vars: u32) -> Self {
        Assignment {
            values: vec![None; n_vars as usize],
        }
    }

    pub fn from_values(values: &[bool]) -> Self {
        Assignment {
            values: values.iter().map(|&v| Some(v)).collect(),
        }
    }

    pub fn from_literals(n_vars: u32, lits: &[Literal]) -> Self {
        let mut a = Assignment::unassigned(n_vars);
        for lit in lits {
            a.set(lit.var(), lit.is_positive());
        }
        a
    }

    pub fn n_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var as usize - 1).copied().flatten()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        let idx = var as usize - 1;
        if idx >= self.values.len() {
            self.values.resize(idx + 1, None);
        }
        self.values[idx] = Some(value);
    }

    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.holds(v))
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Assigns `value` to every unassigned variable.
    pub fn fill(&mut self, value: bool) {
        for v in &mut self.values {
            v.get_or_insert(value);
        }
    }

    /// True literal per assigned variable, ascending by variable.
    pub fn to_literals(&self) -> Vec<Literal> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| Literal::new(i as Var + 1, b)))
            .collect()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_literals()).finish()
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_literals().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> Formula {
        Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]])
    }

    #[test]
    fn negate_flips_polarity_only() {
        assert_eq!(negate(Literal::pos(1)), Literal::neg(1));
        assert_eq!(negate(Literal::neg(3)), Literal::pos(3));
        assert_eq!(negate(negate(Literal::pos(2))), Literal::pos(2));
    }

    #[test]
    fn literal_codes_round_trip() {
        for code in 0..20 {
            assert_eq!(Literal::from_code(code).code(), code);
        }
        assert_eq!(Literal::neg(2).code(), 3);
    }

    #[test]
    fn evaluates_worked_formula() {
        let f = worked();
        let all_false = Assignment::from_values(&[false, false, false]);
        assert!(f.evaluate_exactly1(&all_false).unwrap());
        // clause 2 gets x1 and x3 true
        let all_true = Assignment::from_values(&[true, true, true]);
        assert!(!f.evaluate_exactly1(&all_true).unwrap());
        assert_eq!(f.violated_clauses(&all_true).unwrap(), vec![2]);
    }

    #[test]
    fn empty_formula_is_true() {
        let f = Formula::empty(2);
        assert!(f
            .evaluate_exactly1(&Assignment::from_values(&[true, false]))
            .unwrap());
    }

    #[test]
    fn incomplete_assignment_is_an_error() {
        let f = worked();
        let mut a = Assignment::unassigned(3);
        a.set(1, true);
        assert_eq!(
            f.evaluate_exactly1(&a),
            Err(FormulaError::IncompleteAssignment(2))
        );
    }

    #[test]
    fn rejects_bad_clauses() {
        let dup = Formula::new(2, vec![vec![Literal::pos(1), Literal::pos(1)]]);
        assert!(matches!(
            dup,
            Err(FormulaError::DuplicateLiteral { clause: 1, .. })
        ));
        let wide = Formula::new(4, vec![(1..=4).map(Literal::pos).collect()]);
        assert!(matches!(wide, Err(FormulaError::ClauseSize { len: 4, .. })));
        let range = Formula::new(1, vec![vec![Literal::pos(2)]]);
        assert!(matches!(
            range,
            Err(FormulaError::VarOutOfRange { var: 2, .. })
        ));
    }

    #[test]
    fn assignment_serializes_as_true_literals() {
        let a = Assignment::from_values(&[false, true, false]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[-1,2,-3]");
    }
}

//! The scope Ψ_s(z) of a literal: assume `z`, chain the clause reductions
//! on a scratch copy of the state, and decide what is left with a XOR check.

mod xor;

use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::formula::{Assignment, ClauseId, Literal, Var};
use crate::reduction::{reduce_false, reduce_true, ClauseStore, EventKind, SolverState};

pub use xor::{solve_xor, XorConstraint, XorOutcome};

/// Units E and exactly-one pairs gathered while building a scope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScopeFormula {
    pub n_vars: u32,
    /// E, in the order the literals emerged.
    pub units: Vec<Literal>,
    /// Live 2-literal clauses of the scratch state.
    pub xor_pairs: Vec<[Literal; 2]>,
    /// E', the conjuncts whose clauses were reduced.
    pub processed: Vec<Literal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ScopeResult {
    /// Both polarities of `var` entered E; `units` is E at that point.
    EarlyConflict { var: Var, units: Vec<Literal> },
    /// `residual3` lists the 3-literal clauses the reductions never reached.
    Built {
        scope: ScopeFormula,
        residual3: Vec<ClauseId>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScopeVerdict {
    Incompatible,
    NotYet,
    /// The scope is satisfiable and leaves no 3-literal clause; the model
    /// covers every variable of the formula.
    CoversSatisfiable(Assignment),
}

impl ScopeVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ScopeVerdict::Incompatible => "incompatible",
            ScopeVerdict::NotYet => "not_yet",
            ScopeVerdict::CoversSatisfiable(_) => "covers_satisfiable",
        }
    }
}

impl Serialize for ScopeVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// The state overlaid with the clauses changed by one scope construction.
struct Scratch<'a> {
    base: &'a SolverState,
    changed: HashMap<usize, Vec<Literal>>,
    three_count: usize,
}

impl<'a> Scratch<'a> {
    fn new(base: &'a SolverState) -> Self {
        Scratch {
            base,
            changed: HashMap::new(),
            three_count: base.three_literal_count(),
        }
    }
}

impl ClauseStore for Scratch<'_> {
    fn occurrences(&self, lit: Literal) -> Vec<usize> {
        self.base
            .occurrence_positions(lit)
            .iter()
            .copied()
            .filter(|&p| self.changed.get(&p).is_none_or(|c| c.contains(&lit)))
            .collect()
    }

    fn literals(&self, pos: usize) -> &[Literal] {
        self.changed
            .get(&pos)
            .map_or_else(|| self.base.clause_at(pos), Vec::as_slice)
    }

    fn clause_id(&self, pos: usize) -> ClauseId {
        self.base.id_at(pos)
    }

    fn replace(&mut self, pos: usize, lits: Vec<Literal>) {
        if self.literals(pos).len() == 3 {
            self.three_count -= 1;
        }
        if lits.len() == 3 {
            self.three_count += 1;
        }
        self.changed.insert(pos, lits);
    }

    fn record(&mut self, _: EventKind, _: usize, _: Vec<Literal>) {}
}

/// E with constant-time membership and conflict detection.
struct Emerged {
    order: Vec<Literal>,
    member: Vec<bool>,
}

impl Emerged {
    fn new(n_vars: u32) -> Self {
        Emerged {
            order: Vec::new(),
            member: vec![false; 2 * n_vars as usize],
        }
    }

    /// Adds `lit`; returns its variable if the opposite polarity is already in E.
    fn push(&mut self, lit: Literal) -> Option<Var> {
        if std::mem::replace(&mut self.member[lit.code()], true) {
            return None;
        }
        self.order.push(lit);
        self.member[lit.negate().code()].then_some(lit.var())
    }
}

/// Builds Ψ_s(z) without touching `state`.
///
/// Conjuncts of E are expanded in rounds: each round takes every conjunct not
/// yet expanded, in the order they entered E, makes its clauses conjunctions
/// and removes its negation from the others. Rounds stop once no 3-literal
/// clause remains or nothing new entered E.
pub fn build_scope(state: &SolverState, z: Literal) -> ScopeResult {
    let mut scratch = Scratch::new(state);
    let mut e = Emerged::new(state.n_vars());
    e.push(z);
    let mut done = 0;

    while scratch.three_count > 0 && done < e.order.len() {
        let batch = e.order.len();
        for j in done..batch {
            let zj = e.order[j];
            for (lit, _) in reduce_true(&mut scratch, zj) {
                if let Some(var) = e.push(lit) {
                    return ScopeResult::EarlyConflict {
                        var,
                        units: e.order,
                    };
                }
            }
            match reduce_false(&mut scratch, zj.negate()) {
                Ok(units) => {
                    for (lit, _) in units {
                        if let Some(var) = e.push(lit) {
                            return ScopeResult::EarlyConflict {
                                var,
                                units: e.order,
                            };
                        }
                    }
                }
                // a clause lost every literal: no literal of it can be true
                Err(_) => {
                    return ScopeResult::EarlyConflict {
                        var: zj.var(),
                        units: e.order,
                    }
                }
            }
        }
        done = batch;
    }

    let mut xor_pairs = Vec::new();
    let mut residual3 = Vec::new();
    for pos in 0..state.clause_count() {
        match scratch.literals(pos) {
            [a, b] => xor_pairs.push([*a, *b]),
            [_, _, _] => residual3.push(state.id_at(pos)),
            _ => {}
        }
    }
    let processed = e.order[..done].to_vec();
    let scope = ScopeFormula {
        n_vars: state.n_vars(),
        units: e.order,
        xor_pairs,
        processed,
    };
    ScopeResult::Built { scope, residual3 }
}

/// Satisfiability of units ∧ pairs.
pub fn xor2sat_satisfiable(sf: &ScopeFormula) -> XorOutcome {
    solve_xor(sf.n_vars, &sf.units, &sf.xor_pairs)
}

/// Full record of one incompatibility check, for traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScopeReport {
    pub round: u32,
    pub literal: Literal,
    #[serde(rename = "E")]
    pub units: Vec<Literal>,
    pub xor_pairs: Vec<[Literal; 2]>,
    pub residual3: Vec<ClauseId>,
    pub verdict: ScopeVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflict_var: Option<Var>,
}

/// Builds the scope of `z` and classifies it.
pub fn check_literal(state: &SolverState, z: Literal) -> ScopeReport {
    let round = state.round();
    match build_scope(state, z) {
        ScopeResult::EarlyConflict { var, units } => ScopeReport {
            round,
            literal: z,
            units,
            xor_pairs: Vec::new(),
            residual3: Vec::new(),
            verdict: ScopeVerdict::Incompatible,
            conflict_var: Some(var),
        },
        ScopeResult::Built { scope, residual3 } => {
            let verdict = match xor2sat_satisfiable(&scope) {
                XorOutcome::Unsat { .. } => ScopeVerdict::Incompatible,
                XorOutcome::Sat(_) if !residual3.is_empty() => ScopeVerdict::NotYet,
                XorOutcome::Sat(model) => {
                    ScopeVerdict::CoversSatisfiable(complete_model(state, model))
                }
            };
            ScopeReport {
                round,
                literal: z,
                units: scope.units,
                xor_pairs: scope.xor_pairs,
                residual3,
                verdict,
                conflict_var: None,
            }
        }
    }
}

/// Incompatible, not yet incompatible, or covering with a model.
pub fn incompatible(state: &SolverState, z: Literal) -> ScopeVerdict {
    check_literal(state, z).verdict
}

/// The scope model, then the conjuncts of N, then false for the rest.
fn complete_model(state: &SolverState, mut model: Assignment) -> Assignment {
    for c in state.conjuncts() {
        if model.get(c.literal.var()).is_none() {
            model.set(c.literal.var(), c.literal.is_positive());
        }
    }
    model.fill(false);
    model
}

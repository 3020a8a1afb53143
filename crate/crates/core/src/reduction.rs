//! The current formula Φ_s with its occurrence indices, and the clause
//! reductions shared by the scope construction and by discards.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{classify, Classification, ClauseId, Formula, Literal, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A true literal turned its clause into a conjunction. Literals: the true
    /// literal, then the negations that emerged.
    ClauseToConjunction,
    /// A false literal left a 3-literal clause. Literals: the removed literal.
    ThreeToTwo,
    /// A false literal left a 2-literal clause. Literals: the removed literal,
    /// then the unit that emerged.
    TwoToUnit,
    /// End of a discard; the round counter advances. Literals: the discarded literal.
    LiteralDiscarded,
    /// A literal entered N for the first time.
    ConjunctAdded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionEvent {
    pub round: u32,
    pub kind: EventKind,
    pub clause: Option<ClauseId>,
    pub literals: Vec<Literal>,
}

/// One event per line, as JSON.
pub fn events_to_jsonl(events: &[ReductionEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&serde_json::to_string(e).expect("events serialize"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StateError {
    #[error("clause {clause} holds both polarities of x{var}; convert the formula first")]
    SpecialFormula { clause: ClauseId, var: Var },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("event {index} names unknown clause {clause}")]
    UnknownClause { index: usize, clause: ClauseId },
    #[error("event {index} is malformed")]
    Malformed { index: usize },
}

/// A literal of N together with the clause it was read from, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conjunct {
    pub literal: Literal,
    pub clause: Option<ClauseId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DiscardOutcome {
    Updated,
    /// Both polarities of `var` ended up in N.
    Unsat {
        var: Var,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverState {
    base: Formula,
    /// Clause ids in ascending order; a clause's position indexes the fields below.
    ids: Vec<ClauseId>,
    clauses: Vec<Vec<Literal>>,
    /// Positions of the live clauses holding each literal, by literal code.
    occurrence: Vec<BTreeSet<usize>>,
    /// `[positive live, negative live]` per variable.
    live: Vec<[bool; 2]>,
    conjuncts: Vec<Conjunct>,
    in_n: Vec<bool>,
    conflict: Option<Var>,
    round: u32,
    three_count: usize,
    events: Vec<ReductionEvent>,
}

/// Builds the state for a general formula. Unit clauses are emptied and their
/// literals put into N.
pub fn init_state(f: &Formula) -> Result<SolverState, StateError> {
    if let Classification::Special(list) = classify(f) {
        let (clause, var) = list[0];
        return Err(StateError::SpecialFormula { clause, var });
    }
    let n = f.n_vars() as usize;
    let mut sorted: Vec<_> = f.clauses().iter().collect();
    sorted.sort_by_key(|c| c.id);

    let mut state = SolverState {
        base: f.clone(),
        ids: sorted.iter().map(|c| c.id).collect(),
        clauses: Vec::with_capacity(sorted.len()),
        occurrence: vec![BTreeSet::new(); 2 * n],
        live: vec![[true, true]; n],
        conjuncts: Vec::new(),
        in_n: vec![false; 2 * n],
        conflict: None,
        round: 1,
        three_count: 0,
        events: Vec::new(),
    };
    let mut units = Vec::new();
    for (pos, clause) in sorted.iter().enumerate() {
        if clause.is_conjunct() {
            units.push((clause.literals[0], clause.id));
            state.clauses.push(Vec::new());
            continue;
        }
        for lit in &clause.literals {
            state.occurrence[lit.code()].insert(pos);
        }
        if clause.len() == 3 {
            state.three_count += 1;
        }
        state.clauses.push(clause.literals.clone());
    }
    for (lit, id) in units {
        state.push_conjunct(lit, Some(id));
    }
    Ok(state)
}

/// Rebuilds a state from its base formula and an event log.
pub fn replay(base: &Formula, events: &[ReductionEvent]) -> Result<SolverState, ReplayError> {
    let mut state = init_state(base)?;
    for (index, e) in events.iter().enumerate() {
        let malformed = || ReplayError::Malformed { index };
        let pos = match e.clause {
            Some(clause) => Some(
                state
                    .position(clause)
                    .ok_or(ReplayError::UnknownClause { index, clause })?,
            ),
            None => None,
        };
        let first = *e.literals.first().ok_or_else(malformed)?;
        state.round = e.round;
        match e.kind {
            EventKind::ClauseToConjunction => state.replace(pos.ok_or_else(malformed)?, Vec::new()),
            EventKind::ThreeToTwo => {
                let pos = pos.ok_or_else(malformed)?;
                let lits = state.clauses[pos]
                    .iter()
                    .copied()
                    .filter(|&l| l != first)
                    .collect();
                state.replace(pos, lits);
            }
            EventKind::TwoToUnit => state.replace(pos.ok_or_else(malformed)?, Vec::new()),
            EventKind::ConjunctAdded => {
                state.push_conjunct(first, e.clause);
                // push_conjunct logs the event itself
                continue;
            }
            EventKind::LiteralDiscarded => {
                state.live[first.var() as usize - 1] = polarity_only(first.negate());
                state.round += 1;
            }
        }
        state.events.push(e.clone());
    }
    Ok(state)
}

fn polarity_only(lit: Literal) -> [bool; 2] {
    [lit.is_positive(), !lit.is_positive()]
}

impl SolverState {
    pub fn base(&self) -> &Formula {
        &self.base
    }

    pub fn n_vars(&self) -> u32 {
        self.base.n_vars()
    }

    /// The scan round s, starting at 1.
    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn events(&self) -> &[ReductionEvent] {
        &self.events
    }

    pub fn conjuncts(&self) -> &[Conjunct] {
        &self.conjuncts
    }

    pub fn in_conjuncts(&self, lit: Literal) -> bool {
        self.in_n[lit.code()]
    }

    /// Variable whose two polarities are both in N, if any.
    pub fn contradiction(&self) -> Option<Var> {
        self.conflict
    }

    /// •ℓ_v: the polarities of `var` not yet discarded.
    pub fn live_literals(&self, var: Var) -> Vec<Literal> {
        let [p, n] = self.live[var as usize - 1];
        let mut out = Vec::with_capacity(2);
        if p {
            out.push(Literal::pos(var));
        }
        if n {
            out.push(Literal::neg(var));
        }
        out
    }

    /// |•ℓ_v| = 2.
    pub fn is_open(&self, var: Var) -> bool {
        self.live[var as usize - 1] == [true, true]
    }

    pub fn is_live(&self, lit: Literal) -> bool {
        self.live[lit.var() as usize - 1][usize::from(!lit.is_positive())]
    }

    /// Č^z: ids of the live clauses holding `lit`, ascending.
    pub fn occurrences(&self, lit: Literal) -> Vec<ClauseId> {
        self.occurrence[lit.code()]
            .iter()
            .map(|&p| self.ids[p])
            .collect()
    }

    /// •c̄_k, empty once the clause has been reduced away.
    pub fn clause_literals(&self, id: ClauseId) -> Option<&[Literal]> {
        self.position(id).map(|p| self.clauses[p].as_slice())
    }

    /// Live (nonempty) clauses as `(id, literals)`, ascending by id.
    pub fn live_clauses(&self) -> impl Iterator<Item = (ClauseId, &[Literal])> + '_ {
        self.ids
            .iter()
            .zip(&self.clauses)
            .filter(|(_, c)| !c.is_empty())
            .map(|(&id, c)| (id, c.as_slice()))
    }

    pub fn three_literal_count(&self) -> usize {
        self.three_count
    }

    /// Φ_s: the live clauses followed by the conjuncts of N as unit clauses.
    pub fn current_formula(&self) -> Formula {
        let live: Vec<_> = self.live_clauses().map(|(id, _)| id).collect();
        let mut clauses = Vec::with_capacity(live.len());
        for id in live {
            let mut c = self
                .base
                .clause(id)
                .expect("live clause exists in base")
                .clone();
            c.literals = self.clause_literals(id).expect("live clause").to_vec();
            clauses.push(c);
        }
        let f = Formula::with_ids(self.n_vars(), clauses).expect("live clauses stay valid");
        let lits: Vec<Literal> = self.conjuncts.iter().map(|c| c.literal).collect();
        f.with_units(&lits)
    }

    /// Conjuncts of N whose variable still has both polarities live, in the
    /// order they entered N. Scan discards the opposite of each.
    pub fn necessary_literals(&self) -> Vec<(Literal, Option<ClauseId>)> {
        self.conjuncts
            .iter()
            .filter(|c| self.is_open(c.literal.var()))
            .map(|c| (c.literal, c.clause))
            .collect()
    }

    /// Adds `lit` to N. Returns false if it was already there.
    pub fn add_conjunct(&mut self, lit: Literal, clause: Option<ClauseId>) -> bool {
        self.push_conjunct(lit, clause)
    }

    fn push_conjunct(&mut self, lit: Literal, clause: Option<ClauseId>) -> bool {
        if self.in_n[lit.code()] {
            return false;
        }
        self.in_n[lit.code()] = true;
        if self.in_n[lit.negate().code()] && self.conflict.is_none() {
            self.conflict = Some(lit.var());
        }
        self.conjuncts.push(Conjunct {
            literal: lit,
            clause,
        });
        self.events.push(ReductionEvent {
            round: self.round,
            kind: EventKind::ConjunctAdded,
            clause,
            literals: vec![lit],
        });
        true
    }

    /// Treats `z` as true: every live clause holding it becomes a
    /// conjunction. Returns the emerged negations with their clause.
    pub fn reduce_on_true(&mut self, z: Literal) -> Vec<(Literal, ClauseId)> {
        reduce_true(self, z)
    }

    /// Treats `z` as false: it leaves every live clause. Clauses shrinking to
    /// one literal are emptied and that literal returned. `Err` names a clause
    /// left with no literal at all.
    pub fn reduce_on_false(&mut self, z: Literal) -> Result<Vec<(Literal, ClauseId)>, ClauseId> {
        reduce_false(self, z)
    }

    /// Discards `z`: `¬z` becomes a conjunct and both reductions run.
    pub fn discard(&mut self, z: Literal) -> DiscardOutcome {
        let not_z = z.negate();
        self.push_conjunct(not_z, None);
        reduce_true_each(self, not_z, |s, lit, clause| {
            s.push_conjunct(lit, Some(clause));
        });
        if let Some(var) = self.conflict {
            return DiscardOutcome::Unsat { var };
        }
        let pushed = reduce_false_each(self, z, |s, lit, clause| {
            s.push_conjunct(lit, Some(clause));
        });
        if pushed.is_err() {
            return DiscardOutcome::Unsat { var: z.var() };
        }
        if let Some(var) = self.conflict {
            return DiscardOutcome::Unsat { var };
        }
        self.live[z.var() as usize - 1] = polarity_only(not_z);
        self.events.push(ReductionEvent {
            round: self.round,
            kind: EventKind::LiteralDiscarded,
            clause: None,
            literals: vec![z],
        });
        self.round += 1;
        DiscardOutcome::Updated
    }

    /// Recomputes the occurrence index from the clauses and compares.
    pub fn index_consistent(&self) -> bool {
        let mut rebuilt = vec![BTreeSet::new(); self.occurrence.len()];
        let mut threes = 0;
        for (pos, c) in self.clauses.iter().enumerate() {
            for lit in c {
                rebuilt[lit.code()].insert(pos);
            }
            threes += usize::from(c.len() == 3);
        }
        let disjoint = (0..self.occurrence.len())
            .step_by(2)
            .all(|code| self.occurrence[code].is_disjoint(&self.occurrence[code + 1]));
        rebuilt == self.occurrence && threes == self.three_count && disjoint
    }

    pub(crate) fn position(&self, id: ClauseId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub(crate) fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub(crate) fn clause_at(&self, pos: usize) -> &[Literal] {
        &self.clauses[pos]
    }

    pub(crate) fn id_at(&self, pos: usize) -> ClauseId {
        self.ids[pos]
    }

    pub(crate) fn occurrence_positions(&self, lit: Literal) -> &BTreeSet<usize> {
        &self.occurrence[lit.code()]
    }
}

/// Clause storage the reductions run on: the solver state itself, or a
/// scratch overlay used while building a scope.
pub(crate) trait ClauseStore {
    /// Positions of live clauses holding `lit`, ascending.
    fn occurrences(&self, lit: Literal) -> Vec<usize>;
    fn literals(&self, pos: usize) -> &[Literal];
    fn clause_id(&self, pos: usize) -> ClauseId;
    fn replace(&mut self, pos: usize, lits: Vec<Literal>);
    fn record(&mut self, kind: EventKind, pos: usize, literals: Vec<Literal>);
}

impl ClauseStore for SolverState {
    fn occurrences(&self, lit: Literal) -> Vec<usize> {
        self.occurrence[lit.code()].iter().copied().collect()
    }

    fn literals(&self, pos: usize) -> &[Literal] {
        &self.clauses[pos]
    }

    fn clause_id(&self, pos: usize) -> ClauseId {
        self.ids[pos]
    }

    fn replace(&mut self, pos: usize, lits: Vec<Literal>) {
        let old = std::mem::replace(&mut self.clauses[pos], lits);
        for lit in &old {
            if !self.clauses[pos].contains(lit) {
                self.occurrence[lit.code()].remove(&pos);
            }
        }
        if old.len() == 3 {
            self.three_count -= 1;
        }
        if self.clauses[pos].len() == 3 {
            self.three_count += 1;
        }
    }

    fn record(&mut self, kind: EventKind, pos: usize, literals: Vec<Literal>) {
        self.events.push(ReductionEvent {
            round: self.round,
            kind,
            clause: Some(self.ids[pos]),
            literals,
        });
    }
}

pub(crate) fn reduce_true<S: ClauseStore>(s: &mut S, z: Literal) -> Vec<(Literal, ClauseId)> {
    let mut emerged = Vec::new();
    reduce_true_each(s, z, |_, lit, id| emerged.push((lit, id)));
    emerged
}

/// `reduce_true`, handing each clause's emerged negations to `on_emerged`
/// right after that clause is reduced.
pub(crate) fn reduce_true_each<S: ClauseStore>(
    s: &mut S,
    z: Literal,
    mut on_emerged: impl FnMut(&mut S, Literal, ClauseId),
) {
    for pos in s.occurrences(z) {
        let id = s.clause_id(pos);
        let negations: Vec<Literal> = s
            .literals(pos)
            .iter()
            .filter(|&&l| l != z)
            .map(|l| l.negate())
            .collect();
        let mut logged = vec![z];
        logged.extend(&negations);
        s.replace(pos, Vec::new());
        s.record(EventKind::ClauseToConjunction, pos, logged);
        for lit in negations {
            on_emerged(s, lit, id);
        }
    }
}

pub(crate) fn reduce_false<S: ClauseStore>(
    s: &mut S,
    z: Literal,
) -> Result<Vec<(Literal, ClauseId)>, ClauseId> {
    let mut units = Vec::new();
    reduce_false_each(s, z, |_, lit, id| units.push((lit, id)))?;
    Ok(units)
}

/// `reduce_false`, handing each emerged unit to `on_unit` as soon as its
/// clause is reduced.
pub(crate) fn reduce_false_each<S: ClauseStore>(
    s: &mut S,
    z: Literal,
    mut on_unit: impl FnMut(&mut S, Literal, ClauseId),
) -> Result<(), ClauseId> {
    for pos in s.occurrences(z) {
        let rest: Vec<Literal> = s
            .literals(pos)
            .iter()
            .copied()
            .filter(|&l| l != z)
            .collect();
        match rest.len() {
            0 => {
                s.replace(pos, rest);
                return Err(s.clause_id(pos));
            }
            1 => {
                let unit = rest[0];
                s.replace(pos, Vec::new());
                s.record(EventKind::TwoToUnit, pos, vec![z, unit]);
                let id = s.clause_id(pos);
                on_unit(s, unit, id);
            }
            _ => {
                s.replace(pos, rest);
                s.record(EventKind::ThreeToTwo, pos, vec![z]);
            }
        }
    }
    Ok(())
}

//! The scan loop: discard necessary opposites, check every open literal,
//! discard the incompatible ones, and stop on a contradiction, a covering
//! scope, or when every variable is decided.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{
    convert_special, Assignment, ClauseId, ConversionError, ForcedLiteral, Formula, Literal, Var,
};
use crate::reduction::{init_state, DiscardOutcome, ReductionEvent, SolverState};
use crate::scope::{check_literal, ScopeReport, ScopeVerdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOrder {
    /// Ascending variable, positive polarity first.
    #[default]
    Fixed,
    /// A seeded permutation of all literals, fixed for the run.
    Random(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Check literals in order and act on the first verdict that is not `NotYet`.
    #[default]
    Sequential,
    /// Check every open literal against the same state, then act on the
    /// lowest-ordered verdict that is not `NotYet`. Same outcome as
    /// `Sequential`, but re-checks literals already found incompatible.
    Snapshot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanOptions {
    pub order: CheckOrder,
    pub mode: CheckMode,
    /// Run snapshot checks on the rayon pool. Implies `Snapshot`.
    pub parallel: bool,
    /// Keep every scope report in the verdict.
    pub record_scopes: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Sat,
    Unsat,
    /// The procedure produced an assignment that does not satisfy the formula.
    ClaimedSatUnverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Verification {
    Passed,
    Failed { clauses: Vec<ClauseId> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    /// The opposite literal is a conjunct.
    Necessary,
    Incompatible,
    /// Every open literal was `NotYet`; a polarity was picked to finish the run.
    Completion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscardRecord {
    pub round: u32,
    pub literal: Literal,
    pub reason: DiscardReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause: Option<ClauseId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    /// Conversion of special clauses forced both polarities of `var`.
    Conversion {
        var: Var,
    },
    /// N held both polarities of `var` before any discard.
    Conjuncts {
        var: Var,
    },
    Discard {
        literal: Literal,
        var: Var,
    },
    Covers {
        literal: Literal,
    },
    AllDecided,
    /// A discard failed after a completion step; the assignment is read from
    /// the last state before completion.
    CompletionContradiction {
        var: Var,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityViolation {
    pub literal: Literal,
    pub incompatible_round: u32,
    pub later_round: u32,
    pub later_verdict: ScopeVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub assignment: Option<Assignment>,
    pub rounds: u32,
    pub discards: Vec<DiscardRecord>,
    pub scopes: Vec<ScopeReport>,
    pub verification: Option<Verification>,
    pub termination: Termination,
    pub completion_used: bool,
    pub forced: Vec<ForcedLiteral>,
    pub checks: usize,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    #[serde(skip)]
    pub trace: Vec<ReductionEvent>,
}

impl Verdict {
    /// JSON document; `trace` adds the reduction event log.
    pub fn to_json(&self, trace: bool) -> String {
        serde_json::to_string_pretty(&self.to_value(trace)).expect("value prints")
    }

    pub fn to_value(&self, trace: bool) -> serde_json::Value {
        let mut value = serde_json::to_value(self).expect("verdict serializes");
        if trace {
            value["trace"] = serde_json::to_value(&self.trace).expect("events serialize");
        }
        value
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScanError {
    #[error("{discards} discards exceed the cap of {cap}")]
    RoundCap { discards: usize, cap: usize },
}

/// Assignment read off the state: singleton polarities, false elsewhere.
pub fn extract_assignment(state: &SolverState) -> Assignment {
    let mut a = Assignment::unassigned(state.n_vars());
    for v in 1..=state.n_vars() {
        if let [only] = state.live_literals(v).as_slice() {
            a.set(v, only.is_positive());
        }
    }
    a.fill(false);
    a
}

fn check_order(n_vars: u32, order: CheckOrder) -> Vec<Literal> {
    let mut lits: Vec<Literal> = (1..=n_vars)
        .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
        .collect();
    if let CheckOrder::Random(seed) = order {
        lits.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    lits
}

struct Monotonicity {
    first_incompatible: BTreeMap<Literal, u32>,
    violations: Vec<MonotonicityViolation>,
}

impl Monotonicity {
    fn observe(&mut self, report: &ScopeReport) {
        match (
            &report.verdict,
            self.first_incompatible.get(&report.literal),
        ) {
            (ScopeVerdict::Incompatible, None) => {
                self.first_incompatible.insert(report.literal, report.round);
            }
            (ScopeVerdict::Incompatible, Some(_)) => {}
            (other, Some(&round)) => self.violations.push(MonotonicityViolation {
                literal: report.literal,
                incompatible_round: round,
                later_round: report.round,
                later_verdict: other.clone(),
            }),
            (_, None) => {}
        }
    }
}

struct Run<'a> {
    original: &'a Formula,
    opts: ScanOptions,
    discards: Vec<DiscardRecord>,
    scopes: Vec<ScopeReport>,
    checks: usize,
    monotonicity: Monotonicity,
    forced: Vec<ForcedLiteral>,
    /// States at which a completion step was taken, oldest first.
    before_completion: Vec<SolverState>,
}

impl Run<'_> {
    fn finish(
        self,
        state: Option<&SolverState>,
        termination: Termination,
        assignment: Option<Assignment>,
    ) -> Verdict {
        let (status, verification) = match &assignment {
            None => (Status::Unsat, None),
            Some(a) => match self.original.violated_clauses(a) {
                Ok(v) if v.is_empty() => (Status::Sat, Some(Verification::Passed)),
                Ok(v) => (
                    Status::ClaimedSatUnverified,
                    Some(Verification::Failed { clauses: v }),
                ),
                Err(_) => (
                    Status::ClaimedSatUnverified,
                    Some(Verification::Failed {
                        clauses: Vec::new(),
                    }),
                ),
            },
        };
        Verdict {
            status,
            assignment,
            rounds: state.map_or(1, SolverState::round),
            discards: self.discards,
            scopes: self.scopes,
            verification,
            termination,
            completion_used: !self.before_completion.is_empty(),
            forced: self.forced,
            checks: self.checks,
            monotonicity_violations: self.monotonicity.violations,
            trace: state.map(|s| s.events().to_vec()).unwrap_or_default(),
        }
    }

    /// Outcome of a failed discard: Unsat, unless a completion guess came first.
    fn contradiction(self, state: &SolverState, literal: Literal, var: Var) -> Verdict {
        if self.before_completion.is_empty() {
            return self.finish(Some(state), Termination::Discard { literal, var }, None);
        }
        let candidates: Vec<Assignment> = self
            .before_completion
            .iter()
            .rev()
            .map(extract_assignment)
            .collect();
        let chosen = candidates
            .iter()
            .find(|a| self.original.evaluate_exactly1(a).unwrap_or(false))
            .unwrap_or(candidates.last().expect("at least one completion"))
            .clone();
        self.finish(
            Some(state),
            Termination::CompletionContradiction { var },
            Some(chosen),
        )
    }

    fn evaluate(&mut self, state: &SolverState, candidates: &[Literal]) -> Option<ScopeReport> {
        let snapshot = self.opts.parallel || self.opts.mode == CheckMode::Snapshot;
        let reports: Vec<ScopeReport> = if !snapshot {
            let mut out = Vec::new();
            for &z in candidates {
                let r = check_literal(state, z);
                let stop = r.verdict != ScopeVerdict::NotYet;
                out.push(r);
                if stop {
                    break;
                }
            }
            out
        } else if self.opts.parallel {
            candidates
                .par_iter()
                .map(|&z| check_literal(state, z))
                .collect()
        } else {
            candidates
                .iter()
                .map(|&z| check_literal(state, z))
                .collect()
        };
        self.checks += reports.len();
        for r in &reports {
            self.monotonicity.observe(r);
        }
        let decisive = reports
            .iter()
            .find(|r| r.verdict != ScopeVerdict::NotYet)
            .cloned();
        if self.opts.record_scopes {
            self.scopes.extend(reports);
        }
        decisive
    }
}

/// Runs the procedure on `f`, converting special clauses first.
pub fn scan(f: &Formula, opts: &ScanOptions) -> Result<Verdict, ScanError> {
    let mut run = Run {
        original: f,
        opts: *opts,
        discards: Vec::new(),
        scopes: Vec::new(),
        checks: 0,
        monotonicity: Monotonicity {
            first_incompatible: BTreeMap::new(),
            violations: Vec::new(),
        },
        forced: Vec::new(),
        before_completion: Vec::new(),
    };
    let conversion = match convert_special(f) {
        Ok(c) => c,
        Err(ConversionError::Contradiction { var, forced }) => {
            run.forced = forced;
            return Ok(run.finish(None, Termination::Conversion { var }, None));
        }
    };
    run.forced = conversion.forced.clone();
    let mut state = init_state(&conversion.formula).expect("conversion leaves a general formula");
    for fl in &conversion.forced {
        state.add_conjunct(fl.literal, Some(fl.clause));
    }
    if let Some(var) = state.contradiction() {
        return Ok(run.finish(Some(&state), Termination::Conjuncts { var }, None));
    }

    let order = check_order(f.n_vars(), opts.order);
    let n = f.n_vars() as usize;
    let cap = 2 * n * n;

    loop {
        if run.discards.len() > cap {
            return Err(ScanError::RoundCap {
                discards: run.discards.len(),
                cap,
            });
        }
        if let Some(&(lit, clause)) = state.necessary_literals().first() {
            let z = lit.negate();
            run.discards.push(DiscardRecord {
                round: state.round(),
                literal: z,
                reason: DiscardReason::Necessary,
                clause,
            });
            if let DiscardOutcome::Unsat { var } = state.discard(z) {
                return Ok(run.contradiction(&state, z, var));
            }
            continue;
        }

        let candidates: Vec<Literal> = order
            .iter()
            .copied()
            .filter(|l| state.is_open(l.var()))
            .collect();
        if candidates.is_empty() {
            let a = extract_assignment(&state);
            return Ok(run.finish(Some(&state), Termination::AllDecided, Some(a)));
        }

        let (z, reason) = match run.evaluate(&state, &candidates) {
            Some(ScopeReport {
                verdict: ScopeVerdict::CoversSatisfiable(model),
                literal,
                ..
            }) => {
                return Ok(run.finish(Some(&state), Termination::Covers { literal }, Some(model)));
            }
            Some(report) => (report.literal, DiscardReason::Incompatible),
            None => {
                // every open literal is `NotYet`: keep the first one that
                // still occurs somewhere and drop its opposite
                let keep = candidates
                    .iter()
                    .copied()
                    .find(|l| {
                        !state.occurrences(*l).is_empty()
                            || !state.occurrences(l.negate()).is_empty()
                    })
                    .unwrap_or(candidates[0]);
                run.before_completion.push(state.clone());
                (keep.negate(), DiscardReason::Completion)
            }
        };
        run.discards.push(DiscardRecord {
            round: state.round(),
            literal: z,
            reason,
            clause: None,
        });
        if let DiscardOutcome::Unsat { var } = state.discard(z) {
            return Ok(run.contradiction(&state, z, var));
        }
    }
}

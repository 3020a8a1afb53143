//! Exhaustive target reachability for tiny nets.

use std::collections::HashSet;

use thiserror::Error;

use super::{FiringSequence, Marking, Net, TransitionId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReachOptions {
    /// Nets with more transitions are refused outright.
    pub max_transitions: usize,
    /// Distinct markings the search may visit.
    pub max_states: usize,
}

impl Default for ReachOptions {
    fn default() -> Self {
        ReachOptions {
            max_transitions: 64,
            max_states: 1_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReachError {
    #[error("net has {found} transitions, the search is limited to {limit}")]
    TooManyTransitions { found: usize, limit: usize },
    #[error("state budget of {0} markings exhausted")]
    StateBudget(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachStats {
    pub reachable: bool,
    /// Firing sequence from the initial marking to the target, if reachable.
    pub witness: Option<FiringSequence>,
    pub states: usize,
}

/// True iff some run reaches a marking containing `target` in which every
/// non-sink place is empty.
pub fn target_reachable(
    net: &Net,
    target: &Marking,
    opts: &ReachOptions,
) -> Result<bool, ReachError> {
    explore_target(net, target, opts).map(|s| s.reachable)
}

/// Depth-first search over markings, memoizing visited ones.
pub fn explore_target(
    net: &Net,
    target: &Marking,
    opts: &ReachOptions,
) -> Result<ReachStats, ReachError> {
    let n_t = net.transitions().len();
    if n_t > opts.max_transitions {
        return Err(ReachError::TooManyTransitions {
            found: n_t,
            limit: opts.max_transitions,
        });
    }
    let is_target = |m: &Marking| m.is_superset(target) && !net.non_sink_marked(m);

    let start = net.initial_marking().clone();
    let mut visited: HashSet<Marking> = HashSet::new();
    visited.insert(start.clone());
    if is_target(&start) {
        return Ok(ReachStats {
            reachable: true,
            witness: Some(Vec::new()),
            states: 1,
        });
    }

    // each frame: marking, next transition to try, transition that led here
    let mut stack: Vec<(Marking, usize, Option<TransitionId>)> = vec![(start, 0, None)];
    while let Some(frame) = stack.last_mut() {
        let Some(t) = (frame.1..n_t)
            .map(TransitionId)
            .find(|&t| net.is_enabled(&frame.0, t))
        else {
            stack.pop();
            continue;
        };
        frame.1 = t.0 + 1;
        let (next, _) = net.fire_unchecked(&frame.0, t);
        if !visited.insert(next.clone()) {
            continue;
        }
        if visited.len() > opts.max_states {
            return Err(ReachError::StateBudget(opts.max_states));
        }
        if is_target(&next) {
            let mut witness: FiringSequence = stack.iter().filter_map(|f| f.2).collect();
            witness.push(t);
            return Ok(ReachStats {
                reachable: true,
                witness: Some(witness),
                states: visited.len(),
            });
        }
        stack.push((next, 0, Some(t)));
    }
    Ok(ReachStats {
        reachable: false,
        witness: None,
        states: visited.len(),
    })
}

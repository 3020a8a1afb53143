//! Seeded random formulas.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Literal, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// 3-literal clauses over distinct variables.
    Uniform3,
    /// 1, 2 and 3 literals weighted 1:2:7.
    Mixed,
    /// 3-literal clauses, each sharing a variable with the previous one.
    Adversarial,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Uniform3 => "uniform3",
            Profile::Mixed => "mixed",
            Profile::Adversarial => "adversarial",
        }
    }

    fn sizes(self, n: u32) -> Vec<usize> {
        match self {
            Profile::Uniform3 => vec![3],
            Profile::Mixed => (1..=3).filter(|&k| k <= n as usize).collect(),
            Profile::Adversarial => vec![3.min(n as usize)],
        }
    }

    /// Number of distinct clauses the profile can produce over `n` variables.
    pub fn capacity(self, n: u32) -> u128 {
        self.sizes(n)
            .into_iter()
            .map(|k| binomial(n as u128, k as u128) << k)
            .sum()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("at least one variable is required")]
    NoVariables,
    #[error("profile {profile} needs at least 3 variables, got {n_vars}")]
    TooFewVariables { profile: &'static str, n_vars: u32 },
    #[error("{m} distinct clauses requested, profile {profile} allows {capacity} over {n_vars} variables")]
    TooManyClauses {
        m: usize,
        capacity: u128,
        n_vars: u32,
        profile: &'static str,
    },
    #[error("could not place clause {index} after {attempts} attempts")]
    Exhausted { index: usize, attempts: usize },
}

/// Reproducible formula with `m` distinct clauses. Every clause has distinct
/// variables, so the result is always general.
pub fn generate_random(
    n: u32,
    m: usize,
    seed: u64,
    profile: Profile,
) -> Result<Formula, GenerateError> {
    if n == 0 {
        return Err(GenerateError::NoVariables);
    }
    if profile == Profile::Uniform3 && n < 3 {
        return Err(GenerateError::TooFewVariables {
            profile: profile.name(),
            n_vars: n,
        });
    }
    let capacity = profile.capacity(n);
    if m as u128 > capacity {
        return Err(GenerateError::TooManyClauses {
            m,
            capacity,
            n_vars: n,
            profile: profile.name(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: BTreeSet<Vec<Literal>> = BTreeSet::new();
    let mut clauses: Vec<Vec<Literal>> = Vec::with_capacity(m);
    let attempts = 1000 + 50 * m;
    for index in 0..m {
        let previous = clauses.last().cloned();
        let mut placed = false;
        for _ in 0..attempts {
            let clause = match profile {
                Profile::Uniform3 => random_clause(&mut rng, n, 3, None),
                Profile::Mixed => {
                    let size = match rng.gen_range(0..10) {
                        0 => 1,
                        1..=2 => 2,
                        _ => 3,
                    };
                    random_clause(&mut rng, n, size.min(n as usize), None)
                }
                Profile::Adversarial => {
                    let shared = previous
                        .as_ref()
                        .map(|p| p[rng.gen_range(0..p.len())].var());
                    random_clause(&mut rng, n, 3.min(n as usize), shared)
                }
            };
            let mut key = clause.clone();
            key.sort();
            if seen.insert(key) {
                clauses.push(clause);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(GenerateError::Exhausted {
                index: index + 1,
                attempts,
            });
        }
    }
    Ok(Formula::new(n, clauses).expect("generated clauses are valid"))
}

fn random_clause(rng: &mut ChaCha8Rng, n: u32, size: usize, include: Option<Var>) -> Vec<Literal> {
    let vars: Vec<Var> = match include {
        Some(v) => {
            let mut others: Vec<Var> = sample(rng, n as usize - 1, size - 1)
                .into_iter()
                .map(|i| {
                    let w = i as Var + 1;
                    if w >= v {
                        w + 1
                    } else {
                        w
                    }
                })
                .collect();
            others.insert(rng.gen_range(0..size), v);
            others
        }
        None => sample(rng, n as usize, size)
            .into_iter()
            .map(|i| i as Var + 1)
            .collect(),
    };
    vars.into_iter()
        .map(|v| Literal::new(v, rng.gen_bool(0.5)))
        .collect()
}

//! Exhaustive formula corpora: every multiset of clauses up to a size.

use crate::formula::{Formula, Literal, Var};

/// Every clause of 1 to 3 literals over distinct variables of `1..=n`,
/// shortest first.
pub fn clause_types(n: u32) -> Vec<Vec<Literal>> {
    let mut out = Vec::new();
    for size in 1..=3usize.min(n as usize) {
        for vars in combinations(n, size) {
            for signs in 0..1u32 << size {
                out.push(
                    vars.iter()
                        .enumerate()
                        .map(|(i, &v)| Literal::new(v, signs & (1 << i) == 0))
                        .collect(),
                );
            }
        }
    }
    out
}

/// Clauses holding both polarities of some variable: `{x, ¬x}` and
/// `{z, x, ¬x}` with `z` over another variable.
fn special_types(n: u32) -> Vec<Vec<Literal>> {
    let mut out = Vec::new();
    for x in 1..=n {
        out.push(vec![Literal::pos(x), Literal::neg(x)]);
        for z in (1..=n).filter(|&z| z != x) {
            for positive in [true, false] {
                out.push(vec![
                    Literal::new(z, positive),
                    Literal::pos(x),
                    Literal::neg(x),
                ]);
            }
        }
    }
    out
}

fn combinations(n: u32, k: usize) -> Vec<Vec<Var>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: Var, n: Var, k: usize, current: &mut Vec<Var>, out: &mut Vec<Vec<Var>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in start..=n {
            current.push(v);
            go(v + 1, n, k, current, out);
            current.pop();
        }
    }
    go(1, n, k, &mut current, &mut out);
    out
}

/// Nondecreasing index sequences of length `m` over `0..types`.
fn multisets(types: usize, m: usize, mut visit: impl FnMut(&[usize])) {
    if m == 0 {
        visit(&[]);
        return;
    }
    if types == 0 {
        return;
    }
    let mut idx = vec![0; m];
    loop {
        visit(&idx);
        let Some(pos) = (0..m).rev().find(|&i| idx[i] + 1 < types) else {
            return;
        };
        let next = idx[pos] + 1;
        for slot in &mut idx[pos..] {
            *slot = next;
        }
    }
}

/// Every general formula with `1 ≤ n ≤ n_max` variables and `0 ≤ m ≤ m_max`
/// clauses, as multisets of clauses.
pub fn exhaustive_general(n_max: u32, m_max: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let types = clause_types(n);
        for m in 0..=m_max {
            multisets(types.len(), m, |idx| {
                let clauses = idx.iter().map(|&i| types[i].clone()).collect();
                out.push(Formula::new(n, clauses).expect("clause types are valid"));
            });
        }
    }
    out
}

/// Every formula over `n` variables with `1 ≤ m ≤ m_max` clauses of which at
/// least one holds both polarities of a variable.
pub fn exhaustive_special(n: u32, m_max: usize) -> Vec<Formula> {
    let general = clause_types(n);
    let special = special_types(n);
    let g = general.len();
    let types: Vec<Vec<Literal>> = general.into_iter().chain(special).collect();
    let mut out = Vec::new();
    for m in 1..=m_max {
        multisets(types.len(), m, |idx| {
            // sequences are nondecreasing, so the last index is the largest
            if idx[m - 1] >= g {
                let clauses = idx.iter().map(|&i| types[i].clone()).collect();
                out.push(Formula::new(n, clauses).expect("clause types are valid"));
            }
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{classify, Classification};

    #[test]
    fn clause_type_counts() {
        assert_eq!(clause_types(1).len(), 2);
        assert_eq!(clause_types(2).len(), 8);
        assert_eq!(clause_types(3).len(), 26);
        assert_eq!(special_types(4).len(), 4 + 4 * 3 * 2);
    }

    #[test]
    fn multiset_counts() {
        let mut count = 0;
        multisets(26, 4, |_| count += 1);
        // C(26 + 4 - 1, 4)
        assert_eq!(count, 23751);
        let mut empty = 0;
        multisets(5, 0, |idx| {
            assert!(idx.is_empty());
            empty += 1
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn small_general_corpus() {
        let corpus = exhaustive_general(2, 2);
        // n = 1: 1 + 2 + 3, n = 2: 1 + 8 + 36
        assert_eq!(corpus.len(), 6 + 45);
        assert!(corpus
            .iter()
            .all(|f| classify(f) == Classification::General));
    }

    #[test]
    fn special_corpus_is_special() {
        let corpus = exhaustive_special(3, 2);
        assert!(!corpus.is_empty());
        assert!(corpus
            .iter()
            .all(|f| matches!(classify(f), Classification::Special(_))));
    }
}

#![allow(dead_code)]

use proptest::prelude::*;
use x1scan::formula::{Assignment, Formula, Literal};

/// Clauses over distinct variables of `1..=n`.
pub fn general_formula(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = Formula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let clause =
            proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=3.min(n as usize))
                .prop_flat_map(|vars| {
                    let k = vars.len();
                    (Just(vars), proptest::collection::vec(any::<bool>(), k))
                })
                .prop_shuffle_pairs();
        proptest::collection::vec(clause, 0..=max_clauses)
            .prop_map(move |clauses| Formula::new(n, clauses).expect("valid clauses"))
    })
}

/// Like `general_formula`, but some clauses hold both polarities of a variable.
pub fn any_formula(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = Formula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let general =
            proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=3.min(n as usize))
                .prop_flat_map(|vars| {
                    let k = vars.len();
                    (Just(vars), proptest::collection::vec(any::<bool>(), k))
                })
                .prop_shuffle_pairs();
        let special = (1..=n, 0..=n, any::<bool>()).prop_map(|(x, z, pos)| {
            let mut c = vec![Literal::pos(x), Literal::neg(x)];
            if z != 0 && z != x {
                c.push(Literal::new(z, pos));
            }
            c
        });
        let clause = prop_oneof![4 => general, 1 => special];
        proptest::collection::vec(clause, 0..=max_clauses)
            .prop_map(move |clauses| Formula::new(n, clauses).expect("valid clauses"))
    })
}

trait ShufflePairs {
    fn prop_shuffle_pairs(self) -> BoxedStrategy<Vec<Literal>>;
}

impl<S> ShufflePairs for S
where
    S: Strategy<Value = (Vec<u32>, Vec<bool>)> + 'static,
{
    fn prop_shuffle_pairs(self) -> BoxedStrategy<Vec<Literal>> {
        self.prop_map(|(vars, signs)| {
            vars.into_iter()
                .zip(signs)
                .map(|(v, s)| Literal::new(v, s))
                .collect::<Vec<_>>()
        })
        .prop_shuffle()
        .boxed()
    }
}

/// Every total assignment over `n` variables.
pub fn assignments(n: u32) -> impl Iterator<Item = Assignment> {
    (0..1u32 << n).map(move |w| {
        Assignment::from_values(&(0..n).map(|i| w & (1 << i) != 0).collect::<Vec<_>>())
    })
}

pub fn worked_formula() -> Formula {
    Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]])
}

//! Units plus exactly-one pairs, decided by union-find with parity.
//!
//! Nodes are the variables plus one node fixed to true. An edge carries the
//! parity of the two values it joins. A unit `z` ties `var(z)` to the true
//! node; a pair `{a, b}` with "exactly one of a, b" means `a ⊕ b = 1`, which
//! on variable values is parity `1 ⊕ neg(a) ⊕ neg(b)`. This is the literal
//! graph with each `x`/`¬x` pair folded into one node.

use serde::Serialize;

use crate::formula::{Assignment, Literal, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XorConstraint {
    Unit(Literal),
    Pair(Literal, Literal),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XorOutcome {
    /// A model assigning every mentioned variable.
    Sat(Assignment),
    /// The constraint that closed a contradictory cycle.
    Unsat { witness: XorConstraint },
}

impl XorOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, XorOutcome::Sat(_))
    }
}

const TRUE_NODE: usize = 0;

struct ParityUnionFind {
    parent: Vec<usize>,
    /// Parity between a node and its parent.
    parity: Vec<u8>,
    rank: Vec<u8>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![0; n],
            rank: vec![0; n],
        }
    }

    /// Root of `x` and the parity from `x` to it.
    fn find(&mut self, x: usize) -> (usize, u8) {
        let mut path = Vec::new();
        let mut node = x;
        while self.parent[node] != node {
            path.push(node);
            node = self.parent[node];
        }
        let root = node;
        // compress from the node nearest the root outwards
        let mut acc = 0;
        for &n in path.iter().rev() {
            acc ^= self.parity[n];
            self.parity[n] = acc;
            self.parent[n] = root;
        }
        (root, if path.is_empty() { 0 } else { self.parity[x] })
    }

    /// Requires `value(a) ⊕ value(b) = p`. False on contradiction.
    fn union(&mut self, a: usize, b: usize, p: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == p;
        }
        let link = pa ^ pb ^ p;
        let (child, root) = if self.rank[ra] < self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child] = root;
        self.parity[child] = link;
        if self.rank[ra] == self.rank[rb] {
            self.rank[root] += 1;
        }
        true
    }
}

/// Decides units ∧ pairs over variables `1..=n_vars`.
pub fn solve_xor(n_vars: u32, units: &[Literal], pairs: &[[Literal; 2]]) -> XorOutcome {
    let mut uf = ParityUnionFind::new(n_vars as usize + 1);
    let mut mentioned = vec![false; n_vars as usize + 1];
    for &u in units {
        mentioned[u.var() as usize] = true;
        // value(var) ⊕ value(true) = 0 for a positive unit
        if !uf.union(u.var() as usize, TRUE_NODE, u8::from(!u.is_positive())) {
            return XorOutcome::Unsat {
                witness: XorConstraint::Unit(u),
            };
        }
    }
    for &[a, b] in pairs {
        mentioned[a.var() as usize] = true;
        mentioned[b.var() as usize] = true;
        let p = 1 ^ u8::from(!a.is_positive()) ^ u8::from(!b.is_positive());
        if !uf.union(a.var() as usize, b.var() as usize, p) {
            return XorOutcome::Unsat {
                witness: XorConstraint::Pair(a, b),
            };
        }
    }
    let (true_root, true_parity) = uf.find(TRUE_NODE);
    let mut model = Assignment::unassigned(n_vars);
    for v in (1..=n_vars as usize).filter(|&v| mentioned[v]) {
        let (root, p) = uf.find(v);
        // components not tied to the true node put their root at false
        let root_value = if root == true_root {
            1 ^ true_parity
        } else {
            0
        };
        model.set(v as Var, p ^ root_value == 1);
    }
    XorOutcome::Sat(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: i64) -> Literal {
        Literal::from_dimacs(v).unwrap()
    }

    #[test]
    fn unit_forces_pair_partner() {
        let XorOutcome::Sat(m) = solve_xor(2, &[l(1)], &[[l(1), l(2)]]) else {
            panic!("sat expected")
        };
        assert_eq!(m.get(1), Some(true));
        assert_eq!(m.get(2), Some(false));
    }

    #[test]
    fn odd_triangle_is_unsat() {
        let out = solve_xor(3, &[], &[[l(1), l(2)], [l(2), l(3)], [l(1), l(3)]]);
        assert_eq!(
            out,
            XorOutcome::Unsat {
                witness: XorConstraint::Pair(l(1), l(3))
            }
        );
    }

    #[test]
    fn worked_scope_not_x2() {
        let out = solve_xor(3, &[l(-2), l(-1), l(-3)], &[[l(1), l(-3)]]);
        let XorOutcome::Sat(m) = out else {
            panic!("sat expected")
        };
        assert_eq!(m, Assignment::from_values(&[false, false, false]));
    }

    #[test]
    fn contradictory_units() {
        let out = solve_xor(1, &[l(1), l(-1)], &[]);
        assert_eq!(
            out,
            XorOutcome::Unsat {
                witness: XorConstraint::Unit(l(-1))
            }
        );
    }

    #[test]
    fn negative_pair_parity() {
        // exactly one of ¬x1, ¬x2 means x1 ≠ x2
        let XorOutcome::Sat(m) = solve_xor(2, &[l(-1)], &[[l(-1), l(-2)]]) else {
            panic!()
        };
        assert_eq!(m.get(1), Some(false));
        assert_eq!(m.get(2), Some(true));
        // exactly one of x1, ¬x2 means x1 = x2
        let XorOutcome::Sat(m) = solve_xor(2, &[l(2)], &[[l(1), l(-2)]]) else {
            panic!()
        };
        assert_eq!(m.get(1), Some(true));
    }

    #[test]
    fn unmentioned_vars_stay_unassigned() {
        let XorOutcome::Sat(m) = solve_xor(3, &[l(2)], &[]) else {
            panic!()
        };
        assert_eq!(m.get(1), None);
        assert_eq!(m.get(2), Some(true));
    }
}

//! The two nets of a formula.
//!
//! Node labels (ASCII):
//!
//! | label        | node                                              |
//! |--------------|---------------------------------------------------|
//! | `ell{i}`     | literal place ℓ_i                                 |
//! | `x{i}`/`~x{i}` | variable transitions                            |
//! | `c{k}`       | clause guard place (forward net)                  |
//! | `cbar{k}`    | clause place c̄_k                                  |
//! | `x{i}_{k}`/`~x{i}_{k}` | occurrence transition of a literal in clause k |
//! | `p{i}_{k}`/`pbar{i}_{k}` | occurrence buffer place                 |
//! | `pbreve{i}`  | variable guard place (inverse net)                |
//! | `Phi_t`      | collector transition                              |
//! | `top`        | sink place ⊤̄                                      |

use crate::formula::{ClauseId, Formula, Literal};

use super::{Level, Net, NetBuilder, PlaceId};

pub fn occurrence_label(lit: Literal, clause: ClauseId) -> String {
    let sign = if lit.is_positive() { "" } else { "~" };
    format!("{sign}x{}_{clause}", lit.var())
}

/// Label of the buffer place between a variable transition and an occurrence.
pub fn place_label(lit: Literal, clause: ClauseId) -> String {
    let stem = if lit.is_positive() { "p" } else { "pbar" };
    format!("{stem}{}_{clause}", lit.var())
}

fn variable_label(lit: Literal) -> String {
    let sign = if lit.is_positive() { "" } else { "~" };
    format!("{sign}x{}", lit.var())
}

/// Occurrence buffers grouped by literal code, in clause order.
fn buffers_by_literal(f: &Formula, buffers: &[(Literal, PlaceId)]) -> Vec<Vec<PlaceId>> {
    let mut by_lit = vec![Vec::new(); 2 * f.n_vars() as usize];
    for &(lit, p) in buffers {
        by_lit[lit.code()].push(p);
    }
    by_lit
}

/// The guessing net: each ℓ_i picks `x_i` or `¬x_i`, each occurrence
/// consumes its clause guard `c_k` so at most one literal per clause can
/// mark `c̄_k`, and the collector needs every `c̄_k`.
///
/// Expects a general formula.
pub fn build_forward_net(f: &Formula) -> Net {
    let mut b = NetBuilder::new();
    let n = f.n_vars();

    let ell: Vec<PlaceId> = (1..=n)
        .map(|i| b.place(format!("ell{i}"), Level::At(0), true))
        .collect();

    let mut guards = Vec::with_capacity(f.len());
    let mut buffers: Vec<(Literal, PlaceId)> = Vec::new();
    let mut occurrences: Vec<(ClauseId, Literal, PlaceId)> = Vec::new();
    for clause in f.clauses() {
        guards.push(b.place(format!("c{}", clause.id), Level::At(1), true));
        for &lit in &clause.literals {
            let p = b.place(place_label(lit, clause.id), Level::At(1), false);
            buffers.push((lit, p));
            occurrences.push((clause.id, lit, p));
        }
    }
    let clause_places: Vec<PlaceId> = f
        .clauses()
        .iter()
        .map(|c| b.place(format!("cbar{}", c.id), Level::At(2), false))
        .collect();
    let top = b.place("top", Level::Sink, false);

    let by_lit = buffers_by_literal(f, &buffers);
    for i in 1..=n {
        for lit in [Literal::pos(i), Literal::neg(i)] {
            b.transition(
                variable_label(lit),
                0,
                vec![ell[i as usize - 1]],
                by_lit[lit.code()].clone(),
            );
        }
    }
    let mut occ = occurrences.into_iter();
    for (k, clause) in f.clauses().iter().enumerate() {
        for _ in &clause.literals {
            let (id, lit, buffer) = occ.next().expect("one entry per occurrence");
            b.transition(
                occurrence_label(lit, id),
                1,
                vec![buffer, guards[k]],
                vec![clause_places[k]],
            );
        }
    }
    b.transition("Phi_t", 2, clause_places, vec![top]);

    b.build().expect("forward construction is leveled")
}

/// The inverse net: marked clause places fire one occurrence each, a
/// variable transition needs every occurrence of its literal plus the shared
/// guard `p̆_i`, and the collector needs every ℓ_i.
///
/// Expects a general formula.
pub fn build_inverse_net(f: &Formula) -> Net {
    let mut b = NetBuilder::new();
    let n = f.n_vars();

    let clause_places: Vec<PlaceId> = f
        .clauses()
        .iter()
        .map(|c| b.place(format!("cbar{}", c.id), Level::At(0), true))
        .collect();
    let mut buffers: Vec<(Literal, PlaceId)> = Vec::new();
    let mut occurrences: Vec<(ClauseId, Literal, PlaceId, usize)> = Vec::new();
    for (k, clause) in f.clauses().iter().enumerate() {
        for &lit in &clause.literals {
            let p = b.place(place_label(lit, clause.id), Level::At(1), false);
            buffers.push((lit, p));
            occurrences.push((clause.id, lit, p, k));
        }
    }
    let guards: Vec<PlaceId> = (1..=n)
        .map(|i| b.place(format!("pbreve{i}"), Level::At(1), true))
        .collect();
    let ell: Vec<PlaceId> = (1..=n)
        .map(|i| b.place(format!("ell{i}"), Level::At(2), false))
        .collect();
    let top = b.place("top", Level::Sink, false);

    for (id, lit, buffer, k) in occurrences {
        b.transition(
            occurrence_label(lit, id),
            0,
            vec![clause_places[k]],
            vec![buffer],
        );
    }
    let by_lit = buffers_by_literal(f, &buffers);
    for i in 1..=n {
        for lit in [Literal::pos(i), Literal::neg(i)] {
            let mut inputs = vec![guards[i as usize - 1]];
            inputs.extend(&by_lit[lit.code()]);
            b.transition(variable_label(lit), 1, inputs, vec![ell[i as usize - 1]]);
        }
    }
    b.transition("Phi_t", 2, ell, vec![top]);

    b.build().expect("inverse construction is leveled")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{Level, TransitionId};

    fn worked() -> Formula {
        Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]])
    }

    fn arcs(net: &Net) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for t in net.transitions() {
            for p in &t.inputs {
                out.push((net.place(*p).label.clone(), t.label.clone()));
            }
            for p in &t.outputs {
                out.push((t.label.clone(), net.place(*p).label.clone()));
            }
        }
        out.sort();
        out
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> = list
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn forward_net_matches_the_reference_layout() {
        let net = build_forward_net(&worked());
        assert_eq!(net.places().len(), 17);
        assert_eq!(net.transitions().len(), 14);
        assert_eq!(net.flow_len(), 38);
        let expected = pairs(&[
            ("ell1", "x1"),
            ("ell1", "~x1"),
            ("ell2", "x2"),
            ("ell2", "~x2"),
            ("ell3", "x3"),
            ("ell3", "~x3"),
            ("x1", "p1_1"),
            ("x1", "p1_2"),
            ("~x2", "pbar2_2"),
            ("x2", "p2_3"),
            ("x3", "p3_2"),
            ("~x3", "pbar3_1"),
            ("~x3", "pbar3_3"),
            ("p1_1", "x1_1"),
            ("c1", "x1_1"),
            ("pbar3_1", "~x3_1"),
            ("c1", "~x3_1"),
            ("p1_2", "x1_2"),
            ("c2", "x1_2"),
            ("pbar2_2", "~x2_2"),
            ("c2", "~x2_2"),
            ("p3_2", "x3_2"),
            ("c2", "x3_2"),
            ("p2_3", "x2_3"),
            ("c3", "x2_3"),
            ("pbar3_3", "~x3_3"),
            ("c3", "~x3_3"),
            ("x1_1", "cbar1"),
            ("~x3_1", "cbar1"),
            ("x1_2", "cbar2"),
            ("~x2_2", "cbar2"),
            ("x3_2", "cbar2"),
            ("x2_3", "cbar3"),
            ("~x3_3", "cbar3"),
            ("cbar1", "Phi_t"),
            ("cbar2", "Phi_t"),
            ("cbar3", "Phi_t"),
            ("Phi_t", "top"),
        ]);
        assert_eq!(arcs(&net), expected);
        assert_eq!(
            net.labels_of(net.initial_marking()),
            ["ell1", "ell2", "ell3", "c1", "c2", "c3"]
        );
    }

    #[test]
    fn inverse_net_matches_the_reference_layout() {
        let net = build_inverse_net(&worked());
        assert_eq!(net.places().len(), 17);
        assert_eq!(net.transitions().len(), 14);
        assert_eq!(net.flow_len(), 37);
        let expected = pairs(&[
            ("cbar1", "x1_1"),
            ("cbar1", "~x3_1"),
            ("cbar2", "x1_2"),
            ("cbar2", "~x2_2"),
            ("cbar2", "x3_2"),
            ("cbar3", "x2_3"),
            ("cbar3", "~x3_3"),
            ("x1_1", "p1_1"),
            ("~x3_1", "pbar3_1"),
            ("x1_2", "p1_2"),
            ("~x2_2", "pbar2_2"),
            ("x3_2", "p3_2"),
            ("x2_3", "p2_3"),
            ("~x3_3", "pbar3_3"),
            ("pbreve1", "x1"),
            ("p1_1", "x1"),
            ("p1_2", "x1"),
            ("pbreve1", "~x1"),
            ("pbreve2", "x2"),
            ("p2_3", "x2"),
            ("pbreve2", "~x2"),
            ("pbar2_2", "~x2"),
            ("pbreve3", "x3"),
            ("p3_2", "x3"),
            ("pbreve3", "~x3"),
            ("pbar3_1", "~x3"),
            ("pbar3_3", "~x3"),
            ("x1", "ell1"),
            ("~x1", "ell1"),
            ("x2", "ell2"),
            ("~x2", "ell2"),
            ("x3", "ell3"),
            ("~x3", "ell3"),
            ("ell1", "Phi_t"),
            ("ell2", "Phi_t"),
            ("ell3", "Phi_t"),
            ("Phi_t", "top"),
        ]);
        assert_eq!(arcs(&net), expected);
        assert_eq!(
            net.labels_of(net.initial_marking()),
            ["cbar1", "cbar2", "cbar3", "pbreve1", "pbreve2", "pbreve3"]
        );
    }

    #[test]
    fn clause_conflicts_are_the_clause_literals() {
        let f = worked();
        let net = build_inverse_net(&f);
        let conflicts = net.clause_conflicts();
        assert_eq!(conflicts.len(), 3);
        for clause in f.clauses() {
            let place = net.place_by_label(&format!("cbar{}", clause.id)).unwrap();
            let labels: Vec<String> = conflicts.0[&place]
                .iter()
                .map(|&t: &TransitionId| net.transition(t).label.clone())
                .collect();
            let expected: Vec<String> = clause
                .literals
                .iter()
                .map(|&l| occurrence_label(l, clause.id))
                .collect();
            assert_eq!(labels, expected);
        }
    }

    #[test]
    fn unit_clause_nets() {
        let f = Formula::from_signed(1, &[&[1]]);
        let fwd = build_forward_net(&f);
        let cbar = fwd.place_by_label("cbar1").unwrap();
        let producers: Vec<&str> = fwd
            .transitions()
            .iter()
            .filter(|t| t.outputs.contains(&cbar))
            .map(|t| t.label.as_str())
            .collect();
        assert_eq!(producers, ["x1_1"]);

        let inv = build_inverse_net(&f);
        let clause = inv.place_by_label("cbar1").unwrap();
        assert_eq!(inv.consumers(clause).len(), 1);
        assert!(inv.clause_conflicts().is_empty());
    }

    #[test]
    fn forward_clause_level_counts() {
        let f = Formula::from_signed(4, &[&[1, 2, 3], &[-1, 2, 4], &[1, -3, -4], &[2, 3, -4]]);
        let net = build_forward_net(&f);
        let level2 = net
            .places()
            .iter()
            .filter(|p| p.level == Level::At(2))
            .count();
        assert_eq!(level2, 4);
        let collector = net.transition(net.transition_by_label("Phi_t").unwrap());
        assert_eq!(collector.inputs.len(), 4);
    }
}

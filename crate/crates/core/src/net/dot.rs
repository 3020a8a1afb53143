//! Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Level, Marking, Net};

/// DOT digraph of `net`. Places are circles, transitions boxes, one rank per
/// level. Places marked in `marking` (default: the initial marking) are filled.
pub fn export_dot(net: &Net, marking: Option<&Marking>) -> String {
    let mut out = String::from("digraph net {\n");
    if net.places().is_empty() && net.transitions().is_empty() {
        out.push_str("}\n");
        return out;
    }
    let marking = marking.unwrap_or(net.initial_marking());
    let sink_rank = 2 * (net.depth() + 1);
    let mut ranks: BTreeMap<u32, Vec<String>> = BTreeMap::new();

    out.push_str("  rankdir=TB;\n");
    for (i, p) in net.places().iter().enumerate() {
        let style = if marking.contains(super::PlaceId(i)) {
            ", style=filled, fillcolor=gray30, fontcolor=white"
        } else {
            ""
        };
        writeln!(
            out,
            "  p{i} [shape=circle, label=\"{}\"{style}];",
            escape(&p.label)
        )
        .unwrap();
        let rank = match p.level {
            Level::At(l) => 2 * l,
            Level::Sink => sink_rank,
        };
        ranks.entry(rank).or_default().push(format!("p{i}"));
    }
    for (i, t) in net.transitions().iter().enumerate() {
        writeln!(out, "  t{i} [shape=box, label=\"{}\"];", escape(&t.label)).unwrap();
        ranks
            .entry(2 * t.level + 1)
            .or_default()
            .push(format!("t{i}"));
    }
    for (i, t) in net.transitions().iter().enumerate() {
        for p in &t.inputs {
            writeln!(out, "  p{} -> t{i};", p.0).unwrap();
        }
        for p in &t.outputs {
            writeln!(out, "  t{i} -> p{};", p.0).unwrap();
        }
    }
    for nodes in ranks.values() {
        writeln!(out, "  {{ rank=same; {}; }}", nodes.join("; ")).unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{sample::leveled_example, NetBuilder};

    #[test]
    fn sample_net_node_counts() {
        let dot = export_dot(&leveled_example(), None);
        assert_eq!(dot.matches("shape=circle").count(), 17);
        assert_eq!(dot.matches("shape=box").count(), 14);
        assert_eq!(dot.matches("style=filled").count(), 6);
        assert!(dot.starts_with("digraph net {\n") && dot.ends_with("}\n"));
    }

    #[test]
    fn empty_net_has_empty_body() {
        let net = NetBuilder::new().build().unwrap();
        assert_eq!(export_dot(&net, None), "digraph net {\n}\n");
    }

    #[test]
    fn export_is_deterministic() {
        let net = leveled_example();
        assert_eq!(export_dot(&net, None), export_dot(&net.clone(), None));
    }

    #[test]
    fn custom_marking_changes_fill() {
        let net = leveled_example();
        let m = net.marking_of(&["p17"]).unwrap();
        let dot = export_dot(&net, Some(&m));
        assert_eq!(dot.matches("style=filled").count(), 1);
        assert!(dot.contains("p16 [shape=circle, label=\"p17\", style=filled"));
    }
}

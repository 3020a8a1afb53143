//! Builds the forward and inverse nets of a formula, checks that the sink
//! marking {top} is reachable exactly when the oracle finds a model, and
//! writes the inverse net as DOT.
//!
//! cargo run --example nets [formula.x1cnf] > inverse.dot

use x1scan::formula::{parse_x1cnf, Formula};
use x1scan::net::{build_forward_net, build_inverse_net, explore_target, export_dot, ReachOptions};
use x1scan::oracle::brute_force_sat;

fn main() {
    let phi = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
            parse_x1cnf(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
        }
        None => Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]]),
    };
    let sat = brute_force_sat(&phi).expect("small formula").is_sat();
    eprintln!(
        "oracle: {}",
        if sat { "satisfiable" } else { "unsatisfiable" }
    );

    for (kind, net) in [
        ("forward", build_forward_net(&phi)),
        ("inverse", build_inverse_net(&phi)),
    ] {
        let target = net.marking_of(&["top"]).expect("top place");
        let stats = explore_target(&net, &target, &ReachOptions::default()).expect("within budget");
        let witness: Vec<&str> = stats
            .witness
            .iter()
            .flatten()
            .map(|&t| net.transition(t).label.as_str())
            .collect();
        eprintln!(
            "{kind}: {} places, {} transitions, {} arcs; top reachable {} after {} markings {witness:?}",
            net.places().len(),
            net.transitions().len(),
            net.flow_len(),
            stats.reachable,
            stats.states
        );
        assert_eq!(stats.reachable, sat);
        if kind == "inverse" {
            print!("{}", export_dot(&net, Some(net.initial_marking())));
        }
    }
}

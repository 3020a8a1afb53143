//! Plays two firing sequences on the small leveled net and prints each
//! intermediate marking.
//!
//! cargo run --example token_game

use x1scan::net::sample::leveled_example;
use x1scan::net::{Net, TransitionId};

fn play(net: &Net, labels: &[&str]) {
    let sigma: Vec<TransitionId> = labels
        .iter()
        .map(|l| net.transition_by_label(l).expect("known label"))
        .collect();
    let game = net
        .play_token_game(&sigma)
        .expect("sequence is enabled step by step");
    println!("sequence {}", labels.join(" "));
    println!("  M0 = {:?}", net.labels_of(net.initial_marking()));
    for step in &game.steps {
        println!(
            "  after {:<3} {:?}",
            net.transition(step.transition).label,
            net.labels_of(&step.marking)
        );
    }
    println!(
        "  final = {:?}, nothing enabled: {}, safety violations: {}",
        net.labels_of(&game.final_marking),
        game.is_final,
        game.safety_violations.len()
    );
}

fn main() {
    let net = leveled_example();
    println!(
        "{} places, {} transitions, depth {}",
        net.places().len(),
        net.transitions().len(),
        net.depth()
    );
    play(&net, &["t1", "t3", "t10", "t5", "t8", "t13", "t14"]);
    play(&net, &["t2", "t7", "t3", "t10", "t6"]);
}

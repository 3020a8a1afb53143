//! The small two-level net used to illustrate the token game.

use super::{Level, Net, NetBuilder, PlaceId};

/// Places `p1..p17`, transitions `t1..t14`.
///
/// `p1`, `p2`, `p3` are each shared by two level-0 transitions; `p11`, `p12`,
/// `p13` guard the level-1 transitions feeding `p14`, `p15`, `p16`, which
/// `t14` collects into the sink `p17`.
pub fn leveled_example() -> Net {
    let mut b = NetBuilder::new();
    let mut p: Vec<PlaceId> = Vec::with_capacity(17);
    for i in 1..=17 {
        let (level, marked) = match i {
            1..=3 => (Level::At(0), true),
            4..=10 => (Level::At(1), false),
            11..=13 => (Level::At(1), true),
            14..=16 => (Level::At(2), false),
            _ => (Level::Sink, false),
        };
        p.push(b.place(format!("p{i}"), level, marked));
    }
    let at = |i: usize| p[i - 1];

    let level0: [(usize, &[usize]); 6] = [
        (1, &[]),
        (1, &[4, 6]),
        (2, &[7]),
        (2, &[9]),
        (3, &[5, 10]),
        (3, &[8]),
    ];
    for (k, (input, outputs)) in level0.iter().enumerate() {
        b.transition(
            format!("t{}", k + 1),
            0,
            vec![at(*input)],
            outputs.iter().map(|&o| at(o)).collect(),
        );
    }
    let level1: [([usize; 2], usize); 7] = [
        ([4, 11], 14),
        ([5, 11], 14),
        ([6, 12], 15),
        ([7, 12], 15),
        ([8, 12], 15),
        ([9, 13], 16),
        ([10, 13], 16),
    ];
    for (k, (inputs, output)) in level1.iter().enumerate() {
        b.transition(
            format!("t{}", k + 7),
            1,
            inputs.iter().map(|&i| at(i)).collect(),
            vec![at(*output)],
        );
    }
    b.transition("t14", 2, vec![at(14), at(15), at(16)], vec![at(17)]);

    b.build().expect("sample net is leveled")
}

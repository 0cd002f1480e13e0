//! Records a game, writes it as JSON lines, reads it back and re-simulates.

use redistricting_ghost::experiments::{simulate, Replay};
use redistricting_ghost::prelude::*;

fn main() {
    let config = GameConfig::new(4, 2, 8).unwrap();
    let replay = simulate(
        config,
        &StrategySpec::ghost_minority(None),
        &StrategySpec::random(Player::A, 3),
    )
    .unwrap();
    let text = replay.to_text();
    print!("{text}");

    let back = Replay::parse(&text).unwrap();
    back.verify().unwrap();
    assert_eq!(back.resimulate().unwrap().moves, back.moves);
    println!("verified {} moves", back.moves.len());
}

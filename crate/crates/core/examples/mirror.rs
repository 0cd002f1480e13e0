//! With equal pools and an even number of districts, the second mover
//! forces an even split by answering in the paired district.

use redistricting_ghost::experiments::play_out;
use redistricting_ghost::prelude::*;
use redistricting_ghost::strategy::{Mirror, RandomPlayer};

fn main() {
    let config = GameConfig::new(6, 2, 15).unwrap();
    for seed in 0..5 {
        let mut b = RandomPlayer::new(Player::B, seed);
        let mut a = Mirror::new(&config).unwrap();
        let (end, _) = play_out(config, &mut b, &mut a).unwrap();
        let o = end.outcome().unwrap();
        println!(
            "seed {seed}: B {} A {}",
            o.b_districts_won, o.a_districts_won
        );
    }
}

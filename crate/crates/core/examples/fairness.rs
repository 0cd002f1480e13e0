//! Proportional share, the packed map and the efficiency gap of a finished
//! game.

use redistricting_ghost::metrics::{format_ratio, p_range, vote_tally};
use redistricting_ghost::prelude::*;

fn main() {
    let config = GameConfig::new(5, 3, 14).unwrap();
    let p = proportional_p(&config);
    println!("p = {p}, range {:?}", p_range(p, &config));

    let packed = packed_map(&config).unwrap();
    for d in packed.districts() {
        println!("{} bricks / {} apples", d.bricks, d.apples);
    }
    let tally = vote_tally(&packed).unwrap();
    println!("{tally:?}");
    println!("E = {}", format_ratio(&efficiency_gap(&packed).unwrap()));
    println!(
        "{}",
        serde_json::to_string_pretty(&fairness_report(&packed)).unwrap()
    );
}

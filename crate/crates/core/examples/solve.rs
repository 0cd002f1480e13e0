//! Exact values for every brick count of a small game, with and without a
//! pinned strategy on one side.

use redistricting_ghost::prelude::*;

fn main() {
    let (j, m) = (4, 1);
    println!(" n  optimal  vs-crack  minority-B");
    for n in 0..=j * (2 * m + 1) {
        let config = GameConfig::new(j, m, n).unwrap();
        let optimal = solve(&config).unwrap().value;
        let crack = solve_with_fixed(&config, Player::A, &StrategySpec::crack_majority())
            .unwrap()
            .value;
        let minority = solve_with_fixed(&config, Player::B, &StrategySpec::ghost_minority(None))
            .unwrap()
            .value;
        println!("{n:>2}  {optimal:>7}  {crack:>8}  {minority:>10}");
    }

    let start = new_game(GameConfig::new(2, 1, 3).unwrap()).unwrap();
    println!("best opening at (2,1,3): {}", best_move(&start).unwrap());
}

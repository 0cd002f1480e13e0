//! The majority strategy keeps B short of `q` districts by filling brick
//! columns. Default run: seven districts of thirteen, 33 bricks.

use redistricting_ghost::experiments::simulate;
use redistricting_ghost::prelude::*;

fn main() {
    let config = GameConfig::new(7, 6, 33).unwrap();
    let params = crack_parameters(&config);
    println!("crack q = {}, columns c = {}", params.q, params.c);

    let replay = simulate(
        config,
        &StrategySpec::ghost_minority(Some(3)),
        &StrategySpec::crack_majority(),
    )
    .unwrap();
    let end = replay.final_state().unwrap();
    for (i, d) in end.districts().iter().enumerate() {
        println!("d{i}: {:>2} bricks {:>2} apples", d.bricks, d.apples);
    }
    println!(
        "B wins {}, full brick columns {}",
        end.outcome().unwrap().b_districts_won,
        end.full_brick_columns()
    );
}

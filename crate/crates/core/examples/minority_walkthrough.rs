//! B, holding few bricks, raises its score by one every turn against a
//! random opponent until `q` districts are locked in.
//!
//! ```text
//! cargo run --example minority_walkthrough -- 5 2 12 42
//! ```

use redistricting_ghost::prelude::*;
use redistricting_ghost::strategy::{ghost_minority_decision, LedgerTracker, RandomPlayer};

fn main() {
    let args: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer"))
        .collect();
    let (j, m, n) = match args[..] {
        [j, m, n, ..] => (j, m, n),
        _ => (5, 2, 12),
    };
    let seed = args.get(3).copied().unwrap_or(42) as u64;
    let config = GameConfig::new(j, m, n).expect("config");
    let q = default_q(&config);
    println!("j={j} m={m} n={n}: target q = {q}");

    let mut opponent = RandomPlayer::new(Player::A, seed);
    let mut ledger = LedgerTracker::new(q.max(1));
    let mut state = new_game(config).unwrap();
    let mut last = None;
    while !state.is_terminal() {
        let (mv, note) = match state.to_move() {
            Player::B => {
                let (mv, kind) = ghost_minority_decision(&state, q).unwrap();
                (mv, format!("{kind:?}"))
            }
            Player::A => (opponent.choose_move(&state, last).unwrap(), String::new()),
        };
        let next = state.apply_move(mv).unwrap();
        ledger.observe(&state, mv, &next);
        let score = game_score(&next, q);
        println!(
            "{:>3} {} {:<12} {:<10} score {}",
            state.move_count(),
            state.to_move(),
            mv.to_string(),
            note,
            score.total_score
        );
        state = next;
        last = Some(mv);
    }
    let outcome = state.outcome().unwrap();
    println!(
        "B won {} districts; ledger {:?}",
        outcome.b_districts_won,
        ledger.ledger()
    );
}

//! Strategy properties over generated configurations and opponents.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use redistricting_ghost::experiments::play_out;
use redistricting_ghost::game::{Color, GameConfig, GameState, Move, Player};
use redistricting_ghost::metrics::{efficiency_gap, vote_tally};
use redistricting_ghost::scoring::game_score;
use redistricting_ghost::strategy::majority::needs_column_brick;
use redistricting_ghost::strategy::{
    crack_majority_move, crack_parameters, default_q, ghost_minority_decision, random_move,
    LedgerTracker, Mirror, MoveType, RandomPlayer, Strategy as _,
};

fn minority_config() -> impl Strategy<Value = GameConfig> {
    (1u32..=6, 0u32..=4)
        .prop_flat_map(|(j, m)| (Just(j), Just(m), 0..=j * (2 * m + 1) / 2))
        .prop_map(|(j, m, n)| GameConfig::new(j, m, n).unwrap())
}

/// Plays ghost-minority for B against a seeded random A, calling `check`
/// before every B move.
fn ghost_vs_random(
    config: GameConfig,
    q: u32,
    seed: u64,
    mut check: impl FnMut(&GameState, Move, MoveType, &GameState),
) -> (GameState, LedgerTracker) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = GameState::new(config).unwrap();
    let mut ledger = LedgerTracker::new(q);
    while !state.is_terminal() {
        let (mv, kind) = match state.to_move() {
            Player::B => {
                let (mv, kind) = ghost_minority_decision(&state, q).unwrap();
                (mv, Some(kind))
            }
            Player::A => (random_move(&state, &mut rng).unwrap(), None),
        };
        let next = state.apply_move(mv).unwrap();
        if let Some(kind) = kind {
            check(&state, mv, kind, &next);
        }
        ledger.observe(&state, mv, &next);
        state = next;
    }
    (state, ledger)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minority_move_raises_score_by_one(config in minority_config(), seed in any::<u64>()) {
        let q = default_q(&config);
        prop_assume!(q >= 1);
        let m = config.m;
        ghost_vs_random(config, q, seed, |before, _, kind, after| {
            let s0 = game_score(before, q);
            if before.bricks_remaining() > 0 && !s0.is_secured(m) {
                assert_ne!(kind, MoveType::Surplus);
                assert_eq!(game_score(after, q).total_score, s0.total_score + 1, "{before:?}");
            }
        });
    }

    #[test]
    fn round_start_conditions(config in minority_config(), seed in any::<u64>()) {
        let q = default_q(&config);
        prop_assume!(q >= 1);
        ghost_vs_random(config, q, seed, |_, _, kind, after| {
            if matches!(kind, MoveType::Surplus | MoveType::NoBricks) {
                return;
            }
            let report = game_score(after, q);
            assert!(report.witness.is_some(), "{after:?}");
            assert_eq!(report.tied_in_q, 0, "{after:?}");
            assert!(2 * report.empty_in_q <= report.empty_total_z, "{after:?}");
        });
    }

    #[test]
    fn minority_reaches_target(config in minority_config(), seed in any::<u64>()) {
        let q = default_q(&config);
        let (end, ledger) = ghost_vs_random(config, q, seed, |_, _, _, _| {});
        prop_assert!(end.outcome().unwrap().b_districts_won >= q);
        let l = ledger.ledger();
        prop_assert_eq!(l.bricks_counted(), config.n);
        if l.b_flat == 0 {
            prop_assert_eq!(l.b + l.h + l.w, config.n);
        }
    }

    #[test]
    fn waste_identity_and_gap_bounds(config in minority_config(), seed in any::<u64>()) {
        let (end, _) = ghost_vs_random(config, default_q(&config), seed, |_, _, _, _| {});
        let tally = vote_tally(&end).unwrap();
        prop_assert_eq!(tally.wasted_a + tally.wasted_b, config.j * config.m);
        let e = efficiency_gap(&end).unwrap();
        prop_assert!(e * 2 <= num_rational::Ratio::from_integer(1));
    }

    #[test]
    fn cracking_type_a_is_unique_and_columns_fill(config in minority_config(), seed in any::<u64>()) {
        let params = crack_parameters(&config);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = GameState::new(config).unwrap();
        let mut a_ran_out = false;
        while !state.is_terminal() {
            let mv = match state.to_move() {
                Player::A => {
                    if state.bricks_remaining() == 0 {
                        a_ran_out = true;
                    }
                    let flagged = state
                        .open_districts()
                        .filter(|&d| needs_column_brick(&state, d, params.c))
                        .count();
                    prop_assert!(flagged <= 1, "{:?}", state);
                    crack_majority_move(&state).unwrap()
                }
                Player::B => random_move(&state, &mut rng).unwrap(),
            };
            state = state.apply_move(mv).unwrap();
        }
        if !a_ran_out {
            prop_assert!(state.full_brick_columns() >= params.c, "{:?}", state);
        }
    }

    #[test]
    fn mirror_splits_under_any_pairing(half in 1u32..=3, m in 0u32..=2, seed in any::<u64>()) {
        let j = 2 * half;
        let config = GameConfig::new(j, m, j * (2 * m + 1) / 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..j as usize).collect();
        order.shuffle(&mut rng);
        let mut pairing = vec![0; j as usize];
        for pair in order.chunks(2) {
            pairing[pair[0]] = pair[1];
            pairing[pair[1]] = pair[0];
        }
        let mut a = Mirror::with_pairing(&config, pairing).unwrap();
        let mut b = RandomPlayer::new(Player::B, seed);
        let (end, _) = play_out(config, &mut b, &mut a).unwrap();
        prop_assert_eq!(2 * end.outcome().unwrap().b_districts_won, j);
    }
}

#[test]
fn documented_minority_moves() {
    let fresh = GameState::new(GameConfig::new(2, 1, 3).unwrap()).unwrap();
    assert_eq!(
        ghost_minority_decision(&fresh, 1).unwrap(),
        (Move::brick(0), MoveType::EmptyInQ)
    );
    let tied = GameState::replay(
        GameConfig::new(2, 1, 3).unwrap(),
        &[Move::brick(0), Move::apple(0)],
    )
    .unwrap();
    assert_eq!(
        ghost_minority_decision(&tied, 1).unwrap(),
        (Move::brick(0), MoveType::TiedInQ)
    );
}

#[test]
fn documented_crack_move() {
    let config = GameConfig::new(2, 1, 2).unwrap();
    let state = GameState::replay(config, &[Move::brick(0)]).unwrap();
    assert_eq!(crack_parameters(&config).c, 0);
    assert_eq!(crack_majority_move(&state).unwrap(), Move::brick(1));
}

#[test]
fn mirror_answers_opposite_color() {
    let config = GameConfig::new(2, 1, 3).unwrap();
    let mut mirror = Mirror::new(&config).unwrap();
    let state = GameState::replay(config, &[Move::apple(1)]).unwrap();
    assert_eq!(
        mirror.choose_move(&state, Some(Move::apple(1))).unwrap(),
        Move::new(0, Color::Brick)
    );
}

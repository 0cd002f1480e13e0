//! Minority strategy: raise the score by one brick every turn.
//!
//! With a maximizing `Q` chosen to hold as few tied districts as possible,
//! B bricks a non-empty tied district of `Q` (type a), else an empty
//! district of `Q` (type b), else any district of `Q` still short of `m + 1`
//! bricks (type c). Each of these raises the score by exactly one.

use crate::game::{Color, GameConfig, GameState, Move, Player};
use crate::scoring::select_q;

use super::{ensure_turn, first_open_apple, Strategy, StrategyError};

/// Which branch of the minority strategy produced a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveType {
    /// Bricks are gone; an apple fills the lowest-index open district.
    NoBricks,
    TiedInQ,
    EmptyInQ,
    GrowInQ,
    /// Target secured or unreachable; bricks chase extra districts.
    Surplus,
}

/// Largest `q <= j` with `n >= 2q(m + 1)`: the target the minority strategy
/// is guaranteed to reach.
pub fn default_q(config: &GameConfig) -> u32 {
    (config.n / (2 * (config.m + 1))).min(config.j)
}

pub fn ghost_minority_move(state: &GameState, q: u32) -> Result<Move, StrategyError> {
    ghost_minority_decision(state, q).map(|(mv, _)| mv)
}

/// The minority move together with the branch that chose it.
pub fn ghost_minority_decision(
    state: &GameState,
    q: u32,
) -> Result<(Move, MoveType), StrategyError> {
    ensure_turn(state, Player::B)?;
    if state.bricks_remaining() == 0 {
        return Ok((first_open_apple(state)?, MoveType::NoBricks));
    }
    let m = state.config().m;
    let districts = state.districts();
    if q > 0 {
        if let Some(set) = select_q(state, q) {
            if let Some(&d) = set
                .iter()
                .find(|&&i| districts[i].is_tied() && !districts[i].is_empty())
            {
                return Ok((Move::brick(d), MoveType::TiedInQ));
            }
            if let Some(&d) = set.iter().find(|&&i| districts[i].is_empty()) {
                return Ok((Move::brick(d), MoveType::EmptyInQ));
            }
            if let Some(&d) = set.iter().find(|&&i| districts[i].bricks <= m) {
                return Ok((Move::brick(d), MoveType::GrowInQ));
            }
        }
    }
    Ok((surplus_brick(state), MoveType::Surplus))
}

/// Brick to the open district with the most bricks still short of `m + 1`,
/// preferring districts A has not yet secured.
fn surplus_brick(state: &GameState) -> Move {
    let m = state.config().m;
    let districts = state.districts();
    let short: Vec<usize> = state
        .open_districts()
        .filter(|&i| districts[i].bricks <= m)
        .collect();
    // most bricks, lowest index among equals
    let pick = |allow: &dyn Fn(usize) -> bool| {
        short.iter().copied().filter(|&i| allow(i)).fold(
            None,
            |best: Option<usize>, i| match best {
                Some(b) if districts[b].bricks >= districts[i].bricks => Some(b),
                _ => Some(i),
            },
        )
    };
    let target = pick(&|i| !districts[i].won_by_a(m))
        .or_else(|| pick(&|_| true))
        .or_else(|| state.open_districts().next())
        .expect("non-terminal state has an open district");
    Move::new(target, Color::Brick)
}

pub struct GhostMinority {
    q: u32,
}

impl GhostMinority {
    pub fn new(q: u32) -> Self {
        GhostMinority { q }
    }

    pub fn target_q(&self) -> u32 {
        self.q
    }
}

impl Strategy for GhostMinority {
    fn side(&self) -> Player {
        Player::B
    }

    fn choose_move(&mut self, state: &GameState, _: Option<Move>) -> Result<Move, StrategyError> {
        ghost_minority_move(state, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::DistrictState;
    use crate::scoring::game_score;

    fn state(j: u32, m: u32, n: u32, ds: &[(u32, u32)]) -> GameState {
        GameState::from_districts(
            GameConfig::new(j, m, n).unwrap(),
            ds.iter().map(|&(b, a)| DistrictState::new(b, a)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn default_q_values() {
        assert_eq!(default_q(&GameConfig::new(4, 5, 24).unwrap()), 2);
        assert_eq!(default_q(&GameConfig::new(4, 5, 19).unwrap()), 1);
        assert_eq!(default_q(&GameConfig::new(4, 5, 0).unwrap()), 0);
        assert_eq!(default_q(&GameConfig::new(2, 0, 2).unwrap()), 1);
        // capped at j
        assert_eq!(default_q(&GameConfig::new(1, 0, 1).unwrap()), 0);
        assert_eq!(default_q(&GameConfig::new(2, 1, 6).unwrap()), 1);
    }

    #[test]
    fn opening_is_type_b() {
        let s = GameState::new(GameConfig::new(2, 1, 3).unwrap()).unwrap();
        assert_eq!(
            ghost_minority_decision(&s, 1).unwrap(),
            (Move::brick(0), MoveType::EmptyInQ)
        );
    }

    #[test]
    fn tied_district_is_type_a() {
        let s = state(2, 1, 3, &[(1, 1), (0, 0)]);
        let (mv, kind) = ghost_minority_decision(&s, 1).unwrap();
        assert_eq!((mv, kind), (Move::brick(0), MoveType::TiedInQ));
        assert_eq!(
            s.apply_move(mv).unwrap().districts()[0],
            DistrictState::new(2, 1)
        );
    }

    #[test]
    fn grows_q_district() {
        let s = state(3, 2, 6, &[(2, 1), (1, 0), (0, 0)]);
        let (mv, kind) = ghost_minority_decision(&s, 2).unwrap();
        assert_eq!(kind, MoveType::GrowInQ);
        assert_eq!(mv, Move::brick(0));
    }

    #[test]
    fn apples_once_bricks_run_out() {
        let s = state(2, 1, 2, &[(2, 1), (0, 1)]);
        assert_eq!(s.bricks_remaining(), 0);
        assert_eq!(
            ghost_minority_decision(&s, 1).unwrap(),
            (Move::apple(1), MoveType::NoBricks)
        );
    }

    #[test]
    fn surplus_after_secured() {
        let s = state(3, 1, 6, &[(2, 0), (1, 1), (0, 0)]);
        assert!(game_score(&s, 1).is_secured(1));
        assert_eq!(
            ghost_minority_decision(&s, 1).unwrap(),
            (Move::brick(1), MoveType::Surplus)
        );
    }

    #[test]
    fn surplus_skips_districts_a_holds() {
        let s = state(3, 2, 8, &[(3, 1), (1, 3), (0, 0)]);
        assert_eq!(
            ghost_minority_decision(&s, 1).unwrap(),
            (Move::brick(2), MoveType::Surplus)
        );
    }

    #[test]
    fn zero_target_plays_surplus() {
        let s = GameState::new(GameConfig::new(2, 1, 1).unwrap()).unwrap();
        assert_eq!(
            ghost_minority_decision(&s, 0).unwrap(),
            (Move::brick(0), MoveType::Surplus)
        );
    }

    #[test]
    fn rejects_a_turn() {
        let s = state(2, 1, 3, &[(1, 0), (0, 0)]);
        assert!(matches!(
            ghost_minority_move(&s, 1),
            Err(StrategyError::NotYourTurn { .. })
        ));
    }
}

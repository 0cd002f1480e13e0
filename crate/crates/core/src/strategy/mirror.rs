//! Second-mover mirroring for an evenly split electorate.
//!
//! Districts are paired up front. Each opponent move is answered with the
//! opposite color in the paired district, so paired districts always hold
//! color-swapped contents and each side ends with exactly `j / 2` districts.

use crate::game::{GameConfig, GameState, Move, Player};

use super::{ensure_turn, Strategy, StrategyError};

pub(crate) fn check_preconditions(config: &GameConfig) -> Result<(), StrategyError> {
    if config.j % 2 != 0 {
        return Err(StrategyError::MirrorOddDistricts { j: config.j });
    }
    if 2 * config.n != config.total_voters() {
        return Err(StrategyError::MirrorUnequalPools {
            n: config.n,
            v: config.total_voters(),
        });
    }
    Ok(())
}

/// Pairs district `i` with `i + j/2` (mod `j`).
pub fn default_pairing(j: u32) -> Vec<usize> {
    let j = j as usize;
    (0..j).map(|i| (i + j / 2) % j).collect()
}

/// A pairing must be a fixed-point-free involution on `0..j`.
pub fn validate_pairing(pairing: &[usize], j: u32) -> Result<(), StrategyError> {
    if pairing.len() != j as usize {
        return Err(StrategyError::MirrorPairing(format!(
            "expected {j} entries, got {}",
            pairing.len()
        )));
    }
    for (i, &p) in pairing.iter().enumerate() {
        if p >= pairing.len() || p == i || pairing[p] != i {
            return Err(StrategyError::MirrorPairing(format!(
                "district {i} maps to {p}"
            )));
        }
    }
    Ok(())
}

/// The opposite color of `last_opponent_move`, into the paired district.
pub fn mirror_move(
    state: &GameState,
    pairing: &[usize],
    last_opponent_move: Move,
) -> Result<Move, StrategyError> {
    check_preconditions(state.config())?;
    validate_pairing(pairing, state.config().j)?;
    let reply = Move::new(
        pairing
            .get(last_opponent_move.district)
            .copied()
            .ok_or_else(|| StrategyError::MirrorPairing("opponent move out of range".into()))?,
        last_opponent_move.color.opposite(),
    );
    state.check_move(reply)?;
    Ok(reply)
}

pub struct Mirror {
    pairing: Vec<usize>,
}

impl Mirror {
    pub fn new(config: &GameConfig) -> Result<Self, StrategyError> {
        check_preconditions(config)?;
        Ok(Mirror {
            pairing: default_pairing(config.j),
        })
    }

    pub fn with_pairing(config: &GameConfig, pairing: Vec<usize>) -> Result<Self, StrategyError> {
        check_preconditions(config)?;
        validate_pairing(&pairing, config.j)?;
        Ok(Mirror { pairing })
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }
}

impl Strategy for Mirror {
    fn side(&self) -> Player {
        Player::A
    }

    fn choose_move(
        &mut self,
        state: &GameState,
        last_move: Option<Move>,
    ) -> Result<Move, StrategyError> {
        ensure_turn(state, Player::A)?;
        mirror_move(
            state,
            &self.pairing,
            last_move.ok_or(StrategyError::MirrorNoOpponentMove)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fresh(j: u32, m: u32, n: u32) -> GameState {
        GameState::new(GameConfig::new(j, m, n).unwrap()).unwrap()
    }

    #[test]
    fn answers_with_opposite_color() {
        let s = fresh(2, 1, 3);
        let after = s.apply_move(Move::brick(0)).unwrap();
        let pairing = default_pairing(2);
        assert_eq!(
            mirror_move(&after, &pairing, Move::brick(0)),
            Ok(Move::apple(1))
        );
        let after = s.apply_move(Move::apple(1)).unwrap();
        assert_eq!(
            mirror_move(&after, &pairing, Move::apple(1)),
            Ok(Move::brick(0))
        );
    }

    #[test]
    fn rejects_odd_and_unbalanced() {
        assert_eq!(
            Mirror::new(&GameConfig::new(3, 1, 4).unwrap()).err(),
            Some(StrategyError::MirrorOddDistricts { j: 3 })
        );
        assert_eq!(
            Mirror::new(&GameConfig::new(2, 1, 2).unwrap()).err(),
            Some(StrategyError::MirrorUnequalPools { n: 2, v: 6 })
        );
    }

    #[test]
    fn pairings() {
        assert_eq!(default_pairing(4), vec![2, 3, 0, 1]);
        assert!(validate_pairing(&[1, 0, 3, 2], 4).is_ok());
        assert!(validate_pairing(&[0, 1], 2).is_err());
        assert!(validate_pairing(&[1, 2, 0], 3).is_err());
    }

    #[test]
    fn needs_opponent_move() {
        let mut mirror = Mirror::new(&GameConfig::new(2, 1, 3).unwrap()).unwrap();
        let after = fresh(2, 1, 3).apply_move(Move::brick(0)).unwrap();
        assert_eq!(
            mirror.choose_move(&after, None),
            Err(StrategyError::MirrorNoOpponentMove)
        );
    }
}

//! Majority cracking strategy.
//!
//! A picks the smallest target `q` it can hold B below (`n < f(q)`), derives
//! the column count `c`, and then spends every brick it plays on keeping the
//! first `c` brick columns growing: a district whose open spaces drop below
//! `2(c - r)` (with `r` its bricks) gets a brick at once, otherwise a brick
//! goes to an open district with the fewest bricks.

use serde::Serialize;

use crate::game::{GameConfig, GameState, Move, Player};
use crate::metrics::{column_bound_c, lower_bound_f};

use super::{ensure_turn, first_open_apple, Strategy, StrategyError};

/// How A chooses its target among the `q` with `n < f(q)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum QSelection {
    /// The smallest such `q`, i.e. the tightest limit on B.
    #[default]
    Smallest,
    /// The largest such `q`; kept for comparison only.
    Largest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrackParameters {
    pub q: u32,
    pub c: u32,
}

pub fn crack_parameters(config: &GameConfig) -> CrackParameters {
    crack_parameters_with(config, QSelection::Smallest)
}

pub fn crack_parameters_with(config: &GameConfig, selection: QSelection) -> CrackParameters {
    let n = i64::from(config.n);
    let mut limiting = (1..=config.j).filter(|&q| lower_bound_f(config.j, config.m, q) > n.into());
    let q = match selection {
        QSelection::Smallest => limiting.next(),
        QSelection::Largest => limiting.last(),
    }
    .unwrap_or(config.j);
    CrackParameters {
        q,
        c: column_bound_c(config.j, config.m, q),
    }
}

/// Type-a condition for one district: open spaces below `2(c - r)`.
pub fn needs_column_brick(state: &GameState, district: usize, c: u32) -> bool {
    let m = state.config().m;
    let d = &state.districts()[district];
    d.is_open(m) && i64::from(d.open_spaces(m)) < 2 * (i64::from(c) - i64::from(d.bricks))
}

pub fn crack_majority_move(state: &GameState) -> Result<Move, StrategyError> {
    crack_majority_move_with(state, crack_parameters(state.config()))
}

pub fn crack_majority_move_with(
    state: &GameState,
    params: CrackParameters,
) -> Result<Move, StrategyError> {
    ensure_turn(state, Player::A)?;
    if state.bricks_remaining() == 0 {
        return first_open_apple(state);
    }
    if let Some(d) = state
        .open_districts()
        .find(|&d| needs_column_brick(state, d, params.c))
    {
        return Ok(Move::brick(d));
    }
    let districts = state.districts();
    let thinnest = state
        .open_districts()
        .min_by_key(|&d| (districts[d].bricks, d))
        .ok_or(StrategyError::Terminal)?;
    Ok(Move::brick(thinnest))
}

pub struct CrackMajority {
    params: CrackParameters,
}

impl CrackMajority {
    pub fn new(config: &GameConfig) -> Self {
        CrackMajority {
            params: crack_parameters(config),
        }
    }

    pub fn with_parameters(params: CrackParameters) -> Self {
        CrackMajority { params }
    }

    pub fn parameters(&self) -> CrackParameters {
        self.params
    }
}

impl Strategy for CrackMajority {
    fn side(&self) -> Player {
        Player::A
    }

    fn choose_move(&mut self, state: &GameState, _: Option<Move>) -> Result<Move, StrategyError> {
        crack_majority_move_with(state, self.params)
    }
}

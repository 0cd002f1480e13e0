//! Simulations, transcripts, theorem sweeps and bound data.

pub mod bounds;
pub mod replay;
pub mod sweep;

use thiserror::Error;

use crate::game::{GameConfig, GameError, GameState, Move, Player};
use crate::strategy::{Strategy, StrategyError, StrategySpec};

pub use bounds::{breakpoint_table, emit_bounds, BoundsPlot};
pub use replay::{Replay, ReplayError, ReplayFooter, ReplayHeader, ReplayMove};
pub use sweep::{sweep, SweepRow, SweepTable};

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("strategy for {side} is declared for {declared}")]
    SideMismatch { side: Player, declared: Player },
    #[error("{side}: {source}")]
    Strategy { side: Player, source: StrategyError },
    #[error("{side} chose an illegal move {mv}: {source}")]
    IllegalMove {
        side: Player,
        mv: Move,
        source: GameError,
    },
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Plays a whole game between two strategy objects, returning the final
/// state and the move list.
pub fn play_out(
    config: GameConfig,
    b: &mut dyn Strategy,
    a: &mut dyn Strategy,
) -> Result<(GameState, Vec<Move>), SimulationError> {
    for (side, strategy) in [(Player::B, &*b), (Player::A, &*a)] {
        if strategy.side() != side {
            return Err(SimulationError::SideMismatch {
                side,
                declared: strategy.side(),
            });
        }
    }
    let mut state = GameState::new(config)?;
    let mut moves: Vec<Move> = Vec::with_capacity(config.total_voters() as usize);
    while !state.is_terminal() {
        let side = state.to_move();
        let strategy: &mut dyn Strategy = match side {
            Player::B => b,
            Player::A => a,
        };
        let mv = strategy
            .choose_move(&state, moves.last().copied())
            .map_err(|source| SimulationError::Strategy { side, source })?;
        state = state
            .apply_move(mv)
            .map_err(|source| SimulationError::IllegalMove { side, mv, source })?;
        moves.push(mv);
    }
    Ok((state, moves))
}

/// A full game between two declared strategies, recorded as a transcript.
pub fn simulate(
    config: GameConfig,
    spec_b: &StrategySpec,
    spec_a: &StrategySpec,
) -> Result<Replay, SimulationError> {
    for (side, spec) in [(Player::B, spec_b), (Player::A, spec_a)] {
        if spec.side != side {
            return Err(SimulationError::SideMismatch {
                side,
                declared: spec.side,
            });
        }
    }
    let build = |spec: &StrategySpec| {
        spec.build(&config)
            .map_err(|source| SimulationError::Strategy {
                side: spec.side,
                source,
            })
    };
    let mut b = build(spec_b)?;
    let mut a = build(spec_a)?;
    let (_, moves) = play_out(config, b.as_mut(), a.as_mut())?;
    Ok(Replay::from_moves(
        ReplayHeader::for_specs(config, spec_b, spec_a),
        &moves,
    )?)
}

//! Redistricting Ghost in the abstract setting.
//!
//! Two parties take turns placing single voters into `j` districts of
//! `2m + 1` seats each. B holds `n` bricks and moves first; A holds the
//! remaining apples. The crate provides:
//!
//! - [`game`]: configs, immutable states and legal transitions,
//! - [`scoring`]: B's progress score toward a target of `q` districts,
//! - [`strategy`]: the minority score-raising strategy, the majority
//!   cracking strategy, second-mover mirroring and baselines,
//! - [`metrics`]: proportional share, packed maps, efficiency gap and the
//!   bound formulas,
//! - [`solver`]: exact minimax values for small games,
//! - [`experiments`]: simulations, replays, theorem sweeps and bound data,
//! - [`session`]: a turn-by-turn play service with an HTTP front end.
//!
//! ```
//! use redistricting_ghost::prelude::*;
//!
//! let config = GameConfig::new(2, 1, 3).unwrap();
//! assert_eq!(solve(&config).unwrap().value, 1);
//! ```

pub mod experiments;
pub mod game;
pub mod metrics;
pub mod scoring;
pub mod session;
pub mod solver;
pub mod strategy;

pub mod prelude {
    pub use crate::experiments::{simulate, Replay};
    pub use crate::game::{
        new_game, Color, DistrictState, GameConfig, GameError, GameState, Move, Outcome, Player,
    };
    pub use crate::metrics::{
        bound_curves, efficiency_gap, fairness_report, packed_map, proportional_p,
    };
    pub use crate::scoring::{district_score, game_score, select_q, ScoreReport};
    pub use crate::solver::{best_move, solve, solve_with_fixed, GameValue, SolveError};
    pub use crate::strategy::{
        crack_majority_move, crack_parameters, default_q, ghost_minority_move, Strategy,
        StrategyKind, StrategySpec,
    };
}

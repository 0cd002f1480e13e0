//! Player strategies.
//!
//! [`minority`] implements B's score-raising strategy, [`majority`] A's
//! column-filling cracking strategy and [`mirror`] the second-mover
//! mirroring strategy for evenly split electorates. `random` and
//! `first-legal` are baselines.

pub mod majority;
pub mod minority;
pub mod mirror;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Color, GameConfig, GameError, GameState, Move, Player};
use crate::scoring::game_score;

pub use majority::{
    crack_majority_move, crack_majority_move_with, crack_parameters, crack_parameters_with,
    CrackMajority, CrackParameters, QSelection,
};
pub use minority::{
    default_q, ghost_minority_decision, ghost_minority_move, GhostMinority, MoveType,
};
pub use mirror::{default_pairing, mirror_move, validate_pairing, Mirror};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("not {expected}'s turn ({actual} to move)")]
    NotYourTurn { expected: Player, actual: Player },
    #[error("game is over")]
    Terminal,
    #[error("{kind} cannot play side {side}")]
    WrongSide { kind: StrategyKind, side: Player },
    #[error("mirroring requires even j (j = {j})")]
    MirrorOddDistricts { j: u32 },
    #[error("mirroring requires n = v/2 (n = {n}, v = {v})")]
    MirrorUnequalPools { n: u32, v: u32 },
    #[error("invalid mirror pairing: {0}")]
    MirrorPairing(String),
    #[error("mirror needs the opponent's last move")]
    MirrorNoOpponentMove,
    #[error("random strategy requires a seed")]
    MissingSeed,
    #[error("unknown strategy `{0}`")]
    UnknownKind(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    GhostMinority,
    CrackMajority,
    Mirror,
    Random,
    FirstLegal,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::GhostMinority => "ghost-minority",
            StrategyKind::CrackMajority => "crack-majority",
            StrategyKind::Mirror => "mirror",
            StrategyKind::Random => "random",
            StrategyKind::FirstLegal => "first-legal",
        }
    }

    pub fn is_deterministic(self) -> bool {
        self != StrategyKind::Random
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ghost-minority" => StrategyKind::GhostMinority,
            "crack-majority" => StrategyKind::CrackMajority,
            "mirror" => StrategyKind::Mirror,
            "random" => StrategyKind::Random,
            "first-legal" => StrategyKind::FirstLegal,
            other => return Err(StrategyError::UnknownKind(other.to_string())),
        })
    }
}

/// Declarative strategy choice, as carried by CLI flags, replay headers and
/// the session API.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub kind: StrategyKind,
    pub side: Player,
    /// Explicit target for `ghost-minority`; defaults to [`default_q`].
    #[serde(default, rename = "q", skip_serializing_if = "Option::is_none")]
    pub target_q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl StrategySpec {
    pub fn new(kind: StrategyKind, side: Player) -> Self {
        StrategySpec {
            kind,
            side,
            target_q: None,
            seed: None,
        }
    }

    pub fn ghost_minority(q: Option<u32>) -> Self {
        StrategySpec {
            target_q: q,
            ..StrategySpec::new(StrategyKind::GhostMinority, Player::B)
        }
    }

    pub fn crack_majority() -> Self {
        StrategySpec::new(StrategyKind::CrackMajority, Player::A)
    }

    pub fn mirror() -> Self {
        StrategySpec::new(StrategyKind::Mirror, Player::A)
    }

    pub fn random(side: Player, seed: u64) -> Self {
        StrategySpec {
            seed: Some(seed),
            ..StrategySpec::new(StrategyKind::Random, side)
        }
    }

    pub fn first_legal(side: Player) -> Self {
        StrategySpec::new(StrategyKind::FirstLegal, side)
    }

    /// Parses the compact form produced by `Display`: `kind`,
    /// `kind(q=2)` or `kind(seed=7)`.
    pub fn parse(s: &str, side: Player) -> Result<Self, StrategyError> {
        let s = s.trim();
        let (kind, args) = match s.split_once('(') {
            Some((k, rest)) => (k, rest.strip_suffix(')').unwrap_or(rest)),
            None => (s, ""),
        };
        let mut spec = StrategySpec::new(kind.parse()?, side);
        for arg in args.split(',').map(str::trim).filter(|a| !a.is_empty()) {
            let bad = || StrategyError::UnknownKind(s.to_string());
            let (key, value) = arg.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "q" => spec.target_q = Some(value.trim().parse().map_err(|_| bad())?),
                "seed" => spec.seed = Some(value.trim().parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        Ok(spec)
    }

    pub fn validate(&self, config: &GameConfig) -> Result<(), StrategyError> {
        let wrong_side = || StrategyError::WrongSide {
            kind: self.kind,
            side: self.side,
        };
        match self.kind {
            StrategyKind::GhostMinority if self.side != Player::B => Err(wrong_side()),
            StrategyKind::CrackMajority if self.side != Player::A => Err(wrong_side()),
            StrategyKind::Mirror => {
                if self.side != Player::A {
                    return Err(wrong_side());
                }
                mirror::check_preconditions(config)
            }
            StrategyKind::Random if self.seed.is_none() => Err(StrategyError::MissingSeed),
            _ => Ok(()),
        }
    }

    pub fn build(&self, config: &GameConfig) -> Result<Box<dyn Strategy>, StrategyError> {
        self.validate(config)?;
        Ok(match self.kind {
            StrategyKind::GhostMinority => Box::new(GhostMinority::new(
                self.target_q.unwrap_or_else(|| default_q(config)),
            )),
            StrategyKind::CrackMajority => Box::new(CrackMajority::new(config)),
            StrategyKind::Mirror => Box::new(Mirror::new(config)?),
            StrategyKind::Random => Box::new(RandomPlayer::new(
                self.side,
                self.seed.ok_or(StrategyError::MissingSeed)?,
            )),
            StrategyKind::FirstLegal => Box::new(FirstLegal { side: self.side }),
        })
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut args = Vec::new();
        if let Some(q) = self.target_q {
            args.push(format!("q={q}"));
        }
        if let Some(seed) = self.seed {
            args.push(format!("seed={seed}"));
        }
        if args.is_empty() {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}({})", self.kind, args.join(","))
        }
    }
}

/// A player policy. `last_move` is the move that produced `state`, if any.
pub trait Strategy: Send {
    fn side(&self) -> Player;

    fn choose_move(
        &mut self,
        state: &GameState,
        last_move: Option<Move>,
    ) -> Result<Move, StrategyError>;
}

pub(crate) fn ensure_turn(state: &GameState, side: Player) -> Result<(), StrategyError> {
    if state.is_terminal() {
        return Err(StrategyError::Terminal);
    }
    if state.to_move() != side {
        return Err(StrategyError::NotYourTurn {
            expected: side,
            actual: state.to_move(),
        });
    }
    Ok(())
}

/// Apple to the lowest-index open district.
pub(crate) fn first_open_apple(state: &GameState) -> Result<Move, StrategyError> {
    state
        .open_districts()
        .next()
        .map(|d| Move::new(d, Color::Apple))
        .ok_or(StrategyError::Terminal)
}

/// Uniform choice over the legal moves.
pub fn random_move(state: &GameState, rng: &mut impl Rng) -> Result<Move, StrategyError> {
    let moves = state.legal_moves();
    if moves.is_empty() {
        return Err(StrategyError::Terminal);
    }
    Ok(moves[rng.gen_range(0..moves.len())])
}

pub fn first_legal_move(state: &GameState) -> Result<Move, StrategyError> {
    state
        .legal_moves()
        .first()
        .copied()
        .ok_or(StrategyError::Terminal)
}

pub struct RandomPlayer {
    side: Player,
    rng: ChaCha8Rng,
}

impl RandomPlayer {
    pub fn new(side: Player, seed: u64) -> Self {
        RandomPlayer {
            side,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Strategy for RandomPlayer {
    fn side(&self) -> Player {
        self.side
    }

    fn choose_move(&mut self, state: &GameState, _: Option<Move>) -> Result<Move, StrategyError> {
        ensure_turn(state, self.side)?;
        random_move(state, &mut self.rng)
    }
}

pub struct FirstLegal {
    pub side: Player,
}

impl Strategy for FirstLegal {
    fn side(&self) -> Player {
        self.side
    }

    fn choose_move(&mut self, state: &GameState, _: Option<Move>) -> Result<Move, StrategyError> {
        ensure_turn(state, self.side)?;
        first_legal_move(state)
    }
}

/// Brick accounting against a fixed score target `q`.
///
/// `b` counts B moves that raised the score, `h` A moves that raised it
/// (necessarily bricks) and `w` A bricks that did not. `b_flat` counts B
/// bricks that left the score unchanged, which only happens once the target
/// is secured or unreachable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLedger {
    pub b: u32,
    pub h: u32,
    pub w: u32,
    pub b_flat: u32,
}

impl RoundLedger {
    pub fn bricks_counted(&self) -> u32 {
        self.b + self.h + self.w + self.b_flat
    }
}

/// Incrementally maintains a [`RoundLedger`] over a game.
#[derive(Debug, Clone)]
pub struct LedgerTracker {
    q: u32,
    ledger: RoundLedger,
}

impl LedgerTracker {
    pub fn new(q: u32) -> Self {
        LedgerTracker {
            q,
            ledger: RoundLedger::default(),
        }
    }

    pub fn target_q(&self) -> u32 {
        self.q
    }

    pub fn ledger(&self) -> RoundLedger {
        self.ledger
    }

    /// Records `mv`, played from `before` and producing `after`.
    pub fn observe(&mut self, before: &GameState, mv: Move, after: &GameState) {
        let raised = game_score(after, self.q).total_score > game_score(before, self.q).total_score;
        match (before.to_move(), mv.color, raised) {
            (Player::B, _, true) => self.ledger.b += 1,
            (Player::B, Color::Brick, false) => self.ledger.b_flat += 1,
            (Player::A, _, true) => self.ledger.h += 1,
            (Player::A, Color::Brick, false) => self.ledger.w += 1,
            _ => {}
        }
    }
}

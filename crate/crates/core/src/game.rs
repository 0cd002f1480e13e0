//! Game instance definition, state transitions and terminal evaluation.
//!
//! Two parties place voters into `j` districts of odd capacity `2m + 1`.
//! Party B (bricks) moves first; either player may place a voter of either
//! color into any open district. A district is won by the party holding at
//! least `m + 1` of its voters once every position is filled.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised when constructing or advancing a game.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid config: need at least one district (j = {j})")]
    NoDistricts { j: u32 },
    #[error("invalid config: {n} bricks exceed the {v} voter positions")]
    TooManyBricks { n: u32, v: u32 },
    #[error("district {district} out of range (j = {j})")]
    DistrictOutOfRange { district: usize, j: u32 },
    #[error("district {district} full")]
    DistrictFull { district: usize },
    #[error("{color} pool exhausted")]
    PoolExhausted { color: Color },
    #[error("game is not over")]
    NotTerminal,
    #[error("invalid district layout: {0}")]
    InvalidLayout(String),
}

/// Voter color. Bricks belong to party B, apples to party A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Brick,
    Apple,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Brick => Color::Apple,
            Color::Apple => Color::Brick,
        }
    }

    /// The party whose voters carry this color.
    pub fn party(self) -> Player {
        match self {
            Color::Brick => Player::B,
            Color::Apple => Player::A,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Brick => "brick",
            Color::Apple => "apple",
        })
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "brick" | "b" => Ok(Color::Brick),
            "apple" | "a" => Ok(Color::Apple),
            other => Err(format!("unknown color `{other}`")),
        }
    }
}

/// The two parties. B is the brick party and always moves first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }

    /// The color this party wants to win districts with.
    pub fn color(self) -> Color {
        match self {
            Player::A => Color::Apple,
            Player::B => Color::Brick,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

impl FromStr for Player {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Player::A),
            "B" | "b" => Ok(Player::B),
            other => Err(format!("unknown player `{other}`")),
        }
    }
}

/// One game instance: `j` districts of capacity `2m + 1` and `n` bricks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub j: u32,
    pub m: u32,
    pub n: u32,
}

impl GameConfig {
    pub fn new(j: u32, m: u32, n: u32) -> Result<Self, GameError> {
        let config = GameConfig { j, m, n };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.j == 0 {
            return Err(GameError::NoDistricts { j: self.j });
        }
        if self.n > self.total_voters() {
            return Err(GameError::TooManyBricks {
                n: self.n,
                v: self.total_voters(),
            });
        }
        Ok(())
    }

    /// District capacity, `2m + 1`.
    pub fn capacity(&self) -> u32 {
        2 * self.m + 1
    }

    /// Votes needed to win a district, `m + 1`.
    pub fn majority(&self) -> u32 {
        self.m + 1
    }

    /// Total voters `v = j(2m + 1)`.
    pub fn total_voters(&self) -> u32 {
        self.j * self.capacity()
    }

    pub fn apples(&self) -> u32 {
        self.total_voters() - self.n
    }

    /// B is the minority iff there are strictly fewer bricks than apples.
    pub fn b_is_minority(&self) -> bool {
        self.n < self.apples()
    }
}

impl fmt::Display for GameConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j={} m={} n={}", self.j, self.m, self.n)
    }
}

/// Voters placed in one district so far.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct DistrictState {
    pub bricks: u32,
    pub apples: u32,
}

/// Who is ahead in a district.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistrictStatus {
    BrickAhead,
    AppleAhead,
    Tied,
}

impl DistrictState {
    pub fn new(bricks: u32, apples: u32) -> Self {
        DistrictState { bricks, apples }
    }

    pub fn filled(&self) -> u32 {
        self.bricks + self.apples
    }

    pub fn count(&self, color: Color) -> u32 {
        match color {
            Color::Brick => self.bricks,
            Color::Apple => self.apples,
        }
    }

    pub fn status(&self) -> DistrictStatus {
        use std::cmp::Ordering::*;
        match self.bricks.cmp(&self.apples) {
            Greater => DistrictStatus::BrickAhead,
            Less => DistrictStatus::AppleAhead,
            Equal => DistrictStatus::Tied,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.filled() == 0
    }

    pub fn is_tied(&self) -> bool {
        self.bricks == self.apples
    }

    pub fn is_open(&self, m: u32) -> bool {
        self.filled() < 2 * m + 1
    }

    pub fn open_spaces(&self, m: u32) -> u32 {
        (2 * m + 1).saturating_sub(self.filled())
    }

    /// B has secured the district (at least `m + 1` bricks).
    pub fn won_by_b(&self, m: u32) -> bool {
        self.bricks > m
    }

    /// A has secured the district (at least `m + 1` apples).
    pub fn won_by_a(&self, m: u32) -> bool {
        self.apples > m
    }

    fn add(&mut self, color: Color) {
        match color {
            Color::Brick => self.bricks += 1,
            Color::Apple => self.apples += 1,
        }
    }
}

/// A placement of one voter by the player to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub district: usize,
    pub color: Color,
}

impl Move {
    pub fn new(district: usize, color: Color) -> Self {
        Move { district, color }
    }

    pub fn brick(district: usize) -> Self {
        Move::new(district, Color::Brick)
    }

    pub fn apple(district: usize) -> Self {
        Move::new(district, Color::Apple)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->d{}", self.color, self.district)
    }
}

/// Final district tally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub b_districts_won: u32,
    pub a_districts_won: u32,
}

/// Immutable snapshot of a game in progress. Transitions build a new state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    config: GameConfig,
    districts: Vec<DistrictState>,
    bricks_remaining: u32,
    apples_remaining: u32,
    move_count: u32,
}

impl GameState {
    pub fn new(config: GameConfig) -> Result<Self, GameError> {
        config.validate()?;
        Ok(GameState {
            config,
            districts: vec![DistrictState::default(); config.j as usize],
            bricks_remaining: config.n,
            apples_remaining: config.apples(),
            move_count: 0,
        })
    }

    /// Builds a state from explicit district contents. Pools and move count
    /// are derived from the placed voters.
    pub fn from_districts(
        config: GameConfig,
        districts: Vec<DistrictState>,
    ) -> Result<Self, GameError> {
        config.validate()?;
        if districts.len() != config.j as usize {
            return Err(GameError::InvalidLayout(format!(
                "expected {} districts, got {}",
                config.j,
                districts.len()
            )));
        }
        if let Some((i, _)) = districts
            .iter()
            .enumerate()
            .find(|(_, d)| d.filled() > config.capacity())
        {
            return Err(GameError::InvalidLayout(format!(
                "district {i} exceeds capacity {}",
                config.capacity()
            )));
        }
        let bricks: u32 = districts.iter().map(|d| d.bricks).sum();
        let apples: u32 = districts.iter().map(|d| d.apples).sum();
        if bricks > config.n || apples > config.apples() {
            return Err(GameError::InvalidLayout(format!(
                "placed {bricks} bricks / {apples} apples, pools are {} / {}",
                config.n,
                config.apples()
            )));
        }
        Ok(GameState {
            config,
            districts,
            bricks_remaining: config.n - bricks,
            apples_remaining: config.apples() - apples,
            move_count: bricks + apples,
        })
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn districts(&self) -> &[DistrictState] {
        &self.districts
    }

    pub fn district(&self, index: usize) -> Option<&DistrictState> {
        self.districts.get(index)
    }

    pub fn bricks_remaining(&self) -> u32 {
        self.bricks_remaining
    }

    pub fn apples_remaining(&self) -> u32 {
        self.apples_remaining
    }

    pub fn remaining(&self, color: Color) -> u32 {
        match color {
            Color::Brick => self.bricks_remaining,
            Color::Apple => self.apples_remaining,
        }
    }

    pub fn move_count(&self) -> u32 {
        self.move_count
    }

    /// B moves on even move counts.
    pub fn to_move(&self) -> Player {
        if self.move_count % 2 == 0 {
            Player::B
        } else {
            Player::A
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.move_count == self.config.total_voters()
    }

    pub fn open_districts(&self) -> impl Iterator<Item = usize> + '_ {
        let m = self.config.m;
        self.districts
            .iter()
            .enumerate()
            .filter(move |(_, d)| d.is_open(m))
            .map(|(i, _)| i)
    }

    /// Open districts crossed with colors that still have voters, in
    /// district order with bricks before apples.
    pub fn legal_moves(&self) -> Vec<Move> {
        let colors: Vec<Color> = [Color::Brick, Color::Apple]
            .into_iter()
            .filter(|&c| self.remaining(c) > 0)
            .collect();
        self.open_districts()
            .flat_map(|d| colors.iter().map(move |&c| Move::new(d, c)))
            .collect()
    }

    pub fn check_move(&self, mv: Move) -> Result<(), GameError> {
        let district = self
            .districts
            .get(mv.district)
            .ok_or(GameError::DistrictOutOfRange {
                district: mv.district,
                j: self.config.j,
            })?;
        if !district.is_open(self.config.m) {
            return Err(GameError::DistrictFull {
                district: mv.district,
            });
        }
        if self.remaining(mv.color) == 0 {
            return Err(GameError::PoolExhausted { color: mv.color });
        }
        Ok(())
    }

    pub fn is_legal(&self, mv: Move) -> bool {
        self.check_move(mv).is_ok()
    }

    /// Returns the successor state; `self` is left untouched.
    pub fn apply_move(&self, mv: Move) -> Result<GameState, GameError> {
        self.check_move(mv)?;
        let mut next = self.clone();
        next.districts[mv.district].add(mv.color);
        match mv.color {
            Color::Brick => next.bricks_remaining -= 1,
            Color::Apple => next.apples_remaining -= 1,
        }
        next.move_count += 1;
        Ok(next)
    }

    /// Replays a move list from the opening position.
    pub fn replay<'a>(
        config: GameConfig,
        moves: impl IntoIterator<Item = &'a Move>,
    ) -> Result<GameState, GameError> {
        moves
            .into_iter()
            .try_fold(GameState::new(config)?, |state, &mv| state.apply_move(mv))
    }

    /// Districts B has already secured, terminal or not.
    pub fn b_secured(&self) -> u32 {
        let m = self.config.m;
        self.districts.iter().filter(|d| d.won_by_b(m)).count() as u32
    }

    pub fn a_secured(&self) -> u32 {
        let m = self.config.m;
        self.districts.iter().filter(|d| d.won_by_a(m)).count() as u32
    }

    pub fn outcome(&self) -> Result<Outcome, GameError> {
        if !self.is_terminal() {
            return Err(GameError::NotTerminal);
        }
        let q = self.b_secured();
        Ok(Outcome {
            b_districts_won: q,
            a_districts_won: self.config.j - q,
        })
    }

    /// Filled brick "columns": the smallest brick count over all districts.
    pub fn full_brick_columns(&self) -> u32 {
        self.districts.iter().map(|d| d.bricks).min().unwrap_or(0)
    }
}

/// Convenience wrapper for [`GameState::new`].
pub fn new_game(config: GameConfig) -> Result<GameState, GameError> {
    GameState::new(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(j: u32, m: u32, n: u32) -> GameConfig {
        GameConfig::new(j, m, n).unwrap()
    }

    #[test]
    fn new_game_matches_figure_one_config() {
        let state = new_game(cfg(4, 5, 19)).unwrap();
        assert_eq!(state.districts().len(), 4);
        assert_eq!(state.config().capacity(), 11);
        assert_eq!(state.bricks_remaining(), 19);
        assert_eq!(state.apples_remaining(), 44 - 19);
        assert_eq!(state.to_move(), Player::B);
        assert!(state.districts().iter().all(DistrictState::is_empty));
    }

    #[test]
    fn smallest_game() {
        let state = new_game(cfg(1, 0, 1)).unwrap();
        assert_eq!(state.config().capacity(), 1);
        assert_eq!(state.legal_moves(), vec![Move::brick(0)]);
    }

    #[test]
    fn config_errors() {
        assert_eq!(
            GameConfig::new(2, 1, 7),
            Err(GameError::TooManyBricks { n: 7, v: 6 })
        );
        assert_eq!(
            GameConfig::new(0, 1, 0),
            Err(GameError::NoDistricts { j: 0 })
        );
    }

    #[test]
    fn legal_moves_full_product() {
        let state = new_game(cfg(2, 1, 3)).unwrap();
        assert_eq!(state.legal_moves().len(), 4);
    }

    #[test]
    fn legal_moves_without_bricks() {
        let state = GameState::from_districts(
            cfg(2, 1, 1),
            vec![DistrictState::new(1, 0), DistrictState::default()],
        )
        .unwrap();
        assert_eq!(state.bricks_remaining(), 0);
        assert_eq!(state.legal_moves(), vec![Move::apple(0), Move::apple(1)]);
    }

    #[test]
    fn first_move_flips_turn() {
        let state = new_game(cfg(2, 1, 3)).unwrap();
        let next = state.apply_move(Move::brick(0)).unwrap();
        assert_eq!(next.districts()[0], DistrictState::new(1, 0));
        assert_eq!(next.bricks_remaining(), 2);
        assert_eq!(next.to_move(), Player::A);
        // pure transition
        assert_eq!(state.move_count(), 0);
        assert_eq!(state.districts()[0], DistrictState::default());
    }

    #[test]
    fn illegal_moves_are_distinct() {
        let config = cfg(2, 1, 3);
        let full = GameState::from_districts(
            config,
            vec![DistrictState::new(2, 1), DistrictState::default()],
        )
        .unwrap();
        assert_eq!(
            full.apply_move(Move::brick(0)),
            Err(GameError::DistrictFull { district: 0 })
        );
        assert_eq!(
            full.apply_move(Move::brick(2)),
            Err(GameError::DistrictOutOfRange { district: 2, j: 2 })
        );
        let no_apples = GameState::from_districts(
            config,
            vec![DistrictState::new(0, 2), DistrictState::new(0, 1)],
        )
        .unwrap();
        assert_eq!(
            no_apples.apply_move(Move::apple(1)),
            Err(GameError::PoolExhausted {
                color: Color::Apple
            })
        );
    }

    #[test]
    fn outcome_counts_brick_majorities() {
        let config = cfg(2, 1, 3);
        let split = GameState::from_districts(
            config,
            vec![DistrictState::new(2, 1), DistrictState::new(1, 2)],
        )
        .unwrap();
        assert_eq!(split.outcome().unwrap().b_districts_won, 1);
        assert_eq!(split.outcome().unwrap().a_districts_won, 1);

        let apples =
            GameState::from_districts(cfg(2, 1, 0), vec![DistrictState::new(0, 3); 2]).unwrap();
        assert_eq!(apples.outcome().unwrap().b_districts_won, 0);

        assert_eq!(
            new_game(config).unwrap().outcome(),
            Err(GameError::NotTerminal)
        );
    }

    #[test]
    fn color_and_player_parse() {
        assert_eq!("brick".parse::<Color>(), Ok(Color::Brick));
        assert_eq!("Apple".parse::<Color>(), Ok(Color::Apple));
        assert_eq!("A".parse::<Player>(), Ok(Player::A));
        assert!("x".parse::<Player>().is_err());
    }
}

//! Exact game values by memoized minimax.
//!
//! B maximizes the number of districts it finally wins, A minimizes it.
//! Voters of one color and districts are interchangeable, so positions are
//! keyed by the sorted multiset of district contents and children are
//! generated once per distinct district content. Search uses fail-soft
//! alpha-beta with a bounded transposition table; the static bounds
//! `[districts B has secured, j - districts A has secured]` cut branches
//! early.
//!
//! With one side fixed to a deterministic strategy the symmetry no longer
//! holds (strategies break ties by index), so positions are keyed by the raw
//! district order instead.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::game::{Color, DistrictState, GameConfig, GameError, GameState, Move, Player};
use crate::strategy::{Strategy, StrategyError, StrategyKind, StrategySpec};

/// Districts and capacity are packed four bits per count into a `u128` key.
pub const MAX_DISTRICTS: usize = 15;
pub const MAX_CAPACITY: u32 = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search budget exceeded after {nodes} nodes ({table} table entries)")]
    BudgetExceeded { nodes: u64, table: usize },
    #[error("game too large for the exact solver (j = {j}, capacity = {capacity})")]
    TooLarge { j: u32, capacity: u32 },
    #[error("position is terminal")]
    Terminal,
    #[error("cannot fix non-deterministic strategy {0}")]
    NondeterministicStrategy(StrategyKind),
    #[error("state belongs to a different game ({0})")]
    ConfigMismatch(GameConfig),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub pruning: bool,
    pub node_limit: u64,
    pub table_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            pruning: true,
            node_limit: 200_000_000,
            table_limit: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameValue {
    /// Districts B wins under the solved regime.
    pub value: u32,
    pub principal_move: Option<Move>,
    pub nodes_expanded: u64,
    pub table_size: usize,
}

#[derive(Debug, Clone, Copy)]
enum Bound {
    Exact,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    value: i32,
    bound: Bound,
}

/// Compact position: one byte per district, bricks in the high nibble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    cells: [u8; MAX_DISTRICTS],
    bricks_left: u8,
    apples_left: u8,
    placed: u16,
}

impl Pos {
    fn bricks(cell: u8) -> u32 {
        u32::from(cell >> 4)
    }

    fn apples(cell: u8) -> u32 {
        u32::from(cell & 0x0f)
    }

    fn from_state(state: &GameState) -> Pos {
        let mut cells = [0u8; MAX_DISTRICTS];
        for (c, d) in cells.iter_mut().zip(state.districts()) {
            *c = ((d.bricks as u8) << 4) | d.apples as u8;
        }
        Pos {
            cells,
            bricks_left: state.bricks_remaining() as u8,
            apples_left: state.apples_remaining() as u8,
            placed: state.move_count() as u16,
        }
    }

    fn to_state(self, config: GameConfig) -> GameState {
        let districts = self.cells[..config.j as usize]
            .iter()
            .map(|&c| DistrictState::new(Pos::bricks(c), Pos::apples(c)))
            .collect();
        GameState::from_districts(config, districts).expect("solver positions stay valid")
    }

    fn play(mut self, district: usize, color: Color) -> Pos {
        match color {
            Color::Brick => {
                self.cells[district] += 0x10;
                self.bricks_left -= 1;
            }
            Color::Apple => {
                self.cells[district] += 1;
                self.apples_left -= 1;
            }
        }
        self.placed += 1;
        self
    }

    fn key(&self, j: usize, canonical: bool) -> u128 {
        let mut cells = self.cells;
        if canonical {
            cells[..j].sort_unstable();
        }
        let mut key = u128::from(self.bricks_left);
        for &c in &cells[..j] {
            key = (key << 8) | u128::from(c);
        }
        key
    }
}

struct FixedSide {
    side: Player,
    strategy: Box<dyn Strategy>,
}

/// A solver bound to one game config. The transposition table is reused
/// across queries.
pub struct Solver {
    config: GameConfig,
    options: SolverOptions,
    fixed: Option<FixedSide>,
    table: HashMap<u128, Entry>,
    nodes: u64,
}

impl Solver {
    pub fn new(config: GameConfig, options: SolverOptions) -> Result<Self, SolveError> {
        config.validate()?;
        if config.j as usize > MAX_DISTRICTS || config.capacity() > MAX_CAPACITY {
            return Err(SolveError::TooLarge {
                j: config.j,
                capacity: config.capacity(),
            });
        }
        Ok(Solver {
            config,
            options,
            fixed: None,
            table: HashMap::new(),
            nodes: 0,
        })
    }

    /// Solver where `spec.side` always plays `spec`, and the other side
    /// plays optimally.
    pub fn with_fixed(
        config: GameConfig,
        options: SolverOptions,
        spec: &StrategySpec,
    ) -> Result<Self, SolveError> {
        if !spec.kind.is_deterministic() {
            return Err(SolveError::NondeterministicStrategy(spec.kind));
        }
        let strategy = spec.build(&config)?;
        let mut solver = Solver::new(config, options)?;
        solver.fixed = Some(FixedSide {
            side: spec.side,
            strategy,
        });
        Ok(solver)
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.nodes
    }

    pub fn table_size(&self) -> usize {
        self.table.len()
    }

    fn canonical(&self) -> bool {
        self.fixed.is_none()
    }

    fn check_state(&self, state: &GameState) -> Result<(), SolveError> {
        if *state.config() != self.config {
            return Err(SolveError::ConfigMismatch(*state.config()));
        }
        Ok(())
    }

    /// Value of the opening position with its best first move.
    pub fn solve(&mut self) -> Result<GameValue, SolveError> {
        let root = GameState::new(self.config)?;
        let value = self.value(&root)?;
        let principal_move = self.best_move(&root, None)?;
        Ok(GameValue {
            value,
            principal_move: Some(principal_move),
            nodes_expanded: self.nodes,
            table_size: self.table.len(),
        })
    }

    /// Exact value of `state`. With a fixed mirror strategy to move, use
    /// [`Solver::value_after`] so the strategy sees the opponent's move.
    pub fn value(&mut self, state: &GameState) -> Result<u32, SolveError> {
        self.value_after(state, None)
    }

    pub fn value_after(
        &mut self,
        state: &GameState,
        last_move: Option<Move>,
    ) -> Result<u32, SolveError> {
        self.check_state(state)?;
        let full = self.full_window();
        let v = self.search(Pos::from_state(state), last_move, full.0, full.1)?;
        Ok(v as u32)
    }

    /// Value computed without alpha-beta cutoffs; used to cross-check the
    /// pruned search. Canonical mode only.
    pub fn value_unpruned(&mut self, state: &GameState) -> Result<u32, SolveError> {
        self.check_state(state)?;
        let mut exact = HashMap::new();
        let v = self.search_exact(Pos::from_state(state), &mut exact)?;
        Ok(v as u32)
    }

    fn full_window(&self) -> (i32, i32) {
        (-1, self.config.j as i32 + 1)
    }

    /// A move attaining the value of `state`; the lowest district index wins
    /// ties, bricks before apples. For the fixed side this is the
    /// strategy's move.
    pub fn best_move(
        &mut self,
        state: &GameState,
        last_move: Option<Move>,
    ) -> Result<Move, SolveError> {
        self.check_state(state)?;
        if state.is_terminal() {
            return Err(SolveError::Terminal);
        }
        let mover = state.to_move();
        if let Some(fixed) = self.fixed.as_mut().filter(|f| f.side == mover) {
            return Ok(fixed.strategy.choose_move(state, last_move)?);
        }
        let pos = Pos::from_state(state);
        let full = self.full_window();
        let mut seen: HashMap<(u8, Color), i32> = HashMap::new();
        let mut best: Option<(Move, i32)> = None;
        for mv in state.legal_moves() {
            let class = (pos.cells[mv.district], mv.color);
            let value = match (self.canonical(), seen.get(&class)) {
                (true, Some(&v)) => v,
                _ => {
                    let child = pos.play(mv.district, mv.color);
                    let v = self.search(child, Some(mv), full.0, full.1)?;
                    seen.insert(class, v);
                    v
                }
            };
            let better = match best {
                None => true,
                Some((_, b)) => match mover {
                    Player::B => value > b,
                    Player::A => value < b,
                },
            };
            if better {
                best = Some((mv, value));
            }
        }
        Ok(best.ok_or(SolveError::Terminal)?.0)
    }

    /// Best play for both sides from `state` to the end of the game.
    pub fn principal_variation(&mut self, state: &GameState) -> Result<Vec<Move>, SolveError> {
        let mut line = Vec::new();
        let mut state = state.clone();
        let mut last = None;
        while !state.is_terminal() {
            let mv = self.best_move(&state, last)?;
            state = state.apply_move(mv)?;
            line.push(mv);
            last = Some(mv);
        }
        Ok(line)
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes > self.options.node_limit {
            return Err(SolveError::BudgetExceeded {
                nodes: self.nodes,
                table: self.table.len(),
            });
        }
        Ok(())
    }

    fn store(&mut self, key: u128, entry: Entry) -> Result<(), SolveError> {
        if self.table.len() >= self.options.table_limit && !self.table.contains_key(&key) {
            return Err(SolveError::BudgetExceeded {
                nodes: self.nodes,
                table: self.table.len(),
            });
        }
        self.table.insert(key, entry);
        Ok(())
    }

    /// `(secured by B, j - secured by A)`, or the exact value when it is
    /// already determined.
    fn static_bounds(&self, pos: &Pos) -> (i32, i32) {
        let j = self.config.j as usize;
        let m = self.config.m;
        let cells = &pos.cells[..j];
        let won_b = cells.iter().filter(|&&c| Pos::bricks(c) > m).count() as i32;
        let won_a = cells.iter().filter(|&&c| Pos::apples(c) > m).count() as i32;
        if pos.bricks_left == 0 {
            // undecided districts can only fill with apples
            return (won_b, won_b);
        }
        if pos.apples_left == 0 {
            return (j as i32 - won_a, j as i32 - won_a);
        }
        (won_b, j as i32 - won_a)
    }

    /// Child moves, one per distinct district content in canonical mode.
    fn children(&self, pos: &Pos, mover: Player) -> Vec<(usize, Color)> {
        let j = self.config.j as usize;
        let cap = self.config.capacity();
        let own = mover.color();
        let colors = [own, own.opposite()];
        let mut out = Vec::with_capacity(2 * j);
        for color in colors {
            let left = match color {
                Color::Brick => pos.bricks_left,
                Color::Apple => pos.apples_left,
            };
            if left == 0 {
                continue;
            }
            let mut seen = [false; 256];
            for (i, &c) in pos.cells[..j].iter().enumerate() {
                if Pos::bricks(c) + Pos::apples(c) >= cap {
                    continue;
                }
                if self.canonical() {
                    if seen[c as usize] {
                        continue;
                    }
                    seen[c as usize] = true;
                }
                out.push((i, color));
            }
        }
        out
    }

    fn search(
        &mut self,
        pos: Pos,
        last_move: Option<Move>,
        alpha: i32,
        beta: i32,
    ) -> Result<i32, SolveError> {
        self.tick()?;
        let (lo, hi) = self.static_bounds(&pos);
        if lo == hi {
            return Ok(lo);
        }
        let mover = if pos.placed % 2 == 0 {
            Player::B
        } else {
            Player::A
        };

        if let Some(fixed) = self.fixed.as_mut().filter(|f| f.side == mover) {
            let state = pos.to_state(self.config);
            let mv = fixed.strategy.choose_move(&state, last_move)?;
            state.check_move(mv)?;
            return self.search(pos.play(mv.district, mv.color), Some(mv), alpha, beta);
        }

        let pruning = self.options.pruning;
        if pruning {
            if hi <= alpha {
                return Ok(hi);
            }
            if lo >= beta {
                return Ok(lo);
            }
        }

        let key = pos.key(self.config.j as usize, self.canonical());
        let (mut alpha, mut beta) = (alpha, beta);
        if let Some(e) = self.table.get(&key).copied() {
            match e.bound {
                Bound::Exact => return Ok(e.value),
                Bound::Lower => {
                    if e.value >= beta {
                        return Ok(e.value);
                    }
                    alpha = alpha.max(e.value);
                }
                Bound::Upper => {
                    if e.value <= alpha {
                        return Ok(e.value);
                    }
                    beta = beta.min(e.value);
                }
            }
        }
        if !pruning {
            let full = self.full_window();
            alpha = full.0;
            beta = full.1;
        }

        let (window_alpha, window_beta) = (alpha, beta);
        let mut best: Option<i32> = None;
        for (district, color) in self.children(&pos, mover) {
            let child = pos.play(district, color);
            let v = self.search(child, Some(Move::new(district, color)), alpha, beta)?;
            match mover {
                Player::B => {
                    best = Some(best.map_or(v, |b| b.max(v)));
                    alpha = alpha.max(v);
                    if pruning && (v >= beta || v >= hi) {
                        break;
                    }
                }
                Player::A => {
                    best = Some(best.map_or(v, |b| b.min(v)));
                    beta = beta.min(v);
                    if pruning && (v <= alpha || v <= lo) {
                        break;
                    }
                }
            }
        }
        let best = best.expect("undecided position has a legal move");
        let bound = if best <= window_alpha {
            Bound::Upper
        } else if best >= window_beta {
            Bound::Lower
        } else {
            Bound::Exact
        };
        self.store(key, Entry { value: best, bound })?;
        Ok(best)
    }

    fn search_exact(&mut self, pos: Pos, memo: &mut HashMap<u128, i32>) -> Result<i32, SolveError> {
        self.tick()?;
        if pos.placed as u32 == self.config.total_voters() {
            return Ok(self.static_bounds(&pos).0);
        }
        let key = pos.key(self.config.j as usize, true);
        if let Some(&v) = memo.get(&key) {
            return Ok(v);
        }
        let mover = if pos.placed % 2 == 0 {
            Player::B
        } else {
            Player::A
        };
        let mut values = Vec::new();
        for (district, color) in self.children(&pos, mover) {
            values.push(self.search_exact(pos.play(district, color), memo)?);
        }
        let v = match mover {
            Player::B => values.into_iter().max(),
            Player::A => values.into_iter().min(),
        }
        .expect("non-terminal position has a legal move");
        memo.insert(key, v);
        Ok(v)
    }
}

/// Both sides optimal from the opening position.
pub fn solve(config: &GameConfig) -> Result<GameValue, SolveError> {
    solve_with(config, SolverOptions::default())
}

pub fn solve_with(config: &GameConfig, options: SolverOptions) -> Result<GameValue, SolveError> {
    Solver::new(*config, options)?.solve()
}

/// The side in `strategy.side` plays `strategy`; the other side plays
/// optimally. The value is still B's district count.
pub fn solve_with_fixed(
    config: &GameConfig,
    fixed_side: Player,
    strategy: &StrategySpec,
) -> Result<GameValue, SolveError> {
    let spec = StrategySpec {
        side: fixed_side,
        ..*strategy
    };
    Solver::with_fixed(*config, SolverOptions::default(), &spec)?.solve()
}

/// A move achieving the minimax value of `state`.
pub fn best_move(state: &GameState) -> Result<Move, SolveError> {
    best_move_with(state, SolverOptions::default())
}

pub fn best_move_with(state: &GameState, options: SolverOptions) -> Result<Move, SolveError> {
    if state.is_terminal() {
        return Err(SolveError::Terminal);
    }
    Solver::new(*state.config(), options)?.best_move(state, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(j: u32, m: u32, n: u32) -> GameConfig {
        GameConfig::new(j, m, n).unwrap()
    }

    #[test]
    fn tiny_values() {
        assert_eq!(solve(&cfg(2, 1, 3)).unwrap().value, 1);
        assert_eq!(solve(&cfg(1, 0, 1)).unwrap().value, 1);
        assert_eq!(solve(&cfg(2, 0, 1)).unwrap().value, 1);
        assert_eq!(solve(&cfg(1, 0, 0)).unwrap().value, 0);
        assert_eq!(solve(&cfg(3, 1, 9)).unwrap().value, 3);
    }

    #[test]
    fn best_move_smallest_game() {
        let s = GameState::new(cfg(1, 0, 1)).unwrap();
        assert_eq!(best_move(&s), Ok(Move::brick(0)));
        let done = s.apply_move(Move::brick(0)).unwrap();
        assert_eq!(best_move(&done), Err(SolveError::Terminal));
    }

    #[test]
    fn best_move_preserves_value() {
        let config = cfg(2, 1, 3);
        let mut solver = Solver::new(config, SolverOptions::default()).unwrap();
        let root = GameState::new(config).unwrap();
        let mv = solver.best_move(&root, None).unwrap();
        let after = root.apply_move(mv).unwrap();
        assert_eq!(solver.value(&after).unwrap(), 1);
    }

    #[test]
    fn pruned_matches_unpruned() {
        for (j, m) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            for n in 0..=j * (2 * m + 1) {
                let config = cfg(j, m, n);
                let mut s = Solver::new(config, SolverOptions::default()).unwrap();
                let root = GameState::new(config).unwrap();
                assert_eq!(s.value(&root).unwrap(), s.value_unpruned(&root).unwrap());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let options = SolverOptions {
            node_limit: 10,
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_with(&cfg(4, 2, 8), options),
            Err(SolveError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            solve(&cfg(10, 100, 500)),
            Err(SolveError::TooLarge { .. })
        ));
    }

    #[test]
    fn fixed_strategies() {
        let ghost = StrategySpec::ghost_minority(Some(1));
        assert!(
            solve_with_fixed(&cfg(2, 1, 4), Player::B, &ghost)
                .unwrap()
                .value
                >= 1
        );
        let crack = StrategySpec::crack_majority();
        assert_eq!(
            solve_with_fixed(&cfg(2, 1, 1), Player::A, &crack)
                .unwrap()
                .value,
            0
        );
        let mirror = StrategySpec::mirror();
        assert_eq!(
            solve_with_fixed(&cfg(2, 1, 3), Player::A, &mirror)
                .unwrap()
                .value,
            1
        );
        let random = StrategySpec::random(Player::A, 3);
        assert_eq!(
            solve_with_fixed(&cfg(2, 1, 3), Player::A, &random),
            Err(SolveError::NondeterministicStrategy(StrategyKind::Random))
        );
    }
}

//! Turn-by-turn play against an engine strategy.
//!
//! A [`SessionStore`] holds live games. Each accepted human move is answered
//! by exactly one engine move. Snapshots carry everything a renderer needs:
//! per-voter placement history, pools, the score toward the panel target,
//! fairness figures, a legality mask and display ordering.
//!
//! With a journal directory, every session is mirrored to
//! `<dir>/<id>.jsonl` in the replay format and restored on startup by
//! replaying the moves (engine included, so seeded engines resume with the
//! same random stream).

pub mod http;

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::experiments::replay::{
    header_line, ledger_q, move_line, Replay, ReplayHeader, ReplayMove, SessionMeta,
};
use crate::game::{Color, GameConfig, GameError, GameState, Move, Outcome, Player};
use crate::metrics::{efficiency_gap, format_ratio, proportional_p};
use crate::scoring::game_score;
use crate::solver::{SolveError, Solver, SolverOptions};
use crate::strategy::{
    crack_majority_move, crack_parameters, default_q, ghost_minority_move, Strategy, StrategyError,
    StrategyKind, StrategySpec,
};

/// Node budget for exact hints.
pub const HINT_NODE_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    DistrictFull,
    PoolExhausted,
    NotYourTurn,
    GameOver,
    NotFound,
    BadDistrict,
    InvalidConfig,
    InvalidStrategy,
    EngineFailure,
    Journal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{code:?}: {message}")]
pub struct SessionError {
    pub code: ErrorCode,
    pub message: String,
}

impl SessionError {
    fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        SessionError {
            code,
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> Self {
        SessionError::new(ErrorCode::NotFound, format!("no session `{id}`"))
    }

    fn journal(e: impl std::fmt::Display) -> Self {
        SessionError::new(ErrorCode::Journal, e.to_string())
    }
}

impl From<GameError> for SessionError {
    fn from(e: GameError) -> Self {
        let code = match e {
            GameError::DistrictFull { .. } => ErrorCode::DistrictFull,
            GameError::PoolExhausted { .. } => ErrorCode::PoolExhausted,
            GameError::DistrictOutOfRange { .. } => ErrorCode::BadDistrict,
            GameError::NotTerminal => ErrorCode::GameOver,
            _ => ErrorCode::InvalidConfig,
        };
        SessionError::new(code, e.to_string())
    }
}

/// Engine choice in a create request; the engine plays the side the human
/// does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineRequest {
    pub kind: StrategyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreateRequest {
    pub j: u32,
    pub m: u32,
    pub n: u32,
    pub human_side: Player,
    pub engine: EngineRequest,
    /// Target for the score panel; see [`default_score_q`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_q: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRequest {
    pub district: usize,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hint {
    pub district: usize,
    pub color: Color,
    /// `exact` or `strategy:<name>`.
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub i: u32,
    pub player: Player,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistrictView {
    pub bricks: u32,
    pub apples: u32,
    pub placed: Vec<Placement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pools {
    pub bricks: u32,
    pub apples: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoreView {
    pub q: u32,
    pub total: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairnessView {
    pub p: u32,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub e: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LegalCell {
    pub brick: bool,
    pub apple: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutlineColor {
    /// Brick placed by A.
    Green,
    /// Apple placed by B.
    Red,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Outline {
    pub i: u32,
    pub district: usize,
    pub outline: OutlineColor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Display {
    /// Districts by brick count (descending), then free seats (ascending),
    /// then index.
    pub row_order: Vec<usize>,
    pub outlines: Vec<Outline>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub id: String,
    pub config: GameConfig,
    pub human_side: Player,
    pub engine: String,
    pub districts: Vec<DistrictView>,
    pub pools: Pools,
    pub to_move: Player,
    pub move_count: u32,
    pub terminal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    pub score: ScoreView,
    pub fairness: FairnessView,
    pub legal: Vec<LegalCell>,
    pub display: Display,
}

/// Panel target: `default_q` when the human plays B, otherwise the
/// cracking strategy's `q`.
pub fn default_score_q(config: &GameConfig, human_side: Player) -> u32 {
    match human_side {
        Player::B => default_q(config),
        Player::A => crack_parameters(config).q,
    }
}

pub fn snapshot(
    id: &str,
    state: &GameState,
    moves: &[Move],
    human_side: Player,
    engine: &StrategySpec,
    score_q: u32,
) -> Snapshot {
    let config = *state.config();
    let mut districts: Vec<DistrictView> = state
        .districts()
        .iter()
        .map(|d| DistrictView {
            bricks: d.bricks,
            apples: d.apples,
            placed: Vec::new(),
        })
        .collect();
    let mut outlines = Vec::new();
    for (i, mv) in moves.iter().enumerate() {
        let i = i as u32;
        let player = if i % 2 == 0 { Player::B } else { Player::A };
        districts[mv.district].placed.push(Placement {
            i,
            player,
            color: mv.color,
        });
        if mv.color.party() != player {
            outlines.push(Outline {
                i,
                district: mv.district,
                outline: match player {
                    Player::A => OutlineColor::Green,
                    Player::B => OutlineColor::Red,
                },
            });
        }
    }

    let mut row_order: Vec<usize> = (0..state.districts().len()).collect();
    row_order.sort_by_key(|&i| {
        let d = state.districts()[i];
        (
            std::cmp::Reverse(d.bricks),
            config.capacity() - d.filled(),
            i,
        )
    });

    let report = game_score(state, score_q);
    let legal = (0..state.districts().len())
        .map(|i| LegalCell {
            brick: state.is_legal(Move::brick(i)),
            apple: state.is_legal(Move::apple(i)),
        })
        .collect();

    Snapshot {
        id: id.to_string(),
        config,
        human_side,
        engine: engine.to_string(),
        districts,
        pools: Pools {
            bricks: state.bricks_remaining(),
            apples: state.apples_remaining(),
        },
        to_move: state.to_move(),
        move_count: state.move_count(),
        terminal: state.is_terminal(),
        outcome: state.outcome().ok(),
        score: ScoreView {
            q: score_q,
            total: report.total_score,
            u: report.min_score_u,
            witness: report.witness,
        },
        fairness: FairnessView {
            p: proportional_p(&config),
            e: efficiency_gap(state).ok().map(|e| format_ratio(&e)),
        },
        legal,
        display: Display {
            row_order,
            outlines,
        },
    }
}

pub struct Session {
    id: String,
    state: GameState,
    human_side: Player,
    engine_spec: StrategySpec,
    engine: Box<dyn Strategy>,
    moves: Vec<Move>,
    score_q: u32,
    created: u64,
    updated: u64,
    journal: Option<File>,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl Session {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn human_side(&self) -> Player {
        self.human_side
    }

    pub fn engine_spec(&self) -> &StrategySpec {
        &self.engine_spec
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn score_q(&self) -> u32 {
        self.score_q
    }

    /// Unix seconds.
    pub fn created(&self) -> u64 {
        self.created
    }

    pub fn updated(&self) -> u64 {
        self.updated
    }

    pub fn snapshot(&self) -> Snapshot {
        snapshot(
            &self.id,
            &self.state,
            &self.moves,
            self.human_side,
            &self.engine_spec,
            self.score_q,
        )
    }

    fn header(&self) -> ReplayHeader {
        let config = *self.state.config();
        let engine_label = self.engine_spec.to_string();
        let (b, a) = match self.human_side {
            Player::B => ("human".to_string(), engine_label),
            Player::A => (engine_label, "human".to_string()),
        };
        let engine_b = (self.human_side == Player::A).then_some(&self.engine_spec);
        ReplayHeader {
            seed: self.engine_spec.seed,
            lq: ledger_q(&config, engine_b),
            session: Some(SessionMeta {
                id: self.id.clone(),
                human_side: self.human_side,
                engine: self.engine_spec,
                score_q: self.score_q,
            }),
            ..ReplayHeader::new(config, b, a)
        }
    }

    pub fn replay(&self) -> Replay {
        Replay::from_moves(self.header(), &self.moves).expect("session moves are legal")
    }

    fn push(&mut self, mv: Move) -> Result<(), SessionError> {
        let record = ReplayMove {
            i: self.moves.len() as u32,
            p: self.state.to_move(),
            d: mv.district,
            c: mv.color,
        };
        self.state = self.state.apply_move(mv)?;
        self.moves.push(mv);
        self.updated = now();
        let footer = match (&self.journal, self.state.is_terminal()) {
            (Some(_), true) => self.replay().footer,
            _ => None,
        };
        if let Some(file) = &mut self.journal {
            writeln!(file, "{}", move_line(&record)).map_err(SessionError::journal)?;
            if let Some(footer) = footer {
                writeln!(file, "{}", serde_json::json!({ "out": footer }))
                    .map_err(SessionError::journal)?;
            }
        }
        Ok(())
    }

    fn engine_reply(&mut self) -> Result<(), SessionError> {
        if self.state.is_terminal() || self.state.to_move() == self.human_side {
            return Ok(());
        }
        let mv = self
            .engine
            .choose_move(&self.state, self.moves.last().copied())
            .map_err(|e| SessionError::new(ErrorCode::EngineFailure, e.to_string()))?;
        self.state
            .check_move(mv)
            .map_err(|e| SessionError::new(ErrorCode::EngineFailure, e.to_string()))?;
        self.push(mv)
    }

    pub fn play(&mut self, mv: Move) -> Result<Snapshot, SessionError> {
        if self.state.is_terminal() {
            return Err(SessionError::new(ErrorCode::GameOver, "game is over"));
        }
        if self.state.to_move() != self.human_side {
            return Err(SessionError::new(
                ErrorCode::NotYourTurn,
                format!("{} is to move", self.state.to_move()),
            ));
        }
        self.state.check_move(mv)?;
        self.push(mv)?;
        self.engine_reply()?;
        Ok(self.snapshot())
    }

    pub fn hint(&self) -> Result<Hint, SessionError> {
        if self.state.is_terminal() {
            return Err(SessionError::new(ErrorCode::GameOver, "game is over"));
        }
        if self.state.to_move() != self.human_side {
            return Err(SessionError::new(
                ErrorCode::NotYourTurn,
                "hints are for the human's turn",
            ));
        }
        hint_for(&self.state)
    }
}

/// Exact best move within [`HINT_NODE_LIMIT`], else the published strategy
/// for the side to move.
pub fn hint_for(state: &GameState) -> Result<Hint, SessionError> {
    let options = SolverOptions {
        node_limit: HINT_NODE_LIMIT,
        table_limit: HINT_NODE_LIMIT as usize,
        ..SolverOptions::default()
    };
    let exact = Solver::new(*state.config(), options).and_then(|mut s| s.best_move(state, None));
    let (mv, tag) = match exact {
        Ok(mv) => (mv, "exact".to_string()),
        Err(SolveError::BudgetExceeded { .. } | SolveError::TooLarge { .. }) => {
            let (kind, mv) = match state.to_move() {
                Player::B => (
                    StrategyKind::GhostMinority,
                    ghost_minority_move(state, default_q(state.config())),
                ),
                Player::A => (StrategyKind::CrackMajority, crack_majority_move(state)),
            };
            let mv = mv.map_err(|e| SessionError::new(ErrorCode::EngineFailure, e.to_string()))?;
            (mv, format!("strategy:{}", kind.name()))
        }
        Err(e) => return Err(SessionError::new(ErrorCode::EngineFailure, e.to_string())),
    };
    Ok(Hint {
        district: mv.district,
        color: mv.color,
        tag,
    })
}

pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    journal_dir: Option<PathBuf>,
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new()
    }
}

fn lock(session: &Mutex<Session>) -> std::sync::MutexGuard<'_, Session> {
    session
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn strategy_error(e: StrategyError) -> SessionError {
    match e {
        StrategyError::Game(g) => SessionError::new(ErrorCode::InvalidConfig, g.to_string()),
        other => SessionError::new(ErrorCode::InvalidStrategy, other.to_string()),
    }
}

impl SessionStore {
    pub fn new() -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            journal_dir: None,
        }
    }

    /// A store that journals to `dir`, restoring every session found there.
    pub fn with_journal(dir: impl Into<PathBuf>) -> Result<Self, SessionError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(SessionError::journal)?;
        let store = SessionStore {
            sessions: RwLock::new(HashMap::new()),
            journal_dir: Some(dir.clone()),
        };
        let mut entries: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(SessionError::journal)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        entries.sort();
        for path in entries {
            let session = rehydrate(&path)?;
            store.insert(session);
        }
        Ok(store)
    }

    fn insert(&self, session: Session) -> Arc<Mutex<Session>> {
        let id = session.id.clone();
        let entry = Arc::new(Mutex::new(session));
        self.sessions
            .write()
            .unwrap_or_else(|p| p.into_inner())
            .insert(id, entry.clone());
        entry
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sessions
            .read()
            .unwrap_or_else(|p| p.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::not_found(id))
    }

    pub fn len(&self) -> usize {
        self.sessions
            .read()
            .unwrap_or_else(|p| p.into_inner())
            .len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create_session(&self, request: &CreateRequest) -> Result<Snapshot, SessionError> {
        let config = GameConfig::new(request.j, request.m, request.n)
            .map_err(|e| SessionError::new(ErrorCode::InvalidConfig, e.to_string()))?;
        let engine_spec = StrategySpec {
            kind: request.engine.kind,
            side: request.human_side.other(),
            target_q: request.engine.q,
            seed: request.engine.seed,
        };
        let engine = engine_spec.build(&config).map_err(strategy_error)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let created = now();
        let mut session = Session {
            id,
            state: GameState::new(config)?,
            human_side: request.human_side,
            engine_spec,
            engine,
            moves: Vec::new(),
            score_q: request
                .score_q
                .unwrap_or_else(|| default_score_q(&config, request.human_side)),
            created,
            updated: created,
            journal: None,
        };
        if let Some(dir) = &self.journal_dir {
            let mut file =
                File::create(journal_path(dir, &session.id)).map_err(SessionError::journal)?;
            writeln!(file, "{}", header_line(&session.header())).map_err(SessionError::journal)?;
            session.journal = Some(file);
        }
        session.engine_reply()?;
        let snap = session.snapshot();
        self.insert(session);
        Ok(snap)
    }

    pub fn snapshot(&self, id: &str) -> Result<Snapshot, SessionError> {
        Ok(lock(&*self.get(id)?).snapshot())
    }

    pub fn post_move(&self, id: &str, mv: MoveRequest) -> Result<Snapshot, SessionError> {
        let session = self.get(id)?;
        let mut guard = lock(&session);
        guard.play(Move::new(mv.district, mv.color))
    }

    pub fn get_hint(&self, id: &str) -> Result<Hint, SessionError> {
        let session = self.get(id)?;
        let guard = lock(&session);
        guard.hint()
    }

    pub fn export_replay(&self, id: &str) -> Result<Replay, SessionError> {
        Ok(lock(&*self.get(id)?).replay())
    }

    pub fn delete(&self, id: &str) -> Result<(), SessionError> {
        let removed = self
            .sessions
            .write()
            .unwrap_or_else(|p| p.into_inner())
            .remove(id);
        if removed.is_none() {
            return Err(SessionError::not_found(id));
        }
        if let Some(dir) = &self.journal_dir {
            let path = journal_path(dir, id);
            if path.exists() {
                fs::remove_file(path).map_err(SessionError::journal)?;
            }
        }
        Ok(())
    }

    /// Runs `f` with the session locked.
    pub fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&Session) -> T,
    ) -> Result<T, SessionError> {
        Ok(f(&lock(&*self.get(id)?)))
    }
}

fn journal_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.jsonl"))
}

/// Rebuilds a session from its journal, driving the engine through its
/// recorded moves so its internal state matches.
fn rehydrate(path: &Path) -> Result<Session, SessionError> {
    let replay = Replay::read_from(path).map_err(SessionError::journal)?;
    let meta = replay.header.session.clone().ok_or_else(|| {
        SessionError::journal(format!("{}: not a session journal", path.display()))
    })?;
    let config = replay.header.cfg;
    let mut engine = meta.engine.build(&config).map_err(strategy_error)?;
    let mut state = GameState::new(config)?;
    let mut moves: Vec<Move> = Vec::with_capacity(replay.moves.len());
    for rec in &replay.moves {
        let mv = rec.as_move();
        if state.to_move() != meta.human_side {
            let engine_mv = engine
                .choose_move(&state, moves.last().copied())
                .map_err(|e| SessionError::journal(e.to_string()))?;
            if engine_mv != mv {
                return Err(SessionError::journal(format!(
                    "{}: engine diverged at move {}",
                    path.display(),
                    rec.i
                )));
            }
        }
        state = state.apply_move(mv)?;
        moves.push(mv);
    }
    let journal = OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(SessionError::journal)?;
    let stamp = now();
    Ok(Session {
        id: meta.id,
        state,
        human_side: meta.human_side,
        engine_spec: meta.engine,
        engine,
        moves,
        score_q: meta.score_q,
        created: stamp,
        updated: stamp,
        journal: Some(journal),
    })
}

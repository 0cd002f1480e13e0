//! Line-delimited game transcripts.
//!
//! One JSON object per line: a header (`cfg`, strategy labels, seed,
//! version), one `mv` line per placement and, for finished games, an `out`
//! footer with the outcome, efficiency gap, proportional share and brick
//! ledger.
//!
//! ```text
//! {"cfg":{"j":2,"m":1,"n":3},"b":"first-legal","a":"mirror","version":"0.1.0","lq":1}
//! {"mv":{"i":0,"p":"B","d":0,"c":"brick"}}
//! {"mv":{"i":1,"p":"A","d":1,"c":"apple"}}
//! ...
//! {"out":{"q":1,"E":"0/1","p":1,"b":2,"h":0,"w":0}}
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Color, GameConfig, GameError, GameState, Move, Player};
use crate::metrics::{efficiency_gap, format_ratio, proportional_p};
use crate::strategy::{default_q, LedgerTracker, StrategyKind, StrategySpec};

pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("replay has no header line")]
    MissingHeader,
    #[error("move {index}: expected index {expected}")]
    OutOfOrder { index: u32, expected: u32 },
    #[error("move {index}: recorded player {recorded}, but {actual} was to move")]
    WrongPlayer {
        index: u32,
        recorded: Player,
        actual: Player,
    },
    #[error("move {index}: {source}")]
    IllegalMove { index: u32, source: GameError },
    #[error("footer mismatch: recorded {recorded:?}, recomputed {recomputed:?}")]
    FooterMismatch {
        recorded: ReplayFooter,
        recomputed: Option<ReplayFooter>,
    },
    #[error("strategy label `{0}` cannot be re-simulated")]
    NotSimulable(String),
    #[error("re-simulation failed: {0}")]
    Simulation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Session bookkeeping carried by journaled replays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMeta {
    pub id: String,
    pub human_side: Player,
    pub engine: StrategySpec,
    pub score_q: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayHeader {
    pub cfg: GameConfig,
    /// Strategy label for B (`StrategySpec` text form, or `human`).
    pub b: String,
    pub a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
    /// Score target used for the brick ledger.
    pub lq: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<SessionMeta>,
}

impl ReplayHeader {
    pub fn new(cfg: GameConfig, b: impl Into<String>, a: impl Into<String>) -> Self {
        ReplayHeader {
            cfg,
            b: b.into(),
            a: a.into(),
            seed: None,
            version: FORMAT_VERSION.to_string(),
            lq: ledger_q(&cfg, None),
            session: None,
        }
    }

    /// Header for a game between two declared strategies.
    pub fn for_specs(cfg: GameConfig, spec_b: &StrategySpec, spec_a: &StrategySpec) -> Self {
        ReplayHeader {
            seed: spec_b.seed.or(spec_a.seed),
            lq: ledger_q(&cfg, Some(spec_b)),
            ..ReplayHeader::new(cfg, spec_b.to_string(), spec_a.to_string())
        }
    }
}

/// Ledger target: the minority strategy's own target when B plays it,
/// otherwise `default_q`, at least 1 and at most `j`.
pub fn ledger_q(config: &GameConfig, spec_b: Option<&StrategySpec>) -> u32 {
    let q = match spec_b {
        Some(spec) if spec.kind == StrategyKind::GhostMinority => {
            spec.target_q.unwrap_or_else(|| default_q(config))
        }
        _ => default_q(config),
    };
    q.clamp(1, config.j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayMove {
    pub i: u32,
    pub p: Player,
    pub d: usize,
    pub c: Color,
}

impl ReplayMove {
    pub fn as_move(&self) -> Move {
        Move::new(self.d, self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayFooter {
    pub q: u32,
    #[serde(rename = "E")]
    pub e: String,
    pub p: u32,
    pub b: u32,
    pub h: u32,
    pub w: u32,
}

#[derive(Serialize, Deserialize)]
struct MoveLine {
    mv: ReplayMove,
}

#[derive(Serialize, Deserialize)]
struct FooterLine {
    out: ReplayFooter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub header: ReplayHeader,
    pub moves: Vec<ReplayMove>,
    pub footer: Option<ReplayFooter>,
}

impl Replay {
    /// Builds a transcript from a move list, validating every move and
    /// adding the footer when the game is finished.
    pub fn from_moves(header: ReplayHeader, moves: &[Move]) -> Result<Replay, ReplayError> {
        let mut state = GameState::new(header.cfg)
            .map_err(|source| ReplayError::IllegalMove { index: 0, source })?;
        let mut recorded = Vec::with_capacity(moves.len());
        for (i, &mv) in moves.iter().enumerate() {
            recorded.push(ReplayMove {
                i: i as u32,
                p: state.to_move(),
                d: mv.district,
                c: mv.color,
            });
            state = state
                .apply_move(mv)
                .map_err(|source| ReplayError::IllegalMove {
                    index: i as u32,
                    source,
                })?;
        }
        let mut replay = Replay {
            header,
            moves: recorded,
            footer: None,
        };
        replay.footer = replay.compute_footer()?;
        Ok(replay)
    }

    pub fn moves(&self) -> impl Iterator<Item = Move> + '_ {
        self.moves.iter().map(ReplayMove::as_move)
    }

    /// Re-applies every move from the opening position, checking indices
    /// and turn order, and returns the final state.
    pub fn final_state(&self) -> Result<GameState, ReplayError> {
        let mut state = GameState::new(self.header.cfg)
            .map_err(|source| ReplayError::IllegalMove { index: 0, source })?;
        for (expected, mv) in self.moves.iter().enumerate() {
            let expected = expected as u32;
            if mv.i != expected {
                return Err(ReplayError::OutOfOrder {
                    index: mv.i,
                    expected,
                });
            }
            if mv.p != state.to_move() {
                return Err(ReplayError::WrongPlayer {
                    index: mv.i,
                    recorded: mv.p,
                    actual: state.to_move(),
                });
            }
            state = state
                .apply_move(mv.as_move())
                .map_err(|source| ReplayError::IllegalMove {
                    index: mv.i,
                    source,
                })?;
        }
        Ok(state)
    }

    /// Footer recomputed from the moves; `None` while the game is running.
    pub fn compute_footer(&self) -> Result<Option<ReplayFooter>, ReplayError> {
        let cfg = self.header.cfg;
        let mut ledger = LedgerTracker::new(self.header.lq);
        let mut state =
            GameState::new(cfg).map_err(|source| ReplayError::IllegalMove { index: 0, source })?;
        for mv in &self.moves {
            let next =
                state
                    .apply_move(mv.as_move())
                    .map_err(|source| ReplayError::IllegalMove {
                        index: mv.i,
                        source,
                    })?;
            ledger.observe(&state, mv.as_move(), &next);
            state = next;
        }
        let Ok(outcome) = state.outcome() else {
            return Ok(None);
        };
        let gap = efficiency_gap(&state).expect("terminal state has a gap");
        let l = ledger.ledger();
        Ok(Some(ReplayFooter {
            q: outcome.b_districts_won,
            e: format_ratio(&gap),
            p: proportional_p(&cfg),
            b: l.b,
            h: l.h,
            w: l.w,
        }))
    }

    /// Full consistency check: moves replay legally and the recorded footer
    /// (if any) matches the recomputed one.
    pub fn verify(&self) -> Result<GameState, ReplayError> {
        let state = self.final_state()?;
        let recomputed = self.compute_footer()?;
        if let Some(recorded) = &self.footer {
            if recomputed.as_ref() != Some(recorded) {
                return Err(ReplayError::FooterMismatch {
                    recorded: recorded.clone(),
                    recomputed,
                });
            }
        }
        Ok(state)
    }

    /// Runs the header's strategies again from scratch.
    pub fn resimulate(&self) -> Result<Replay, ReplayError> {
        let parse = |label: &str, side| {
            StrategySpec::parse(label, side).map_err(|_| ReplayError::NotSimulable(label.into()))
        };
        let spec_b = parse(&self.header.b, Player::B)?;
        let spec_a = parse(&self.header.a, Player::A)?;
        super::simulate(self.header.cfg, &spec_b, &spec_a)
            .map_err(|e| ReplayError::Simulation(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for &mv in &self.moves {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string(&MoveLine { mv }).expect("move serializes")
            );
        }
        if let Some(footer) = &self.footer {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string(&FooterLine {
                    out: footer.clone()
                })
                .expect("footer serializes")
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Replay, ReplayError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, first) = lines.next().ok_or(ReplayError::MissingHeader)?;
        let header: ReplayHeader = serde_json::from_str(first).map_err(|e| ReplayError::Parse {
            line,
            message: e.to_string(),
        })?;
        let mut moves = Vec::new();
        let mut footer = None;
        for (line, text) in lines {
            if footer.is_some() {
                return Err(ReplayError::Parse {
                    line,
                    message: "content after footer".into(),
                });
            }
            if let Ok(MoveLine { mv }) = serde_json::from_str(text) {
                moves.push(mv);
                continue;
            }
            let FooterLine { out } =
                serde_json::from_str(text).map_err(|e| ReplayError::Parse {
                    line,
                    message: e.to_string(),
                })?;
            footer = Some(out);
        }
        Ok(Replay {
            header,
            moves,
            footer,
        })
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<(), ReplayError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Replay, ReplayError> {
        Replay::parse(&std::fs::read_to_string(path)?)
    }
}

/// Serializes one move line, for append-only journals.
pub fn move_line(mv: &ReplayMove) -> String {
    serde_json::to_string(&MoveLine { mv: *mv }).expect("move serializes")
}

pub fn header_line(header: &ReplayHeader) -> String {
    serde_json::to_string(header).expect("header serializes")
}

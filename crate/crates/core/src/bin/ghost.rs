//! Command-line front end.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use redistricting_ghost::experiments::{emit_bounds, simulate, sweep, Replay};
use redistricting_ghost::game::{GameConfig, Player};
use redistricting_ghost::session::{http, SessionStore};
use redistricting_ghost::solver::{Solver, SolverOptions};
use redistricting_ghost::strategy::StrategySpec;
use serde_json::json;

#[derive(Parser)]
#[command(name = "ghost", version, about = "Redistricting Ghost toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game between two strategies and write the transcript.
    Simulate {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// e.g. `ghost-minority`, `ghost-minority(q=2)`, `random(seed=3)`
        #[arg(long, default_value = "ghost-minority")]
        b_strategy: String,
        #[arg(long, default_value = "crack-majority")]
        a_strategy: String,
        /// Target for a ghost-minority B.
        #[arg(long)]
        q: Option<u32>,
        /// Seed for any random player without one.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact game value.
    Solve {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, requires = "fixed")]
        fixed_side: Option<Player>,
        #[arg(long, requires = "fixed_side")]
        fixed: Option<String>,
        #[arg(long, default_value_t = SolverOptions::default().node_limit)]
        node_limit: u64,
    },
    /// Guarantee consistency table over all small configurations.
    Sweep {
        #[arg(long)]
        j_max: u32,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound curves and proportional-share staircase.
    Bounds {
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = 100)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check or summarize a transcript.
    Replay {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also re-run the recorded strategies.
        #[arg(long)]
        verify: bool,
    },
    /// Run the play service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_defaults(mut spec: StrategySpec, q: Option<u32>, seed: Option<u64>) -> StrategySpec {
    if spec.target_q.is_none() && spec.side == Player::B {
        spec.target_q = q;
    }
    if spec.seed.is_none() {
        spec.seed = seed;
    }
    spec
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Simulate {
            j,
            m,
            n,
            b_strategy,
            a_strategy,
            q,
            seed,
            out,
        } => {
            let config = GameConfig::new(j, m, n).map_err(|e| e.to_string())?;
            let spec_b = StrategySpec::parse(&b_strategy, Player::B).map_err(|e| e.to_string())?;
            let spec_a = StrategySpec::parse(&a_strategy, Player::A).map_err(|e| e.to_string())?;
            let replay = simulate(
                config,
                &with_defaults(spec_b, q, seed),
                &with_defaults(spec_a, None, seed),
            )
            .map_err(|e| e.to_string())?;
            if let Some(footer) = &replay.footer {
                eprintln!(
                    "B wins {} of {} (p = {}, E = {})",
                    footer.q, j, footer.p, footer.e
                );
            }
            emit(&replay.to_text(), out)?;
        }
        Command::Solve {
            j,
            m,
            n,
            fixed_side,
            fixed,
            node_limit,
        } => {
            let config = GameConfig::new(j, m, n).map_err(|e| e.to_string())?;
            let options = SolverOptions {
                node_limit,
                ..SolverOptions::default()
            };
            let mut solver = match (fixed_side, fixed) {
                (Some(side), Some(label)) => {
                    let spec = StrategySpec::parse(&label, side).map_err(|e| e.to_string())?;
                    Solver::with_fixed(config, options, &spec)
                }
                _ => Solver::new(config, options),
            }
            .map_err(|e| e.to_string())?;
            let value = solver.solve().map_err(|e| e.to_string())?;
            let start = redistricting_ghost::game::new_game(config).map_err(|e| e.to_string())?;
            let pv = solver
                .principal_variation(&start)
                .map_err(|e| e.to_string())?;
            let out = json!({
                "config": config,
                "value": value.value,
                "principal_variation": pv.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "nodes_expanded": solver.nodes_expanded(),
                "table_size": solver.table_size(),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Command::Sweep { j_max, m_max, out } => {
            let table = sweep(j_max, m_max);
            emit(&table.to_csv(), out)?;
            let bad = table.violations().count();
            if bad > 0 || table.aborted.is_some() {
                eprintln!(
                    "{bad} inconsistent rows{}",
                    if table.aborted.is_some() {
                        ", sweep aborted"
                    } else {
                        ""
                    }
                );
                return Ok(ExitCode::FAILURE);
            }
            eprintln!("{} rows, all consistent", table.rows.len());
        }
        Command::Bounds { j, m, out } => {
            if j == 0 {
                return Err("j must be at least 1".into());
            }
            emit(&emit_bounds(j, m).to_csv(), out)?;
        }
        Command::Replay { input, verify } => {
            let replay = Replay::read_from(&input).map_err(|e| e.to_string())?;
            let state = replay.verify().map_err(|e| e.to_string())?;
            let footer = replay.compute_footer().map_err(|e| e.to_string())?;
            if verify {
                let again = replay.resimulate().map_err(|e| e.to_string())?;
                if again.moves != replay.moves {
                    return Err("re-simulation produced a different game".into());
                }
            }
            let out = json!({
                "config": replay.header.cfg,
                "moves": replay.moves.len(),
                "terminal": state.is_terminal(),
                "footer": footer,
                "resimulated": verify,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Command::Serve {
            port,
            host,
            journal,
        } => {
            let store = match journal {
                Some(dir) => SessionStore::with_journal(dir).map_err(|e| e.to_string())?,
                None => SessionStore::new(),
            };
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            eprintln!("listening on http://{addr}");
            runtime
                .block_on(http::serve(addr, Arc::new(store)))
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

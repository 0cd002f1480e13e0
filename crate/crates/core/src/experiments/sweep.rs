//! Exhaustive theorem checks over small configurations.
//!
//! Every row solves one `(j, m, n)` exactly and compares the value with
//! three claims: equal pools split evenly, `n >= 2q(m+1)` bricks win `q`
//! districts, and `n < f(q)` bricks cannot win `q` against cracking. With
//! `fixed_checks` on, the minority strategy is also pinned for B (and the
//! cracking strategy for A) and checked against an optimal opponent.

use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::game::GameConfig;
use crate::metrics::{lower_bound_f, proportional_p, upper_bound_n};
use crate::solver::{SolveError, Solver, SolverOptions};
use crate::strategy::StrategySpec;

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub solver: SolverOptions,
    pub fixed_checks: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            solver: SolverOptions::default(),
            fixed_checks: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub j: u32,
    pub m: u32,
    pub n: u32,
    pub value: u32,
    pub p: u32,
    pub b_is_minority: bool,
    /// Even `j` with `n = v/2`.
    pub thm1_applies: bool,
    pub thm1_ok: bool,
    /// Largest `q <= j` with `n >= 2q(m+1)`.
    pub thm2_q: Option<u32>,
    pub thm2_ok: bool,
    /// Minority strategy pinned for B reaches every guaranteed `q`.
    pub thm2_fixed_ok: Option<bool>,
    /// Smallest `q <= j` with `n < f(q)`.
    pub thm3_q: Option<u32>,
    pub thm3_ok: bool,
    /// Optimal B against pinned cracking stays below `thm3_q`.
    pub thm3_fixed_ok: Option<bool>,
}

impl SweepRow {
    pub fn consistent(&self) -> bool {
        self.thm1_ok
            && self.thm2_ok
            && self.thm3_ok
            && self.thm2_fixed_ok != Some(false)
            && self.thm3_fixed_ok != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAbort {
    pub config: GameConfig,
    pub error: SolveError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Set when a row blew the solver budget; rows stop just before it.
    pub aborted: Option<SweepAbort>,
}

pub const SWEEP_CSV_HEADER: &str = "j,m,n,value,p,b_minority,thm1_applies,thm1_ok,thm2_q,thm2_ok,thm2_fixed_ok,thm3_q,thm3_ok,thm3_fixed_ok,consistent,fatal";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl SweepTable {
    pub fn violations(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.consistent())
    }

    pub fn is_clean(&self) -> bool {
        self.aborted.is_none() && self.violations().next().is_none()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let ok = r.consistent();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.j,
                r.m,
                r.n,
                r.value,
                r.p,
                r.b_is_minority,
                r.thm1_applies,
                r.thm1_ok,
                opt(r.thm2_q),
                r.thm2_ok,
                opt(r.thm2_fixed_ok),
                opt(r.thm3_q),
                r.thm3_ok,
                opt(r.thm3_fixed_ok),
                ok,
                if ok { "" } else { "FATAL" }
            );
        }
        if let Some(abort) = &self.aborted {
            let c = abort.config;
            let _ = writeln!(
                out,
                "# budget exceeded at j={},m={},n={}: {}",
                c.j, c.m, c.n, abort.error
            );
        }
        out
    }
}

/// Largest `q` in `1..=j` with `n >= 2q(m+1)`.
pub fn guaranteed_q(config: &GameConfig) -> Option<u32> {
    (1..=config.j)
        .rev()
        .find(|&q| u64::from(config.n) >= upper_bound_n(config.m, q))
}

/// Smallest `q` in `1..=j` with `n < f(q)`.
pub fn blocked_q(config: &GameConfig) -> Option<u32> {
    (1..=config.j)
        .find(|&q| Ratio::from_integer(i64::from(config.n)) < lower_bound_f(config.j, config.m, q))
}

pub fn sweep_row(config: GameConfig, options: &SweepOptions) -> Result<SweepRow, SolveError> {
    let value = Solver::new(config, options.solver)?.solve()?.value;
    let v = config.total_voters();
    let thm1_applies = config.j % 2 == 0 && 2 * config.n == v;
    let thm2_q = guaranteed_q(&config);
    let thm3_q = blocked_q(&config);

    let (mut thm2_fixed_ok, mut thm3_fixed_ok) = (None, None);
    if options.fixed_checks {
        if let Some(top) = thm2_q {
            let mut ok = true;
            for q in 1..=top {
                let spec = StrategySpec::ghost_minority(Some(q));
                let got = Solver::with_fixed(config, options.solver, &spec)?
                    .solve()?
                    .value;
                ok &= got >= q;
            }
            thm2_fixed_ok = Some(ok);
        }
        if let Some(q) = thm3_q {
            let spec = StrategySpec::crack_majority();
            let got = Solver::with_fixed(config, options.solver, &spec)?
                .solve()?
                .value;
            thm3_fixed_ok = Some(got < q);
        }
    }

    Ok(SweepRow {
        j: config.j,
        m: config.m,
        n: config.n,
        value,
        p: proportional_p(&config),
        b_is_minority: config.b_is_minority(),
        thm1_applies,
        thm1_ok: !thm1_applies || 2 * value == config.j,
        thm2_q,
        thm2_ok: thm2_q.map_or(true, |q| value >= q),
        thm2_fixed_ok,
        thm3_q,
        thm3_ok: thm3_q.map_or(true, |q| value < q),
        thm3_fixed_ok,
    })
}

/// Every `(j, m, n)` with `1 <= j <= j_max`, `m <= m_max`, `0 <= n <= v`.
pub fn sweep(j_max: u32, m_max: u32) -> SweepTable {
    sweep_with(j_max, m_max, &SweepOptions::default())
}

pub fn sweep_with(j_max: u32, m_max: u32, options: &SweepOptions) -> SweepTable {
    let configs: Vec<GameConfig> = (1..=j_max)
        .flat_map(|j| (0..=m_max).map(move |m| (j, m)))
        .flat_map(|(j, m)| (0..=j * (2 * m + 1)).map(move |n| GameConfig { j, m, n }))
        .collect();
    let results: Vec<Result<SweepRow, SolveError>> =
        configs.par_iter().map(|&c| sweep_row(c, options)).collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut aborted = None;
    for (config, result) in configs.into_iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(error) => {
                aborted = Some(SweepAbort { config, error });
                break;
            }
        }
    }
    SweepTable { rows, aborted }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(j: u32, m: u32, n: u32) -> SweepRow {
        sweep_row(GameConfig::new(j, m, n).unwrap(), &SweepOptions::default()).unwrap()
    }

    #[test]
    fn documented_rows() {
        let r = row(2, 1, 3);
        assert_eq!(r.value, 1);
        assert!(r.thm1_applies && r.thm1_ok && r.consistent());

        let r = row(2, 1, 1);
        assert_eq!((r.value, r.thm3_q), (0, Some(1)));
        assert!(r.consistent());

        let r = row(2, 1, 4);
        assert_eq!(r.thm2_q, Some(1));
        assert!(r.value >= 1 && r.thm2_fixed_ok == Some(true));
    }

    #[test]
    fn thresholds() {
        let c = GameConfig::new(7, 6, 33).unwrap();
        assert_eq!(guaranteed_q(&c), Some(2));
        assert_eq!(blocked_q(&c), Some(4));
        assert_eq!(guaranteed_q(&GameConfig::new(2, 1, 3).unwrap()), None);
    }

    #[test]
    fn ordered_csv_and_abort_marker() {
        let t = sweep(2, 1);
        let keys: Vec<_> = t.rows.iter().map(|r| (r.j, r.m, r.n)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(t.rows.len(), 2 + 4 + 3 + 7);
        assert!(t.to_csv().starts_with(SWEEP_CSV_HEADER));

        let tiny = SweepOptions {
            solver: SolverOptions {
                node_limit: 3,
                ..SolverOptions::default()
            },
            fixed_checks: false,
        };
        let t = sweep_with(3, 1, &tiny);
        assert!(t.aborted.is_some());
        assert!(t.to_csv().contains("# budget exceeded"));
        assert!(!t.is_clean());
    }
}

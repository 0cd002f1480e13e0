//! Fairness measures and the bound formulas relating `n` to `q`.
//!
//! Everything is kept exact: rationals are `Ratio<i64>` and only the column
//! count `c` is floored.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::game::{DistrictState, GameConfig, GameError, GameState};

pub type Rational = Ratio<i64>;

/// Renders a rational as `num/den`, always with the denominator.
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `num/den` or a bare integer.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let d: i64 = d.trim().parse().ok()?;
    if d == 0 {
        return None;
    }
    Some(Ratio::new(n.trim().parse().ok()?, d))
}

fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

fn ser_opt_ratio<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_ratio(r, s),
        None => s.serialize_none(),
    }
}

/// Proportional share of districts for B, `round(jn / v)`, halves rounded up.
pub fn proportional_p(config: &GameConfig) -> u32 {
    let jn = u64::from(config.j) * u64::from(config.n);
    let v = u64::from(config.total_voters());
    ((2 * jn + v) / (2 * v)) as u32
}

/// Brick counts compatible with proportional share `p`:
/// `p + (2p - 1)m <= n <= p + (2p + 1)m`, clamped to `[0, v]`.
pub fn p_range(p: u32, config: &GameConfig) -> (u32, u32) {
    let (p, m) = (i64::from(p), i64::from(config.m));
    let v = i64::from(config.total_voters());
    let lo = (p + (2 * p - 1) * m).clamp(0, v);
    let hi = (p + (2 * p + 1) * m).clamp(0, v);
    (lo as u32, hi as u32)
}

/// Fills whole districts with bricks, then one mixed district, then apples.
pub fn packed_map(config: &GameConfig) -> Result<GameState, GameError> {
    config.validate()?;
    let cap = config.capacity();
    let full = config.n / cap;
    let rest = config.n % cap;
    let districts = (0..config.j)
        .map(|i| match i.cmp(&full) {
            std::cmp::Ordering::Less => DistrictState::new(cap, 0),
            std::cmp::Ordering::Equal => DistrictState::new(rest, cap - rest),
            std::cmp::Ordering::Greater => DistrictState::new(0, cap),
        })
        .collect();
    GameState::from_districts(*config, districts)
}

/// Useful and wasted votes per party on a finished map.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VoteTally {
    pub useful_a: u32,
    pub useful_b: u32,
    pub wasted_a: u32,
    pub wasted_b: u32,
}

impl VoteTally {
    pub fn total_wasted(&self) -> u32 {
        self.wasted_a + self.wasted_b
    }
}

/// Winners keep `m + 1` useful votes and waste the rest; losers waste all.
pub fn vote_tally(state: &GameState) -> Result<VoteTally, GameError> {
    if !state.is_terminal() {
        return Err(GameError::NotTerminal);
    }
    let m = state.config().m;
    let mut t = VoteTally::default();
    for d in state.districts() {
        if d.won_by_b(m) {
            t.useful_b += m + 1;
            t.wasted_b += d.bricks - (m + 1);
            t.wasted_a += d.apples;
        } else {
            t.useful_a += m + 1;
            t.wasted_a += d.apples - (m + 1);
            t.wasted_b += d.bricks;
        }
    }
    Ok(t)
}

/// `|wasted_A - wasted_B| / v`.
pub fn efficiency_gap(state: &GameState) -> Result<Rational, GameError> {
    let t = vote_tally(state)?;
    Ok(Ratio::new(
        (i64::from(t.wasted_a) - i64::from(t.wasted_b)).abs(),
        i64::from(state.config().total_voters()),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    pub p: u32,
    pub p_range: (u32, u32),
    #[serde(rename = "E", serialize_with = "ser_opt_ratio")]
    pub efficiency_gap: Option<Rational>,
    /// Present on finished maps only.
    pub votes: Option<VoteTally>,
    pub b_is_minority: bool,
}

/// Proportionality for the config, plus waste figures once `state` is over.
pub fn fairness_report(state: &GameState) -> FairnessReport {
    let config = state.config();
    let p = proportional_p(config);
    FairnessReport {
        p,
        p_range: p_range(p, config),
        efficiency_gap: efficiency_gap(state).ok(),
        votes: vote_tally(state).ok(),
        b_is_minority: config.b_is_minority(),
    }
}

/// Bricks below which B cannot win `q` districts against cracking:
/// `f(q) = 2q(1 - q/(j+q))(m+1) - 1`.
pub fn lower_bound_f(j: u32, m: u32, q: u32) -> Rational {
    let (j, m, q) = (i64::from(j), i64::from(m), i64::from(q));
    Ratio::new(2 * q * j * (m + 1), j + q) - 1
}

/// Bricks from which the minority strategy guarantees `q` districts:
/// `2q(m + 1)`.
pub fn upper_bound_n(m: u32, q: u32) -> u64 {
    2 * u64::from(q) * (u64::from(m) + 1)
}

/// Brick columns the cracking strategy guarantees,
/// `floor(q(m+1)/(j+q) - 1/(j+q))`, clamped to `[0, m + 1]`.
pub fn column_bound_c(j: u32, m: u32, q: u32) -> u32 {
    let num = i64::from(q) * (i64::from(m) + 1) - 1;
    let den = i64::from(j) + i64::from(q);
    num.div_euclid(den).clamp(0, i64::from(m) + 1) as u32
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub q: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub f_exact: Rational,
    /// Plotting form `(2jq / (j + q)) m`.
    #[serde(serialize_with = "ser_ratio")]
    pub f_fig4_form: Rational,
    pub n_upper: u64,
    /// Plotting form `2qm`.
    pub n_upper_fig4_form: u64,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurves {
    pub j: u32,
    pub m: u32,
    pub rows: Vec<BoundRow>,
}

pub const BOUND_CSV_HEADER: &str =
    "q,f_exact,f_fig4_form,n_upper,n_upper_fig4_form,c,f_float,f_fig4_float";

impl BoundCurves {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(BOUND_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{:.6},{:.6}\n",
                r.q,
                format_ratio(&r.f_exact),
                format_ratio(&r.f_fig4_form),
                r.n_upper,
                r.n_upper_fig4_form,
                r.c,
                ratio_to_f64(&r.f_exact),
                ratio_to_f64(&r.f_fig4_form),
            ));
        }
        out
    }
}

/// Exact bounds for every `q` in `1..=j`.
pub fn bound_curves(j: u32, m: u32) -> BoundCurves {
    let rows = (1..=j)
        .map(|q| {
            let (jj, mm, qq) = (i64::from(j), i64::from(m), i64::from(q));
            BoundRow {
                q,
                f_exact: lower_bound_f(j, m, q),
                f_fig4_form: Ratio::new(2 * jj * qq * mm, jj + qq),
                n_upper: upper_bound_n(m, q),
                n_upper_fig4_form: 2 * u64::from(q) * u64::from(m),
                c: column_bound_c(j, m, q),
            }
        })
        .collect();
    BoundCurves { j, m, rows }
}

/// One row of the breakpoint analysis: at the smallest `n` with proportional
/// share `p`, can B be held below `p` and is `p - 1` guaranteed?
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakpointRow {
    pub j: u32,
    pub m: u32,
    pub p: u32,
    /// `p + (2p - 1)m`.
    pub n_break: i64,
    /// `2(p - 1)(m + 1)`.
    pub n_guarantee: i64,
    pub guarantees_p_minus_one: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub f_p: Rational,
    /// `n_break <= f(p)`: cracking can keep B below `p`.
    pub held_below_p: bool,
    /// Slack of `m + p >= 2p²(m+1)/(j+p) + 1`, the rearranged comparison.
    #[serde(serialize_with = "ser_ratio")]
    pub rearranged_slack: Rational,
    /// Slack of the same comparison written with a `p/(j+p)` constant term.
    #[serde(serialize_with = "ser_ratio")]
    pub printed_form_slack: Rational,
    /// `2p² < j + p`: the coefficient of `m` favors holding B below `p`.
    pub coefficient_condition: bool,
    pub p_below_sqrt_j: bool,
}

pub fn breakpoint_row(j: u32, m: u32, p: u32) -> BreakpointRow {
    let (jj, mm, pp) = (i64::from(j), i64::from(m), i64::from(p));
    let n_break = pp + (2 * pp - 1) * mm;
    let n_guarantee = 2 * (pp - 1) * (mm + 1);
    let f_p = lower_bound_f(j, m, p);
    let lhs = Ratio::from_integer(mm + pp);
    let rearranged_slack = lhs - (Ratio::new(2 * pp * pp * (mm + 1), jj + pp) + 1);
    let printed_form_slack =
        lhs - (Ratio::new(2 * pp * pp * mm, jj + pp) + Ratio::new(pp, jj + pp) + 1);
    BreakpointRow {
        j,
        m,
        p,
        n_break,
        n_guarantee,
        guarantees_p_minus_one: n_break >= n_guarantee,
        held_below_p: Ratio::from_integer(n_break) <= f_p,
        f_p,
        rearranged_slack,
        printed_form_slack,
        coefficient_condition: 2 * pp * pp < jj + pp,
        p_below_sqrt_j: pp * pp < jj,
    }
}

//! Plot data for the bound curves and the proportional-share staircase.
//!
//! Long-format CSV, one point or step per line:
//!
//! ```text
//! series,key,n_from,n_to,n_float
//! red_exact,1,...          f(q) for q = key
//! red_display,1,...        (2jq/(j+q)) m
//! blue_exact,1,...         2q(m+1)
//! blue_display,1,...       2qm
//! grey,0,0,5,0.000000      p = key for every n in [n_from, n_to]
//! ```

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use crate::game::GameConfig;
use crate::metrics::{
    breakpoint_row, format_ratio, lower_bound_f, proportional_p, ratio_to_f64, upper_bound_n,
    BreakpointRow, Rational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    RedExact,
    RedDisplay,
    BlueExact,
    BlueDisplay,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::RedExact => "red_exact",
            Series::RedDisplay => "red_display",
            Series::BlueExact => "blue_exact",
            Series::BlueDisplay => "blue_display",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub series: Series,
    pub q: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub n: Rational,
}

/// `p` is constant over `n_from..=n_to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub p: u32,
    pub n_from: u32,
    pub n_to: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsPlot {
    pub j: u32,
    pub m: u32,
    pub points: Vec<CurvePoint>,
    pub staircase: Vec<Step>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

pub const BOUNDS_CSV_HEADER: &str = "series,key,n_from,n_to,n_float";

impl BoundsPlot {
    pub fn curve(&self, series: Series) -> impl Iterator<Item = &CurvePoint> {
        self.points.iter().filter(move |p| p.series == series)
    }

    /// Curve value at `q`.
    pub fn at(&self, series: Series, q: u32) -> Option<Rational> {
        self.curve(series).find(|p| p.q == q).map(|p| p.n)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(BOUNDS_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let n = format_ratio(&p.n);
            let _ = writeln!(
                out,
                "{},{},{n},{n},{:.6}",
                p.series.name(),
                p.q,
                ratio_to_f64(&p.n)
            );
        }
        for s in &self.staircase {
            let _ = writeln!(
                out,
                "grey,{},{},{},{:.6}",
                s.p, s.n_from, s.n_to, s.n_from as f64
            );
        }
        out
    }
}

/// Curves for `q = 1..=max(1, j/2)` and the staircase of `p` over
/// `0 <= n <= v/2`.
pub fn emit_bounds(j: u32, m: u32) -> BoundsPlot {
    let (jj, mm) = (i64::from(j), i64::from(m));
    let mut points = Vec::new();
    for q in 1..=(j / 2).max(1) {
        let qq = i64::from(q);
        let blue = i64::try_from(upper_bound_n(m, q)).expect("fits");
        points.extend([
            CurvePoint {
                series: Series::RedExact,
                q,
                n: lower_bound_f(j, m, q),
            },
            CurvePoint {
                series: Series::RedDisplay,
                q,
                n: Ratio::new(2 * jj * qq * mm, jj + qq),
            },
            CurvePoint {
                series: Series::BlueExact,
                q,
                n: Ratio::from_integer(blue),
            },
            CurvePoint {
                series: Series::BlueDisplay,
                q,
                n: Ratio::from_integer(2 * qq * mm),
            },
        ]);
    }

    let half = j * (2 * m + 1) / 2;
    let mut staircase: Vec<Step> = Vec::new();
    for n in 0..=half {
        let p = proportional_p(&GameConfig { j, m, n });
        match staircase.last_mut() {
            Some(step) if step.p == p => step.n_to = n,
            _ => staircase.push(Step {
                p,
                n_from: n,
                n_to: n,
            }),
        }
    }

    BoundsPlot {
        j,
        m,
        points,
        staircase,
    }
}

/// Breakpoint rows for every `(p, m)` pair at fixed `j`.
pub fn breakpoint_table(j: u32, ps: &[u32], ms: &[u32]) -> Vec<BreakpointRow> {
    ps.iter()
        .flat_map(|&p| ms.iter().map(move |&m| breakpoint_row(j, m, p)))
        .collect()
}

pub const BREAKPOINT_CSV_HEADER: &str = "j,m,p,n_break,n_guarantee,guarantees_p_minus_one,f_p,held_below_p,rearranged_slack,printed_form_slack,coefficient_condition,p_below_sqrt_j";

pub fn breakpoint_csv(rows: &[BreakpointRow]) -> String {
    let mut out = String::from(BREAKPOINT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.j,
            r.m,
            r.p,
            r.n_break,
            r.n_guarantee,
            r.guarantees_p_minus_one,
            format_ratio(&r.f_p),
            r.held_below_p,
            format_ratio(&r.rearranged_slack),
            format_ratio(&r.printed_form_slack),
            r.coefficient_condition,
            r.p_below_sqrt_j
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::p_range;

    #[test]
    fn red_below_blue_with_growing_gap() {
        let plot = emit_bounds(10, 100);
        let mut last_gap = None;
        for q in 1..=5 {
            for (red, blue) in [
                (Series::RedExact, Series::BlueExact),
                (Series::RedDisplay, Series::BlueDisplay),
            ] {
                assert!(plot.at(red, q).unwrap() < plot.at(blue, q).unwrap());
            }
            let gap =
                plot.at(Series::BlueExact, q).unwrap() - plot.at(Series::RedExact, q).unwrap();
            if let Some(prev) = last_gap {
                assert!(gap > prev);
            }
            last_gap = Some(gap);
        }
    }

    #[test]
    fn single_district() {
        let plot = emit_bounds(1, 3);
        assert_eq!(plot.points.len(), 4);
        assert_eq!(
            plot.staircase,
            vec![Step {
                p: 0,
                n_from: 0,
                n_to: 3
            }]
        );
    }

    #[test]
    fn staircase_matches_p_range() {
        for (j, m) in [(10, 3), (4, 5), (7, 6), (3, 0)] {
            let plot = emit_bounds(j, m);
            let cfg = GameConfig { j, m, n: 0 };
            for step in &plot.staircase {
                let (lo, hi) = p_range(step.p, &cfg);
                assert_eq!(step.n_from, lo);
                assert!(step.n_to == hi || step.n_to == j * (2 * m + 1) / 2);
            }
        }
    }

    #[test]
    fn csv_shape() {
        let csv = emit_bounds(4, 2).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(BOUNDS_CSV_HEADER));
        assert!(csv.contains("red_exact,1,19/5,19/5,3.800000"));
        assert!(csv.contains("blue_display,2,8/1,8/1,8.000000"));
        assert!(csv.contains("grey,1,3,7,3.000000"));
    }
}

//! B's progress measure toward winning `q` districts.
//!
//! A district scores `m + 1` once it holds `m + 1` bricks, zero once it holds
//! `m + 1` apples, and its brick count otherwise. The game score for a target
//! `q` is the best total over any set `Q` of `q` districts in each of which B
//! is ahead or tied. Because the total is additive, the best `Q` is a prefix
//! of the eligible districts sorted by score.

use serde::Serialize;

use crate::game::{DistrictState, GameState};

/// Per-district score for B.
pub fn district_score(d: &DistrictState, m: u32) -> u32 {
    if d.bricks > m {
        m + 1
    } else if d.apples > m {
        0
    } else {
        d.bricks
    }
}

/// B is ahead or tied in `d`; empty districts qualify.
pub fn is_eligible(d: &DistrictState) -> bool {
    d.bricks >= d.apples
}

fn is_nonempty_tie(d: &DistrictState) -> bool {
    d.is_tied() && !d.is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoreReport {
    pub target_q: u32,
    pub total_score: u32,
    /// The selected maximizing `Q` (see [`select_q`]).
    pub witness: Option<Vec<usize>>,
    /// Every maximizing `Q`; only filled by [`game_score_exhaustive`].
    pub maximizing_sets: Vec<Vec<usize>>,
    pub min_score_u: Option<u32>,
    /// Districts in the witness scoring exactly `u`.
    pub count_at_u: u32,
    /// Non-empty tied districts in the witness.
    pub tied_in_q: u32,
    pub empty_in_q: u32,
    pub empty_total_z: u32,
}

impl ScoreReport {
    /// The witness reaches the maximum possible score `q(m + 1)`.
    pub fn is_secured(&self, m: u32) -> bool {
        self.witness.is_some() && self.total_score == self.target_q * (m + 1)
    }
}

/// A maximizing `Q` with the fewest tied districts, ties broken by the
/// lexicographically smallest index set. Returned indices are ascending.
/// `None` when fewer than `q` districts are eligible.
pub fn select_q(state: &GameState, q: u32) -> Option<Vec<usize>> {
    let m = state.config().m;
    let mut eligible: Vec<(usize, &DistrictState)> = state
        .districts()
        .iter()
        .enumerate()
        .filter(|(_, d)| is_eligible(d))
        .collect();
    if eligible.len() < q as usize {
        return None;
    }
    eligible.sort_by_key(|&(i, d)| (std::cmp::Reverse(district_score(d, m)), d.is_tied(), i));
    let mut chosen: Vec<usize> = eligible[..q as usize].iter().map(|&(i, _)| i).collect();
    chosen.sort_unstable();
    Some(chosen)
}

/// Score summary using the single witness from [`select_q`].
pub fn game_score(state: &GameState, q: u32) -> ScoreReport {
    let witness = select_q(state, q);
    summarize(state, q, witness, Vec::new())
}

/// Like [`game_score`] but also enumerates every maximizing set by brute
/// force over all `q`-subsets. Exponential; meant for small instances.
pub fn game_score_exhaustive(state: &GameState, q: u32) -> ScoreReport {
    let witness = select_q(state, q);
    let all = all_maximizing_sets(state, q);
    summarize(state, q, witness, all)
}

/// Sum of district scores over `set`.
pub fn set_score(state: &GameState, set: &[usize]) -> u32 {
    let m = state.config().m;
    set.iter()
        .map(|&i| district_score(&state.districts()[i], m))
        .sum()
}

/// Every `q`-subset of eligible districts attaining the maximum score,
/// in lexicographic order.
pub fn all_maximizing_sets(state: &GameState, q: u32) -> Vec<Vec<usize>> {
    let eligible: Vec<usize> = state
        .districts()
        .iter()
        .enumerate()
        .filter(|(_, d)| is_eligible(d))
        .map(|(i, _)| i)
        .collect();
    let mut best = None;
    let mut sets = Vec::new();
    for_each_subset(&eligible, q as usize, &mut |set| {
        let score = set_score(state, set);
        match best {
            Some(b) if score < b => {}
            Some(b) if score == b => sets.push(set.to_vec()),
            _ => {
                best = Some(score);
                sets.clear();
                sets.push(set.to_vec());
            }
        }
    });
    sets
}

fn for_each_subset(items: &[usize], k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let needed = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < needed {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    if k > items.len() {
        return;
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

fn summarize(
    state: &GameState,
    q: u32,
    witness: Option<Vec<usize>>,
    maximizing_sets: Vec<Vec<usize>>,
) -> ScoreReport {
    let m = state.config().m;
    let districts = state.districts();
    let empty_total_z = districts.iter().filter(|d| d.is_empty()).count() as u32;
    let Some(set) = witness else {
        return ScoreReport {
            target_q: q,
            total_score: 0,
            witness: None,
            maximizing_sets,
            min_score_u: None,
            count_at_u: 0,
            tied_in_q: 0,
            empty_in_q: 0,
            empty_total_z,
        };
    };
    let scores: Vec<u32> = set
        .iter()
        .map(|&i| district_score(&districts[i], m))
        .collect();
    let min_score_u = scores.iter().copied().min();
    let count_at_u = min_score_u
        .map(|u| scores.iter().filter(|&&s| s == u).count() as u32)
        .unwrap_or(0);
    ScoreReport {
        target_q: q,
        total_score: scores.iter().sum(),
        min_score_u,
        count_at_u,
        tied_in_q: set
            .iter()
            .filter(|&&i| is_nonempty_tie(&districts[i]))
            .count() as u32,
        empty_in_q: set.iter().filter(|&&i| districts[i].is_empty()).count() as u32,
        empty_total_z,
        witness: Some(set),
        maximizing_sets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;

    fn state(j: u32, m: u32, n: u32, ds: &[(u32, u32)]) -> GameState {
        GameState::from_districts(
            GameConfig::new(j, m, n).unwrap(),
            ds.iter().map(|&(b, a)| DistrictState::new(b, a)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn district_score_rules() {
        assert_eq!(district_score(&DistrictState::new(6, 0), 5), 6);
        assert_eq!(district_score(&DistrictState::new(0, 6), 5), 0);
        assert_eq!(district_score(&DistrictState::new(3, 2), 5), 3);
        assert_eq!(district_score(&DistrictState::default(), 5), 0);
        assert_eq!(district_score(&DistrictState::new(9, 2), 5), 6);
    }

    #[test]
    fn tied_singleton() {
        let s = state(2, 1, 3, &[(1, 1), (0, 0)]);
        let r = game_score(&s, 1);
        assert_eq!(r.total_score, 1);
        assert_eq!(r.witness, Some(vec![0]));
        assert_eq!(r.min_score_u, Some(1));
        assert_eq!(r.tied_in_q, 1);
    }

    #[test]
    fn fresh_board_scores_zero_with_empty_witness() {
        let s = state(4, 2, 7, &[(0, 0); 4]);
        for q in 1..=4 {
            let r = game_score(&s, q);
            assert_eq!(r.total_score, 0);
            assert_eq!(r.witness, Some((0..q as usize).collect()));
            assert_eq!(r.empty_in_q, q);
            assert_eq!(r.empty_total_z, 4);
        }
    }

    #[test]
    fn no_eligible_set() {
        let s = state(2, 1, 3, &[(2, 0), (0, 2)]);
        let r = game_score(&s, 2);
        assert_eq!(r.total_score, 0);
        assert_eq!(r.witness, None);
        assert!(r.maximizing_sets.is_empty());
        assert_eq!(select_q(&s, 2), None);
    }

    #[test]
    fn select_prefers_untied() {
        let s = state(3, 1, 4, &[(1, 1), (1, 0), (0, 0)]);
        assert_eq!(select_q(&s, 1), Some(vec![1]));
        let all = all_maximizing_sets(&s, 1);
        assert_eq!(all, vec![vec![0], vec![1]]);
    }

    #[test]
    fn exhaustive_report_lists_all_sets() {
        let s = state(3, 1, 4, &[(1, 0), (0, 0), (0, 0)]);
        let r = game_score_exhaustive(&s, 2);
        assert_eq!(r.total_score, 1);
        assert_eq!(r.maximizing_sets, vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(r.witness, Some(vec![0, 1]));
    }

    #[test]
    fn secured_score() {
        let s = state(2, 1, 4, &[(2, 0), (1, 0)]);
        assert!(game_score(&s, 1).is_secured(1));
        assert!(!game_score(&s, 2).is_secured(1));
    }

    #[test]
    fn zero_target() {
        let s = state(2, 1, 3, &[(0, 0); 2]);
        let r = game_score(&s, 0);
        assert_eq!(r.total_score, 0);
        assert_eq!(r.witness, Some(vec![]));
    }
}

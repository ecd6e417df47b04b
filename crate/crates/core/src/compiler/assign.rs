//! Choosing which Hadamard rows go to which color groups.

use crate::hadamard::HadamardMatrix;

use super::Objective;

/// Rows chosen for each balanced color, plus how they were found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RowChoice {
    pub rows: Vec<usize>,
    pub cost: usize,
    pub exhaustive: bool,
}

struct Candidate {
    index: usize,
    changes: usize,
    /// Bit `k` set when the row flips sign at boundary `k`.
    flips: u64,
}

struct Search<'a> {
    candidates: &'a [Candidate],
    weights: &'a [usize],
    objective: Objective,
    used: Vec<bool>,
    current: Vec<usize>,
    best: Option<(usize, Vec<usize>)>,
}

impl Search<'_> {
    fn cost_with(&self, load: &[usize], total: usize) -> usize {
        match self.objective {
            Objective::TotalPulses => total,
            Objective::MaxSimultaneous => load.iter().copied().max().unwrap_or(0),
        }
    }

    fn run(&mut self, slot: usize, load: &mut [usize], total: usize) {
        let cost = self.cost_with(load, total);
        if let Some((best, _)) = &self.best {
            // costs only grow as slots fill, and ties keep the earlier winner
            if cost >= *best {
                return;
            }
        }
        if slot == self.weights.len() {
            self.best = Some((cost, self.current.clone()));
            return;
        }
        let w = self.weights[slot];
        for (ci, cand) in self.candidates.iter().enumerate() {
            if self.used[ci] {
                continue;
            }
            self.used[ci] = true;
            self.current.push(cand.index);
            let mut next_load = load.to_vec();
            for (k, l) in next_load.iter_mut().enumerate() {
                if cand.flips & (1u64 << k) != 0 {
                    *l += w;
                }
            }
            self.run(slot + 1, &mut next_load, total + w * cand.changes);
            self.current.pop();
            self.used[ci] = false;
        }
    }
}

/// Number of ordered selections of `k` rows out of `r`, saturating.
pub(crate) fn assignment_count(r: usize, k: usize) -> u128 {
    if k > r {
        return 0;
    }
    ((r - k + 1)..=r).fold(1u128, |acc, x| acc.saturating_mul(x as u128))
}

/// Assigns distinct non-first rows of `h` to color slots with the given
/// group sizes (`weights`).
///
/// Searches exhaustively in lexicographic row order when the number of
/// candidate assignments is within `limit`, keeping the first optimum.
/// Otherwise rows sorted by ascending sign-change count go to slots sorted by
/// descending group size.
pub(crate) fn choose_rows(
    h: &HadamardMatrix,
    weights: &[usize],
    objective: Objective,
    limit: u64,
) -> RowChoice {
    let m = h.order();
    debug_assert!(weights.len() < m);
    let candidates: Vec<Candidate> = (1..m)
        .map(|index| {
            let row = h.row(index);
            let flips = (1..m)
                .filter(|&k| row[k - 1] != row[k])
                .fold(0u64, |acc, k| acc | (1u64 << k));
            Candidate {
                index,
                changes: h.sign_changes(index),
                flips,
            }
        })
        .collect();

    let evaluate = |rows: &[usize]| -> usize {
        let mut load = vec![0usize; m];
        let mut total = 0;
        for (&r, &w) in rows.iter().zip(weights) {
            let cand = &candidates[r - 1];
            total += w * cand.changes;
            for (k, l) in load.iter_mut().enumerate() {
                if cand.flips & (1u64 << k) != 0 {
                    *l += w;
                }
            }
        }
        match objective {
            Objective::TotalPulses => total,
            Objective::MaxSimultaneous => load.into_iter().max().unwrap_or(0),
        }
    };

    if assignment_count(candidates.len(), weights.len()) <= u128::from(limit) {
        let mut search = Search {
            candidates: &candidates,
            weights,
            objective,
            used: vec![false; candidates.len()],
            current: Vec::with_capacity(weights.len()),
            best: None,
        };
        search.run(0, &mut vec![0; m], 0);
        let (cost, rows) = search.best.expect("enough rows for every slot");
        debug_assert_eq!(cost, evaluate(&rows));
        return RowChoice {
            rows,
            cost,
            exhaustive: true,
        };
    }

    let mut by_changes: Vec<&Candidate> = candidates.iter().collect();
    by_changes.sort_by_key(|c| (c.changes, c.index));
    let mut slots: Vec<usize> = (0..weights.len()).collect();
    slots.sort_by_key(|&s| (std::cmp::Reverse(weights[s]), s));
    let mut rows = vec![0; weights.len()];
    for (slot, cand) in slots.into_iter().zip(by_changes) {
        rows[slot] = cand.index;
    }
    RowChoice {
        cost: evaluate(&rows),
        rows,
        exhaustive: false,
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Exact optima: column-sum and eccentricity fast paths for Sum-Sum and
//! Max-Max, brute-force enumeration for everything else.
//!
//! All paths break ties toward the lexicographically smallest sorted slot
//! vector, and values within [`crate::tolerance`] of each other count as
//! tied.

use crate::metric_core::{
    objective_value_unchecked, Instance, ObjectiveError, ObjectiveSpec, PointId, Solution,
};
use crate::tolerance::{slack_of, strictly_less};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Default limit on the number of committees brute force may visit.
pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    FastColumnSum,
    FastMaxColumn,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FastColumnSum => "FAST_COLUMN_SUM",
            Method::FastMaxColumn => "FAST_MAX_COLUMN",
            Method::BruteForce => "BRUTE_FORCE",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("{count} committees exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

/// An optimal committee for some objective.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub solution: Solution,
    pub value: f64,
    pub method: Method,
}

impl OptResult {
    fn new(inst: &Instance, solution: Solution, spec: ObjectiveSpec, method: Method) -> Self {
        let value = objective_value_unchecked(inst, &solution, spec);
        Self {
            solution,
            value,
            method,
        }
    }
}

/// Number of distinct `k`-multisets drawn from the facility pool,
/// saturating at `u128::MAX`.
pub fn count_solutions(inst: &Instance) -> u128 {
    let k = inst.k();
    let mut ways = vec![0u128; k + 1];
    ways[0] = 1;
    for &(_, mult) in inst.pool() {
        let mut next = vec![0u128; k + 1];
        for (size, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for take in 0..=mult.min(k - size) {
                next[size + take] = next[size + take].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[k]
}

/// Every feasible committee in lexicographic order of sorted slots.
pub fn enumerate_solutions(inst: &Instance) -> Result<Solutions<'_>, SolveError> {
    enumerate_solutions_capped(inst, DEFAULT_CAP)
}

pub fn enumerate_solutions_capped(inst: &Instance, cap: u128) -> Result<Solutions<'_>, SolveError> {
    let count = count_solutions(inst);
    if count > cap {
        return Err(SolveError::CapExceeded { count, cap });
    }
    Ok(Solutions::new(inst))
}

/// Iterator over committees; see [`enumerate_solutions`].
pub struct Solutions<'a> {
    inst: &'a Instance,
    mult: Vec<usize>,
    // capacity of pool indices >= i
    suffix: Vec<usize>,
    pos: Vec<usize>,
    used: Vec<usize>,
    state: IterState,
}

#[derive(PartialEq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl<'a> Solutions<'a> {
    fn new(inst: &'a Instance) -> Self {
        let mult: Vec<usize> = inst.pool().iter().map(|&(_, m)| m).collect();
        let mut suffix = vec![0; mult.len() + 1];
        for i in (0..mult.len()).rev() {
            suffix[i] = suffix[i + 1] + mult[i];
        }
        let k = inst.k();
        Self {
            inst,
            used: vec![0; mult.len()],
            pos: vec![0; k],
            mult,
            suffix,
            state: IterState::Fresh,
        }
    }

    fn fill(&mut self, from_position: usize, mut idx: usize) {
        for j in from_position..self.pos.len() {
            while self.used[idx] == self.mult[idx] {
                idx += 1;
            }
            self.pos[j] = idx;
            self.used[idx] += 1;
        }
    }

    fn current(&self) -> Solution {
        let pool = self.inst.pool();
        Solution::new(self.pos.iter().map(|&i| pool[i].0).collect())
    }

    fn advance(&mut self) -> bool {
        let k = self.pos.len();
        for i in (0..k).rev() {
            let p = self.pos[i];
            self.used[p] -= 1;
            let next = p + 1;
            if next < self.mult.len() && self.suffix[next] >= k - i {
                self.pos[i] = next;
                self.used[next] += 1;
                self.fill(i + 1, next);
                return true;
            }
        }
        false
    }
}

impl Iterator for Solutions<'_> {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        match self.state {
            IterState::Fresh => {
                self.fill(0, 0);
                self.state = IterState::Running;
                Some(self.current())
            }
            IterState::Running => {
                if self.advance() {
                    Some(self.current())
                } else {
                    self.state = IterState::Done;
                    None
                }
            }
            IterState::Done => None,
        }
    }
}

/// Optimum of `spec`, using a fast path when one exists.
pub fn optimum(inst: &Instance, spec: ObjectiveSpec) -> Result<OptResult, SolveError> {
    optimum_capped(inst, spec, DEFAULT_CAP)
}

pub fn optimum_capped(
    inst: &Instance,
    spec: ObjectiveSpec,
    cap: u128,
) -> Result<OptResult, SolveError> {
    spec.validate(inst)?;
    if spec == ObjectiveSpec::SUM_SUM {
        Ok(sum_sum_fast(inst))
    } else if spec == ObjectiveSpec::MAX_MAX {
        Ok(max_max_fast(inst))
    } else {
        brute_force(inst, spec, cap)
    }
}

/// Minimum over all enumerated committees.
pub fn brute_force(
    inst: &Instance,
    spec: ObjectiveSpec,
    cap: u128,
) -> Result<OptResult, SolveError> {
    spec.validate(inst)?;
    let mut best: Option<(f64, Solution)> = None;
    for sol in enumerate_solutions_capped(inst, cap)? {
        let value = objective_value_unchecked(inst, &sol, spec);
        match &best {
            Some((v, _)) if !strictly_less(value, *v) => {}
            _ => best = Some((value, sol)),
        }
    }
    let (_, solution) = best.expect("k <= total multiplicity guarantees one committee");
    Ok(OptResult::new(inst, solution, spec, Method::BruteForce))
}

/// Slots expanded with multiplicity, each tagged with a score.
fn scored_slots(inst: &Instance, score: impl Fn(PointId) -> f64) -> Vec<(f64, PointId)> {
    inst.pool()
        .iter()
        .flat_map(|&(p, m)| {
            let s = score(p);
            std::iter::repeat_n((s, p), m)
        })
        .collect()
}

/// Sum-Sum is separable over slots: the objective equals the total of the
/// chosen slots' weighted column sums, so the optimum takes the `k` slots
/// with the smallest column sums.
pub fn sum_sum_fast(inst: &Instance) -> OptResult {
    let k = inst.k();
    let mut slots = scored_slots(inst, |p| inst.column_sum(p));
    slots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let threshold = slots[k - 1].0;
    // every optimum contains all strictly cheaper slots; within the tied
    // band the smallest ids give the lexicographically smallest committee
    let mut chosen: Vec<PointId> = slots
        .iter()
        .filter(|(s, _)| strictly_less(*s, threshold))
        .map(|&(_, p)| p)
        .collect();
    let mut band: Vec<PointId> = slots
        .iter()
        .filter(|(s, _)| {
            !strictly_less(*s, threshold) && (*s - threshold).abs() <= slack_of(*s, threshold)
        })
        .map(|&(_, p)| p)
        .collect();
    band.sort_unstable();
    chosen.extend(band.into_iter().take(k - chosen.len()));
    OptResult::new(
        inst,
        Solution::new(chosen),
        ObjectiveSpec::SUM_SUM,
        Method::FastColumnSum,
    )
}

/// Max-Max equals the largest eccentricity among chosen slots. The optimum
/// value is the `k`-th smallest slot eccentricity; among slots within that
/// value the `k` smallest ids form the lexicographically smallest optimum.
pub fn max_max_fast(inst: &Instance) -> OptResult {
    let k = inst.k();
    let mut slots = scored_slots(inst, |p| inst.eccentricity(p));
    slots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let threshold = slots[k - 1].0;
    let limit = threshold + slack_of(threshold, threshold);
    let mut eligible: Vec<PointId> = slots
        .iter()
        .filter(|(e, _)| *e <= limit)
        .map(|&(_, p)| p)
        .collect();
    eligible.sort_unstable();
    eligible.truncate(k);
    OptResult::new(
        inst,
        Solution::new(eligible),
        ObjectiveSpec::MAX_MAX,
        Method::FastMaxColumn,
    )
}

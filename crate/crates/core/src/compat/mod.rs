// SPDX-License-Identifier: Apache-2.0

//! Simultaneous approximation: ratios against optima, the stitched
//! Sum-Sum / Max-Sum committee, the best-of-candidates selector and the
//! closed-form guarantees as executable checks.

mod bounds;
mod checks;

pub use bounds::{
    bound_value, even_split_envelope, odd_split_envelope, overlap_split_bound, scan_even_split,
    scan_max, scan_odd_split, stitched_case_bound, BoundParams, PairKind,
};
pub use checks::{Check, CheckOutcome, CheckStatus};

use crate::metric_core::{
    objective_value_unchecked, Instance, InstanceError, ObjectiveError, ObjectiveSpec, PointId,
    Solution,
};
use crate::solvers::{
    enumerate_solutions_capped, optimum_capped, OptResult, SolveError, DEFAULT_CAP,
};
use crate::tolerance::{ratio, strictly_less};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompatError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("no closed-form bound for pair `{0}`")]
    UnknownPair(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("candidate is not feasible: {0}")]
    Candidate(#[from] InstanceError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

/// Two objectives, written `first+second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pair {
    pub first: ObjectiveSpec,
    pub second: ObjectiveSpec,
}

impl Pair {
    pub const fn new(first: ObjectiveSpec, second: ObjectiveSpec) -> Self {
        Self { first, second }
    }

    fn is_sum_sum_max_sum(&self) -> bool {
        PairKind::of(self) == Some(PairKind::SumSumMaxSum)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.first, self.second)
    }
}

impl FromStr for Pair {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once('+')
            .ok_or_else(|| ObjectiveError::Unknown(s.to_string()))?;
        Ok(Pair::new(a.parse()?, b.parse()?))
    }
}

/// Where a candidate committee came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateSource {
    FirstOptimum,
    SecondOptimum,
    Stitched,
    Exhaustive,
    Given,
}

impl fmt::Display for CandidateSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateSource::FirstOptimum => "opt_1",
            CandidateSource::SecondOptimum => "opt_2",
            CandidateSource::Stitched => "stitched",
            CandidateSource::Exhaustive => "exhaustive",
            CandidateSource::Given => "given",
        })
    }
}

/// A candidate measured against both optima of a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub pair: Pair,
    pub source: CandidateSource,
    pub candidate: Solution,
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub simultaneous: f64,
    pub opt_1: OptResult,
    pub opt_2: OptResult,
}

/// The stitched Sum-Sum / Max-Sum committee and its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct StitchPlan {
    /// Slots shared by both optima, multiplicity-wise.
    pub overlap: Solution,
    pub k_prime: usize,
    /// Cheapest column-sum slots of each optimum's remainder.
    pub q_ms: Solution,
    pub q_ss: Solution,
    pub r_ms: Solution,
    pub r_ss: Solution,
    pub stitched: Solution,
}

/// Max-Sum to Max-Max ratios of the two Max optima and the extremal
/// client/slot pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityStats {
    pub k1: f64,
    pub k2: f64,
    /// Farthest (client point, slot) in the Max-Sum optimum.
    pub i_star: PointId,
    pub b_star: PointId,
    /// Farthest (client point, slot) in the Max-Max optimum.
    pub j_star: PointId,
    pub a_star: PointId,
}

/// A best-of-candidates result with every candidate that was scored.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub best: RatioReport,
    pub considered: Vec<RatioReport>,
}

/// Per-instance analysis with cached optima.
pub struct Analysis<'a> {
    inst: &'a Instance,
    cap: u128,
    optima: RefCell<BTreeMap<ObjectiveSpec, OptResult>>,
}

impl<'a> Analysis<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        Self::with_cap(inst, DEFAULT_CAP)
    }

    pub fn with_cap(inst: &'a Instance, cap: u128) -> Self {
        Self {
            inst,
            cap,
            optima: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn optimum(&self, spec: ObjectiveSpec) -> Result<OptResult, CompatError> {
        if let Some(hit) = self.optima.borrow().get(&spec) {
            return Ok(hit.clone());
        }
        let opt = optimum_capped(self.inst, spec, self.cap)?;
        self.optima.borrow_mut().insert(spec, opt.clone());
        Ok(opt)
    }

    /// `spec(sol) / spec(optimum)`.
    pub fn alpha(&self, sol: &Solution, spec: ObjectiveSpec) -> Result<f64, CompatError> {
        let opt = self.optimum(spec)?;
        Ok(ratio(
            objective_value_unchecked(self.inst, sol, spec),
            opt.value,
        ))
    }

    pub fn ratio_report(
        &self,
        candidate: &Solution,
        pair: Pair,
    ) -> Result<RatioReport, CompatError> {
        self.report(candidate.clone(), pair, CandidateSource::Given)
    }

    fn report(
        &self,
        candidate: Solution,
        pair: Pair,
        source: CandidateSource,
    ) -> Result<RatioReport, CompatError> {
        self.inst.check_solution(&candidate)?;
        let opt_1 = self.optimum(pair.first)?;
        let opt_2 = self.optimum(pair.second)?;
        let alpha_1 = ratio(
            objective_value_unchecked(self.inst, &candidate, pair.first),
            opt_1.value,
        );
        let alpha_2 = ratio(
            objective_value_unchecked(self.inst, &candidate, pair.second),
            opt_2.value,
        );
        Ok(RatioReport {
            pair,
            source,
            candidate,
            alpha_1,
            alpha_2,
            simultaneous: alpha_1.max(alpha_2),
            opt_1,
            opt_2,
        })
    }

    pub fn stitch(&self) -> Result<StitchPlan, CompatError> {
        let o_ms = self.optimum(ObjectiveSpec::MAX_SUM)?.solution;
        let o_ss = self.optimum(ObjectiveSpec::SUM_SUM)?.solution;
        let overlap = o_ms.intersection(&o_ss);
        let k_prime = self.inst.k() - overlap.len();
        let (n_ms, n_ss) = if k_prime.is_multiple_of(2) {
            (k_prime / 2, k_prime / 2)
        } else {
            (k_prime / 2, k_prime / 2 + 1)
        };
        let (q_ms, r_ms) = self.cheapest(&o_ms.difference(&overlap), n_ms);
        let (q_ss, r_ss) = self.cheapest(&o_ss.difference(&overlap), n_ss);
        let stitched = overlap.union(&q_ms).union(&q_ss);
        Ok(StitchPlan {
            overlap,
            k_prime,
            q_ms,
            q_ss,
            r_ms,
            r_ss,
            stitched,
        })
    }

    /// Splits `slots` into its `count` lowest column-sum slots and the rest.
    fn cheapest(&self, slots: &Solution, count: usize) -> (Solution, Solution) {
        let mut scored: Vec<(f64, PointId)> = slots
            .slots()
            .iter()
            .map(|&p| (self.inst.column_sum(p), p))
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let rest = scored.split_off(count);
        (
            Solution::new(scored.into_iter().map(|(_, p)| p).collect()),
            Solution::new(rest.into_iter().map(|(_, p)| p).collect()),
        )
    }

    /// Best of the two optima and, for the Sum-Sum / Max-Sum pair, the
    /// stitched committee. Earlier candidates win ties.
    pub fn best_simultaneous(&self, pair: Pair) -> Result<Selection, CompatError> {
        let mut considered = vec![
            self.report(
                self.optimum(pair.first)?.solution,
                pair,
                CandidateSource::FirstOptimum,
            )?,
            self.report(
                self.optimum(pair.second)?.solution,
                pair,
                CandidateSource::SecondOptimum,
            )?,
        ];
        if pair.is_sum_sum_max_sum() {
            considered.push(self.report(
                self.stitch()?.stitched,
                pair,
                CandidateSource::Stitched,
            )?);
        }
        let mut best = 0;
        for (i, r) in considered.iter().enumerate().skip(1) {
            if strictly_less(r.simultaneous, considered[best].simultaneous) {
                best = i;
            }
        }
        Ok(Selection {
            best: considered[best].clone(),
            considered,
        })
    }

    /// Minimum simultaneous ratio over every feasible committee; the
    /// lexicographically first minimiser is reported.
    pub fn exhaustive_best(&self, pair: Pair) -> Result<RatioReport, CompatError> {
        let opt_1 = self.optimum(pair.first)?.value;
        let opt_2 = self.optimum(pair.second)?.value;
        let mut best: Option<(f64, Solution)> = None;
        for sol in enumerate_solutions_capped(self.inst, self.cap)? {
            let a1 = ratio(
                objective_value_unchecked(self.inst, &sol, pair.first),
                opt_1,
            );
            let a2 = ratio(
                objective_value_unchecked(self.inst, &sol, pair.second),
                opt_2,
            );
            let s = a1.max(a2);
            match &best {
                Some((v, _)) if !strictly_less(s, *v) => {}
                _ => best = Some((s, sol)),
            }
        }
        let (_, sol) = best.expect("at least one committee");
        self.report(sol, pair, CandidateSource::Exhaustive)
    }

    pub fn duality(&self) -> Result<DualityStats, CompatError> {
        let o_ms = self.optimum(ObjectiveSpec::MAX_SUM)?.solution;
        let o_mm = self.optimum(ObjectiveSpec::MAX_MAX)?.solution;
        let k_of = |sol: &Solution| {
            ratio(
                objective_value_unchecked(self.inst, sol, ObjectiveSpec::MAX_SUM),
                objective_value_unchecked(self.inst, sol, ObjectiveSpec::MAX_MAX),
            )
        };
        let (i_star, b_star) = self.farthest(&o_ms);
        let (j_star, a_star) = self.farthest(&o_mm);
        Ok(DualityStats {
            k1: k_of(&o_ms),
            k2: k_of(&o_mm),
            i_star,
            b_star,
            j_star,
            a_star,
        })
    }

    /// First (client point, slot) maximising the distance, scanning clients
    /// in entry order and slots in sorted order.
    fn farthest(&self, sol: &Solution) -> (PointId, PointId) {
        let mut best = (self.inst.clients()[0].point, sol.slots()[0]);
        let mut best_d = f64::NEG_INFINITY;
        for c in self.inst.clients() {
            for &s in sol.slots() {
                let d = self.inst.dist(c.point, s);
                if d > best_d {
                    best_d = d;
                    best = (c.point, s);
                }
            }
        }
        best
    }

    pub fn check(&self, check: Check) -> Result<CheckOutcome, CompatError> {
        checks::run(self, check)
    }
}

pub fn ratio_report(
    inst: &Instance,
    candidate: &Solution,
    pair: Pair,
) -> Result<RatioReport, CompatError> {
    Analysis::new(inst).ratio_report(candidate, pair)
}

pub fn stitch(inst: &Instance) -> Result<StitchPlan, CompatError> {
    Analysis::new(inst).stitch()
}

pub fn best_simultaneous(inst: &Instance, pair: Pair) -> Result<Selection, CompatError> {
    Analysis::new(inst).best_simultaneous(pair)
}

pub fn exhaustive_best(inst: &Instance, pair: Pair) -> Result<RatioReport, CompatError> {
    Analysis::new(inst).exhaustive_best(pair)
}

pub fn duality_stats(inst: &Instance) -> Result<DualityStats, CompatError> {
    Analysis::new(inst).duality()
}

pub fn check_theorem(inst: &Instance, check: Check) -> Result<CheckOutcome, CompatError> {
    Analysis::new(inst).check(check)
}

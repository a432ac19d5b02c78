// SPDX-License-Identifier: Apache-2.0

//! Plurality Veto over the voters' own top committees, and the realized
//! distortion of its winner on the known metric.

use crate::metric_core::{client_cost, ClientCost, Instance, ObjectiveSpec, PointId, Solution};
use crate::solvers::{enumerate_solutions_capped, optimum_capped, SolveError, DEFAULT_CAP};
use crate::tolerance::{ratio, strictly_less};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// Default limit on the number of expanded voters in an induced profile.
pub const DEFAULT_VOTER_CAP: u64 = 1_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VotingError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{n} voters exceed the profile limit of {cap}")]
    TooManyVoters { n: u64, cap: u64 },
    #[error("profile has no voters")]
    EmptyProfile,
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("veto order is not a permutation of the {voters} voters")]
    BadOrder { voters: usize },
}

/// Voters with strict rankings over a list of candidate committees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinalProfile {
    /// Ground point of each voter, when the profile came from an instance.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub voters: Vec<PointId>,
    pub committees: Vec<Solution>,
    /// For each voter, candidate indices from best to worst.
    pub rankings: Vec<Vec<usize>>,
}

impl OrdinalProfile {
    pub fn new(
        voters: Vec<PointId>,
        committees: Vec<Solution>,
        rankings: Vec<Vec<usize>>,
    ) -> Result<Self, VotingError> {
        let p = Self {
            voters,
            committees,
            rankings,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn voter_count(&self) -> usize {
        self.rankings.len()
    }

    pub fn validate(&self) -> Result<(), VotingError> {
        if self.rankings.is_empty() {
            return Err(VotingError::EmptyProfile);
        }
        if !self.voters.is_empty() && self.voters.len() != self.rankings.len() {
            return Err(VotingError::Profile(format!(
                "{} voter points for {} rankings",
                self.voters.len(),
                self.rankings.len()
            )));
        }
        let m = self.committees.len();
        for (v, r) in self.rankings.iter().enumerate() {
            let mut seen = vec![false; m];
            if r.len() != m
                || r.iter()
                    .any(|&c| c >= m || std::mem::replace(&mut seen[c], true))
            {
                return Err(VotingError::Profile(format!(
                    "rankings[{v}] is not a permutation of {m} candidates"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("profiles always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, VotingError> {
        let p: Self =
            serde_json::from_str(text).map_err(|e| VotingError::Profile(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

/// One voter's veto and the scores left after it.
#[derive(Debug, Clone, PartialEq)]
pub struct VetoStep {
    pub voter: usize,
    pub vetoed: usize,
    pub scores: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VetoTranscript {
    pub order: Vec<usize>,
    pub initial_scores: Vec<u64>,
    pub steps: Vec<VetoStep>,
    pub winner: usize,
    /// `matching[v]` is a voter whose first choice `v` vetoed; `v` weakly
    /// prefers the winner to that first choice.
    pub matching: Vec<usize>,
}

/// Committee minimising `f(voter, .)`, lexicographically first on ties.
pub fn top_committee(
    inst: &Instance,
    voter: PointId,
    cost: ClientCost,
) -> Result<Solution, SolveError> {
    let all: Vec<Solution> = enumerate_solutions_capped(inst, DEFAULT_CAP)?.collect();
    Ok(best_for(inst, voter, cost, &all))
}

fn best_for(inst: &Instance, voter: PointId, cost: ClientCost, all: &[Solution]) -> Solution {
    let mut best = &all[0];
    let mut best_cost = client_cost(inst.space(), voter, best, cost);
    for sol in &all[1..] {
        let c = client_cost(inst.space(), voter, sol, cost);
        if strictly_less(c, best_cost) {
            best = sol;
            best_cost = c;
        }
    }
    best.clone()
}

/// Profile whose candidates are the expanded voters' top committees, one
/// per voter and duplicates kept.
pub fn induced_profile(inst: &Instance, cost: ClientCost) -> Result<OrdinalProfile, VotingError> {
    induced_profile_capped(inst, cost, DEFAULT_VOTER_CAP)
}

pub fn induced_profile_capped(
    inst: &Instance,
    cost: ClientCost,
    cap: u64,
) -> Result<OrdinalProfile, VotingError> {
    let n = inst.total_weight();
    if n > cap {
        return Err(VotingError::TooManyVoters { n, cap });
    }
    let all: Vec<Solution> = enumerate_solutions_capped(inst, DEFAULT_CAP)?.collect();
    let voters: Vec<PointId> = inst
        .clients()
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.point, c.weight as usize))
        .collect();
    let mut committees: Vec<Solution> = Vec::with_capacity(voters.len());
    for (i, &v) in voters.iter().enumerate() {
        // co-located voters share a top committee
        match voters[..i].iter().position(|&u| u == v) {
            Some(j) => committees.push(committees[j].clone()),
            None => committees.push(best_for(inst, v, cost, &all)),
        }
    }
    let rankings = voters
        .iter()
        .map(|&v| {
            let costs: Vec<f64> = committees
                .iter()
                .map(|a| client_cost(inst.space(), v, a, cost))
                .collect();
            let mut order: Vec<usize> = (0..committees.len()).collect();
            order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
            order
        })
        .collect();
    OrdinalProfile::new(voters, committees, rankings)
}

/// Plurality Veto with voters vetoing in `order` (all voters, each once).
pub fn plurality_veto(
    profile: &OrdinalProfile,
    order: &[usize],
) -> Result<VetoTranscript, VotingError> {
    profile.validate()?;
    let n = profile.voter_count();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
    {
        return Err(VotingError::BadOrder { voters: n });
    }
    let m = profile.committees.len();
    let mut scores = vec![0u64; m];
    let mut supporters: Vec<VecDeque<usize>> = vec![VecDeque::new(); m];
    for (v, r) in profile.rankings.iter().enumerate() {
        scores[r[0]] += 1;
        supporters[r[0]].push_back(v);
    }
    let initial_scores = scores.clone();
    let mut matching = vec![usize::MAX; n];
    let mut steps = Vec::with_capacity(n);
    let mut winner = 0;
    for &v in order {
        let vetoed = *profile.rankings[v]
            .iter()
            .rev()
            .find(|&&c| scores[c] > 0)
            .expect("total score equals the number of remaining vetoes");
        scores[vetoed] -= 1;
        matching[v] = supporters[vetoed]
            .pop_front()
            .expect("one supporter per point of score");
        if scores[vetoed] == 0 {
            winner = vetoed;
        }
        steps.push(VetoStep {
            voter: v,
            vetoed,
            scores: scores.clone(),
        });
    }
    Ok(VetoTranscript {
        order: order.to_vec(),
        initial_scores,
        steps,
        winner,
        matching,
    })
}

/// `spec(winner) / spec(optimum)` with `0/0 = 1`.
pub fn realized_distortion(
    inst: &Instance,
    winner: &Solution,
    spec: ObjectiveSpec,
) -> Result<f64, SolveError> {
    let opt = optimum_capped(inst, spec, DEFAULT_CAP)?;
    let value = crate::metric_core::objective_value(inst, winner, spec)?;
    Ok(ratio(value, opt.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{generate, Family, FamilySpec};
    use crate::metric_core::{Aggregator, Client, Facility, MetricSpace};

    fn profile(rankings: Vec<Vec<usize>>, m: usize) -> OrdinalProfile {
        let committees = (0..m).map(|i| Solution::new(vec![i])).collect();
        OrdinalProfile::new(vec![], committees, rankings).unwrap()
    }

    #[test]
    fn fig2_top_committee() {
        let inst = generate(&FamilySpec::new(Family::Fig2, 5)).unwrap();
        assert_eq!(
            inst.display_solution(&top_committee(&inst, 1, ClientCost::Sum).unwrap()),
            "{B,C}"
        );
    }

    #[test]
    fn fig5_top_committee_breaks_tie_lexicographically() {
        // {A, A} and {A, C} both cost sqrt 2 / 2 for the voter at C
        let inst = generate(&FamilySpec::new(Family::Fig5, 2)).unwrap();
        assert_eq!(
            inst.display_solution(&top_committee(&inst, 1, ClientCost::Max).unwrap()),
            "{A,A}"
        );
    }

    #[test]
    fn co_located_voter_gets_zero_cost() {
        let space = MetricSpace::from_coords(1, vec![vec![0.0], vec![3.0]]).unwrap();
        let inst = Instance::new(
            space,
            vec![Client {
                point: 0,
                weight: 1,
            }],
            vec![
                Facility { point: 0, mult: 2 },
                Facility { point: 1, mult: 2 },
            ],
            2,
        )
        .unwrap();
        let top = top_committee(&inst, 0, ClientCost::Sum).unwrap();
        assert_eq!(top.slots(), &[0, 0]);
    }

    #[test]
    fn induced_profile_of_fig2() {
        let inst = generate(&FamilySpec::new(Family::Fig2, 3)).unwrap();
        let p = induced_profile(&inst, ClientCost::Sum).unwrap();
        assert_eq!(p.voters, vec![0, 1, 1]);
        assert_eq!(p.committees.len(), 3);
        // the voter at A prefers {A, B} (cost 1); voters at B prefer {B, C}
        assert_eq!(p.committees[0].slots(), &[0, 1]);
        assert_eq!(p.committees[1].slots(), &[1, 2]);
        assert_eq!(p.rankings[0], vec![0, 1, 2]);
        assert_eq!(p.rankings[1], vec![1, 2, 0]);
        assert_eq!(p.rankings[2], vec![1, 2, 0]);
    }

    #[test]
    fn single_voter_wins() {
        let p = profile(vec![vec![0]], 1);
        let t = plurality_veto(&p, &[0]).unwrap();
        assert_eq!(t.winner, 0);
        assert_eq!(t.matching, vec![0]);
    }

    #[test]
    fn unanimity() {
        let p = profile(vec![vec![1, 0, 2], vec![1, 2, 0], vec![1, 0, 2]], 3);
        let t = plurality_veto(&p, &[0, 1, 2]).unwrap();
        assert_eq!(t.initial_scores, vec![0, 3, 0]);
        assert_eq!(t.winner, 1);
    }

    #[test]
    fn hand_stepped_three_voters() {
        // scores start at (1, 2, 0); voter 0 vetoes 1, voter 1 vetoes 0,
        // which empties it, and voter 2 finally vetoes 1
        let p = profile(vec![vec![0, 2, 1], vec![1, 2, 0], vec![1, 0, 2]], 3);
        let t = plurality_veto(&p, &[0, 1, 2]).unwrap();
        assert_eq!(t.initial_scores, vec![1, 2, 0]);
        assert_eq!(t.steps[0].vetoed, 1);
        assert_eq!(t.steps[0].scores, vec![1, 1, 0]);
        assert_eq!(t.steps[1].vetoed, 0);
        assert_eq!(t.steps[1].scores, vec![0, 1, 0]);
        assert_eq!(t.steps[2].vetoed, 1);
        assert_eq!(t.winner, 1);
        assert_eq!(t.matching, vec![1, 0, 2]);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            OrdinalProfile::new(vec![], vec![Solution::new(vec![0])], vec![]),
            Err(VotingError::EmptyProfile)
        ));
        assert!(matches!(
            OrdinalProfile::new(
                vec![],
                vec![Solution::new(vec![0]), Solution::new(vec![1])],
                vec![vec![0, 0]]
            ),
            Err(VotingError::Profile(_))
        ));
        let p = profile(vec![vec![0, 1], vec![1, 0]], 2);
        assert!(matches!(
            plurality_veto(&p, &[0, 0]),
            Err(VotingError::BadOrder { .. })
        ));
    }

    #[test]
    fn profile_document_round_trip() {
        let inst = generate(&FamilySpec::new(Family::Fig2, 4)).unwrap();
        let p = induced_profile(&inst, ClientCost::Max).unwrap();
        assert_eq!(OrdinalProfile::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn distortion_conventions() {
        let inst = generate(&FamilySpec::new(Family::Fig2, 10)).unwrap();
        let spec = ObjectiveSpec::new(Aggregator::LCentrum(3), ClientCost::Sum);
        let opt = optimum_capped(&inst, spec, DEFAULT_CAP).unwrap();
        assert_eq!(
            realized_distortion(&inst, &opt.solution, spec).unwrap(),
            1.0
        );
        let space = MetricSpace::from_coords(1, vec![vec![0.0], vec![1.0]]).unwrap();
        let zero = Instance::new(
            space,
            vec![Client {
                point: 0,
                weight: 2,
            }],
            vec![Facility { point: 0, mult: 1 }],
            1,
        )
        .unwrap();
        assert_eq!(
            realized_distortion(&zero, &Solution::new(vec![0]), ObjectiveSpec::MAX_MAX).unwrap(),
            1.0
        );
    }
}

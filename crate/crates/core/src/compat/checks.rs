// SPDX-License-Identifier: Apache-2.0

//! Each guarantee evaluated on a concrete instance, as `lhs <= rhs` (or
//! `lhs == rhs` for identities) with the numeric slack.

use super::bounds::{bound_value, stitched_case_bound, BoundParams};
use super::{Analysis, CompatError, Pair};
use crate::metric_core::{
    set_pair_distance, Aggregator, ClientCost, ObjectiveError, ObjectiveSpec, PointId, Solution,
};
use crate::tolerance::REL_TOL;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

const SET_PAIR_DRAWS: usize = 64;
const SET_PAIR_SEED: u64 = 0x5e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// `alpha_{Max-f}(O_{Sum-f}) <= 1 / alpha_{Sum-f}(O_{Max-f}) + 2`.
    SumOptimumTradeoff(ClientCost),
    /// The better of the Sum-f and Max-f optima is within `1 + sqrt 2` for
    /// both.
    PairMinBound(ClientCost),
    /// The Sum-Sum optimum is within 3 for Max-Sum, Sum-Max and Max-Max.
    SumSumApprox,
    /// `alpha_MS(O_SS) <= 1 + a + max(1, a) / alpha_SS(O_MS)` with
    /// `a = k' / (k - k')`, for `1 <= k' < k`.
    OverlapBound,
    /// Best Sum-Sum / Max-Sum candidate within the general bound for `k`.
    StitchedBound,
    /// Best Sum-Sum / Max-Sum candidate within the bound for this
    /// instance's `k'`.
    StitchedCaseBound,
    /// `alpha_MM(O_MS) * alpha_MS(O_MM) == k2 / k1`.
    MaxPairProduct,
    /// `min(alpha_MS(O_MM), alpha_MM(O_MS)) <= min(sqrt(k2 / k1), 2)`.
    MaxPairBound,
    /// `alpha_SS(O_SM) * alpha_SM(O_SS) <= k`.
    SumPairProduct,
    /// `min(alpha_SS(O_SM), alpha_SM(O_SS)) <= sqrt k`.
    SumPairSqrtK,
    /// `(k - 2) d(j, b*) >= (k - 2 k1) d(i*, b*)` for every client `j`.
    FarSlotLowerBound,
    /// Every slot `a` still available outside `O_MS` has a client `j` with
    /// `d(j, b*) <= d(j, a)`.
    ExchangeWitness,
    /// `f(A, B) <= |B|/|C| f(A, C) + |A|/|C| f(B, C)` on seeded random
    /// multisets of points.
    SetPairInequality,
}

impl Check {
    /// Every check that applies to committees of size `k`, including the
    /// cost-parametrised ones for SUM, MAX and each q-social cost with
    /// `q > k / 2`.
    pub fn suite(k: usize) -> Vec<Check> {
        let mut costs = vec![ClientCost::Sum, ClientCost::Max];
        costs.extend((k / 2 + 1..=k).map(ClientCost::QSocial));
        let mut out: Vec<Check> = costs
            .iter()
            .map(|&c| Check::SumOptimumTradeoff(c))
            .collect();
        out.extend(costs.iter().map(|&c| Check::PairMinBound(c)));
        out.extend([
            Check::SumSumApprox,
            Check::OverlapBound,
            Check::StitchedBound,
            Check::StitchedCaseBound,
            Check::MaxPairProduct,
            Check::MaxPairBound,
            Check::SumPairProduct,
            Check::SumPairSqrtK,
            Check::FarSlotLowerBound,
            Check::ExchangeWitness,
            Check::SetPairInequality,
        ]);
        out
    }

    /// Name with any cost parameter removed, for grouping results.
    pub fn family_name(&self) -> String {
        match self {
            Check::SumOptimumTradeoff(ClientCost::QSocial(_)) => "sum-optimum-tradeoff:q".into(),
            Check::PairMinBound(ClientCost::QSocial(_)) => "pair-min-bound:q".into(),
            c => c.to_string(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::SumOptimumTradeoff(c) => write!(f, "sum-optimum-tradeoff:{c}"),
            Check::PairMinBound(c) => write!(f, "pair-min-bound:{c}"),
            Check::SumSumApprox => f.write_str("sum-sum-approx"),
            Check::OverlapBound => f.write_str("overlap-bound"),
            Check::StitchedBound => f.write_str("stitched-bound"),
            Check::StitchedCaseBound => f.write_str("stitched-case-bound"),
            Check::MaxPairProduct => f.write_str("max-pair-product"),
            Check::MaxPairBound => f.write_str("max-pair-bound"),
            Check::SumPairProduct => f.write_str("sum-pair-product"),
            Check::SumPairSqrtK => f.write_str("sum-pair-sqrt-k"),
            Check::FarSlotLowerBound => f.write_str("far-slot-lower-bound"),
            Check::ExchangeWitness => f.write_str("exchange-witness"),
            Check::SetPairInequality => f.write_str("set-pair-inequality"),
        }
    }
}

impl FromStr for Check {
    type Err = CompatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CompatError::UnknownCheck(s.to_string());
        let cost = |c: &str| {
            c.parse::<ClientCost>()
                .map_err(|_: ObjectiveError| unknown())
        };
        if let Some(c) = s.strip_prefix("sum-optimum-tradeoff:") {
            return Ok(Check::SumOptimumTradeoff(cost(c)?));
        }
        if let Some(c) = s.strip_prefix("pair-min-bound:") {
            return Ok(Check::PairMinBound(cost(c)?));
        }
        Ok(match s {
            "sum-sum-approx" => Check::SumSumApprox,
            "overlap-bound" => Check::OverlapBound,
            "stitched-bound" => Check::StitchedBound,
            "stitched-case-bound" => Check::StitchedCaseBound,
            "max-pair-product" => Check::MaxPairProduct,
            "max-pair-bound" => Check::MaxPairBound,
            "sum-pair-product" => Check::SumPairProduct,
            "sum-pair-sqrt-k" => Check::SumPairSqrtK,
            "far-slot-lower-bound" => Check::FarSlotLowerBound,
            "exchange-witness" => Check::ExchangeWitness,
            "set-pair-inequality" => Check::SetPairInequality,
            _ => return Err(unknown()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The precondition does not hold on this instance.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: CheckStatus,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for inequalities, `-|lhs - rhs|` for identities.
    pub slack: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    fn tolerance(lhs: f64, rhs: f64) -> f64 {
        REL_TOL * 1f64.max(lhs.abs()).max(rhs.abs())
    }

    fn at_most(check: Check, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        let ok = lhs <= rhs || slack >= -Self::tolerance(lhs, rhs);
        Self {
            check,
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            lhs,
            rhs,
            slack,
        }
    }

    fn equal(check: Check, lhs: f64, rhs: f64) -> Self {
        let slack = -(lhs - rhs).abs();
        let ok = lhs == rhs || slack >= -Self::tolerance(lhs, rhs);
        Self {
            check,
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            lhs,
            rhs,
            slack,
        }
    }

    fn skipped(check: Check) -> Self {
        Self {
            check,
            status: CheckStatus::NotApplicable,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
        }
    }
}

/// Client costs with the triangle-like property the trade-off relies on.
fn cost_applies(cost: ClientCost, k: usize) -> bool {
    match cost {
        ClientCost::Sum | ClientCost::Max => true,
        ClientCost::QSocial(q) => 2 * q > k && q <= k,
        ClientCost::Min => false,
    }
}

pub(super) fn run(an: &Analysis<'_>, check: Check) -> Result<CheckOutcome, CompatError> {
    use ObjectiveSpec as S;
    let inst = an.instance();
    let k = inst.k();
    let opt = |spec| an.optimum(spec).map(|o| o.solution);
    Ok(match check {
        Check::SumOptimumTradeoff(cost) | Check::PairMinBound(cost) => {
            if !cost_applies(cost, k) {
                return Ok(CheckOutcome::skipped(check));
            }
            let sum_f = ObjectiveSpec::new(Aggregator::Sum, cost);
            let max_f = ObjectiveSpec::new(Aggregator::Max, cost);
            let x = an.alpha(&opt(max_f)?, sum_f)?;
            let y = an.alpha(&opt(sum_f)?, max_f)?;
            if matches!(check, Check::SumOptimumTradeoff(_)) {
                CheckOutcome::at_most(check, y, 1.0 / x + 2.0)
            } else {
                CheckOutcome::at_most(check, x.min(y), 1.0 + 2f64.sqrt())
            }
        }
        Check::SumSumApprox => {
            let o = opt(S::SUM_SUM)?;
            let mut worst = 0f64;
            for spec in [S::MAX_SUM, S::SUM_MAX, S::MAX_MAX] {
                worst = worst.max(an.alpha(&o, spec)?);
            }
            CheckOutcome::at_most(check, worst, 3.0)
        }
        Check::OverlapBound => {
            let kp = an.stitch()?.k_prime;
            if kp == 0 || kp >= k {
                return Ok(CheckOutcome::skipped(check));
            }
            let a = kp as f64 / (k - kp) as f64;
            let lhs = an.alpha(&opt(S::SUM_SUM)?, S::MAX_SUM)?;
            let x = an.alpha(&opt(S::MAX_SUM)?, S::SUM_SUM)?;
            CheckOutcome::at_most(check, lhs, 1.0 + a + a.max(1.0) / x)
        }
        Check::StitchedBound | Check::StitchedCaseBound => {
            let pair = Pair::new(S::SUM_SUM, S::MAX_SUM);
            let best = an.best_simultaneous(pair)?.best.simultaneous;
            let rhs = if check == Check::StitchedBound {
                bound_value(
                    &pair,
                    BoundParams {
                        k,
                        k1: 1.0,
                        k2: 1.0,
                    },
                )?
            } else {
                stitched_case_bound(k, an.stitch()?.k_prime)
            };
            CheckOutcome::at_most(check, best, rhs)
        }
        Check::MaxPairProduct | Check::MaxPairBound => {
            let d = an.duality()?;
            let mm_of_ms = an.alpha(&opt(S::MAX_SUM)?, S::MAX_MAX)?;
            let ms_of_mm = an.alpha(&opt(S::MAX_MAX)?, S::MAX_SUM)?;
            if check == Check::MaxPairProduct {
                CheckOutcome::equal(check, mm_of_ms * ms_of_mm, d.k2 / d.k1)
            } else {
                CheckOutcome::at_most(check, mm_of_ms.min(ms_of_mm), (d.k2 / d.k1).sqrt().min(2.0))
            }
        }
        Check::SumPairProduct | Check::SumPairSqrtK => {
            let ss_of_sm = an.alpha(&opt(S::SUM_MAX)?, S::SUM_SUM)?;
            let sm_of_ss = an.alpha(&opt(S::SUM_SUM)?, S::SUM_MAX)?;
            if check == Check::SumPairProduct {
                CheckOutcome::at_most(check, ss_of_sm * sm_of_ss, k as f64)
            } else {
                CheckOutcome::at_most(check, ss_of_sm.min(sm_of_ss), (k as f64).sqrt())
            }
        }
        Check::FarSlotLowerBound => {
            let d = an.duality()?;
            let kf = k as f64;
            let lhs = (kf - 2.0 * d.k1) * inst.dist(d.i_star, d.b_star);
            let rhs = inst
                .clients()
                .iter()
                .map(|c| (kf - 2.0) * inst.dist(c.point, d.b_star))
                .fold(f64::INFINITY, f64::min);
            CheckOutcome::at_most(check, lhs, rhs)
        }
        Check::ExchangeWitness => {
            let b = an.duality()?.b_star;
            let o_ms = opt(S::MAX_SUM)?;
            let used = o_ms.counts();
            let in_use = |p: PointId| used.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, c)| c);
            let mut worst = f64::INFINITY;
            for &(a, mult) in inst.pool() {
                if mult <= in_use(a) {
                    continue;
                }
                let margin = inst
                    .clients()
                    .iter()
                    .map(|c| inst.dist(c.point, a) - inst.dist(c.point, b))
                    .fold(f64::NEG_INFINITY, f64::max);
                worst = worst.min(margin);
            }
            if worst == f64::INFINITY {
                return Ok(CheckOutcome::skipped(check));
            }
            CheckOutcome::at_most(check, 0.0, worst)
        }
        Check::SetPairInequality => {
            let space = inst.space();
            let n = space.point_count();
            let mut rng = ChaCha8Rng::seed_from_u64(SET_PAIR_SEED);
            let draw = |rng: &mut ChaCha8Rng| {
                let len = rng.gen_range(1..=4);
                Solution::new((0..len).map(|_| rng.gen_range(0..n)).collect())
            };
            let mut worst: Option<CheckOutcome> = None;
            for _ in 0..SET_PAIR_DRAWS {
                let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
                let f = |x: &Solution, y: &Solution| {
                    set_pair_distance(space, x.slots(), y.slots()).expect("nonempty")
                };
                let cl = c.len() as f64;
                let rhs = b.len() as f64 / cl * f(&a, &c) + a.len() as f64 / cl * f(&b, &c);
                let out = CheckOutcome::at_most(check, f(&a, &b), rhs);
                if worst.as_ref().is_none_or(|w| out.slack < w.slack) {
                    worst = Some(out);
                }
            }
            worst.expect("at least one draw")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{generate, Family, FamilySpec};

    #[test]
    fn names_round_trip() {
        for check in Check::suite(5) {
            assert_eq!(check.to_string().parse::<Check>().unwrap(), check);
        }
        assert!(matches!(
            "no-such-check".parse::<Check>(),
            Err(CompatError::UnknownCheck(_))
        ));
    }

    #[test]
    fn suite_includes_majority_q() {
        let s = Check::suite(4);
        assert!(s.contains(&Check::SumOptimumTradeoff(ClientCost::QSocial(3))));
        assert!(!s.contains(&Check::SumOptimumTradeoff(ClientCost::QSocial(2))));
    }

    #[test]
    fn minority_q_is_skipped() {
        let inst = generate(&FamilySpec::new(Family::Fig4, 10).with_k(4)).unwrap();
        let out = Analysis::new(&inst)
            .check(Check::SumOptimumTradeoff(ClientCost::QSocial(2)))
            .unwrap();
        assert_eq!(out.status, CheckStatus::NotApplicable);
    }

    #[test]
    fn max_cost_tradeoff_is_tight_on_fig4() {
        let inst = generate(&FamilySpec::new(Family::Fig4, 1_000_000).with_k(3)).unwrap();
        let out = Analysis::new(&inst)
            .check(Check::SumOptimumTradeoff(ClientCost::Max))
            .unwrap();
        let r2 = 1.0 + 2f64.sqrt();
        assert!((out.lhs - r2).abs() < 1e-4, "{out:?}");
        assert!((out.rhs - r2).abs() < 1e-4, "{out:?}");
        assert!(out.passed());
    }

    #[test]
    fn lower_bound_instances_pass_everything() {
        let specs = [
            FamilySpec::new(Family::Fig2, 1000),
            FamilySpec::new(Family::Fig3, 1000),
            FamilySpec::new(Family::Fig4, 1000).with_k(5),
            FamilySpec::new(Family::Fig5, 2),
        ];
        for spec in specs {
            let inst = generate(&spec).unwrap();
            let an = Analysis::new(&inst);
            for check in Check::suite(inst.k()) {
                let out = an.check(check).unwrap();
                assert!(out.passed(), "{} on {}: {out:?}", check, spec.family);
            }
        }
    }

    #[test]
    fn product_identity_is_exact_on_fig5() {
        let inst = generate(&FamilySpec::new(Family::Fig5, 2)).unwrap();
        let out = Analysis::new(&inst).check(Check::MaxPairProduct).unwrap();
        assert!(out.slack.abs() < 1e-12);
        // O_MS = {C, D} has k1 = 1 and O_MM = {A, A} has k2 = 2
        assert!((out.rhs - 2.0).abs() < 1e-12);
    }
}

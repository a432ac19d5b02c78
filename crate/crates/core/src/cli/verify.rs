// SPDX-License-Identifier: Apache-2.0

//! Batch verification: seeded random trials through every check, and the
//! lower-bound instances against their large-`n` limits.

use crate::compat::{Analysis, Check, CheckStatus, CompatError, Pair};
use crate::instances::{generate, Family, FamilySpec};
use crate::metric_core::{
    build_committee_metric, check_cost_triangle_property, validate_metric, Aggregator, ClientCost,
    Instance, ObjectiveSpec, TriangleMode,
};
use crate::solvers::{brute_force, count_solutions, max_max_fast, sum_sum_fast, DEFAULT_CAP};
use crate::tolerance::{approx_eq, LIMIT_TOL, REL_TOL};
use crate::voting::{induced_profile, plurality_veto, realized_distortion};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Random veto orders tried per profile, after the identity order.
pub const RANDOM_VETO_ORDERS: usize = 10;

/// Committees above which the committee metric is not materialised in a
/// trial.
const COMMITTEE_METRIC_LIMIT: u128 = 40;

/// Random sizes for trial `index` of a run seeded with `seed`: up to 8
/// points, at most 8 facility slots, `k` in `1..=5` and total weight at
/// most 12.
pub fn trial_instance(seed: u64, index: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let family = if rng.gen_bool(0.5) {
        Family::RandomEuclidean
    } else {
        Family::RandomMetric
    };
    let points = rng.gen_range(3..=8);
    let facilities = rng.gen_range(1..=points.min(6));
    let clients = rng.gen_range(1..=points.min(5));
    let spec = FamilySpec {
        family,
        n: rng.gen_range(clients as u64..=12),
        k: Some(1),
        seed: rng.gen(),
        points,
        clients,
        facilities,
        max_mult: (8 / facilities).clamp(1, 3),
        dim: 2,
    };
    let inst = generate(&spec).expect("trial sizes are valid");
    let total: usize = inst.pool().iter().map(|&(_, m)| m).sum();
    inst.with_k(rng.gen_range(1..=total.min(5)))
        .expect("k within multiplicity")
}

/// Outcome of one named check on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub name: String,
    pub status: CheckStatus,
    pub slack: f64,
}

impl Record {
    fn new(name: impl Into<String>, passed: bool, slack: f64) -> Self {
        let status = if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name: name.into(),
            status,
            slack,
        }
    }
}

fn cost_name(cost: ClientCost) -> &'static str {
    match cost {
        ClientCost::Sum => "sum",
        ClientCost::Max => "max",
        ClientCost::QSocial(_) => "q",
        ClientCost::Min => "min",
    }
}

/// Every check on one instance. Ordering of the records is fixed.
pub fn run_trial(inst: &Instance, order_seed: u64) -> Result<Vec<Record>, CompatError> {
    let an = Analysis::new(inst);
    let mut out = Vec::new();
    for check in Check::suite(inst.k()) {
        let o = an.check(check)?;
        out.push(Record {
            name: check.family_name(),
            status: o.status,
            slack: o.slack,
        });
    }

    let ss = sum_sum_fast(inst);
    let ss_bf = brute_force(inst, ObjectiveSpec::SUM_SUM, DEFAULT_CAP)?;
    out.push(Record::new(
        "fast-sum-sum-matches",
        approx_eq(ss.value, ss_bf.value) && ss.solution == ss_bf.solution,
        0.0 - (ss.value - ss_bf.value).abs(),
    ));
    let mm = max_max_fast(inst);
    let mm_bf = brute_force(inst, ObjectiveSpec::MAX_MAX, DEFAULT_CAP)?;
    out.push(Record::new(
        "fast-max-max-matches",
        approx_eq(mm.value, mm_bf.value) && mm.solution == mm_bf.solution,
        0.0 - (mm.value - mm_bf.value).abs(),
    ));

    let k = inst.k();
    let mut costs = vec![ClientCost::Sum, ClientCost::Max];
    costs.extend((k / 2 + 1..=k).map(ClientCost::QSocial));
    for &cost in &costs {
        let tri = check_cost_triangle_property(
            inst,
            cost,
            TriangleMode::Sample {
                draws: 200,
                seed: order_seed,
            },
        );
        out.push(Record::new(
            format!("cost-triangle:{}", cost_name(cost)),
            tri.passed(),
            f64::NAN,
        ));
    }
    if count_solutions(inst) <= COMMITTEE_METRIC_LIMIT {
        for cost in [ClientCost::Sum, ClientCost::Max] {
            let cm = build_committee_metric(inst, cost, COMMITTEE_METRIC_LIMIT)
                .expect("below the limit");
            out.push(Record::new(
                format!("committee-metric:{}", cost_name(cost)),
                validate_metric(&cm.space).is_ok(),
                f64::NAN,
            ));
        }
    }

    let n = inst.total_weight();
    let ls = [1, n.div_ceil(2), n];
    let mut rng = ChaCha8Rng::seed_from_u64(order_seed);
    for &cost in &costs {
        let profile = induced_profile(inst, cost).map_err(|e| match e {
            crate::voting::VotingError::Solve(s) => CompatError::Solve(s),
            other => unreachable!("induced profiles are valid: {other}"),
        })?;
        let voters = profile.voter_count();
        let mut orders = vec![(0..voters).collect::<Vec<_>>()];
        for _ in 0..RANDOM_VETO_ORDERS {
            let mut o: Vec<usize> = (0..voters).collect();
            o.shuffle(&mut rng);
            orders.push(o);
        }
        let mut worst = f64::INFINITY;
        for order in &orders {
            let t = plurality_veto(&profile, order).expect("orders are permutations");
            let winner = &profile.committees[t.winner];
            for &l in &ls {
                let spec = ObjectiveSpec::new(Aggregator::LCentrum(l), cost);
                worst = worst.min(3.0 - realized_distortion(inst, winner, spec)?);
            }
        }
        out.push(Record::new(
            format!("veto-distortion:{}", cost_name(cost)),
            worst >= -REL_TOL * 3.0,
            worst,
        ));
    }
    Ok(out)
}

/// Aggregate of one check across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    /// Smallest slack among applicable runs; `NaN` if none reported one.
    pub worst_slack: f64,
}

pub fn tally<'a>(records: impl IntoIterator<Item = &'a Record>) -> BTreeMap<String, Tally> {
    let mut out: BTreeMap<String, Tally> = BTreeMap::new();
    for r in records {
        let t = out.entry(r.name.clone()).or_insert(Tally {
            pass: 0,
            fail: 0,
            not_applicable: 0,
            worst_slack: f64::NAN,
        });
        match r.status {
            CheckStatus::Pass => t.pass += 1,
            CheckStatus::Fail => t.fail += 1,
            CheckStatus::NotApplicable => t.not_applicable += 1,
        }
        if r.status != CheckStatus::NotApplicable && !r.slack.is_nan() {
            t.worst_slack = if t.worst_slack.is_nan() {
                r.slack
            } else {
                t.worst_slack.min(r.slack)
            };
        }
    }
    out
}

/// A lower-bound family whose best simultaneous ratio has a known limit.
#[derive(Debug, Clone)]
pub struct LowerBoundCase {
    pub name: String,
    pub spec: FamilySpec,
    pub pair: Pair,
    pub limit: f64,
}

pub fn lower_bound_cases() -> Vec<LowerBoundCase> {
    let n = 1_000_000;
    let r2 = 1.0 + 2f64.sqrt();
    let ss_ms = Pair::new(ObjectiveSpec::SUM_SUM, ObjectiveSpec::MAX_SUM);
    let sm_mm = Pair::new(ObjectiveSpec::SUM_MAX, ObjectiveSpec::MAX_MAX);
    let mm_ms = Pair::new(ObjectiveSpec::MAX_MAX, ObjectiveSpec::MAX_SUM);
    let mut out = vec![
        LowerBoundCase {
            name: "fig2".into(),
            spec: FamilySpec::new(Family::Fig2, n),
            pair: ss_ms,
            limit: r2,
        },
        LowerBoundCase {
            name: "fig3".into(),
            spec: FamilySpec::new(Family::Fig3, n),
            pair: ss_ms,
            limit: (4.0 + 7f64.sqrt()) / 3.0,
        },
    ];
    for k in [2, 3, 5] {
        out.push(LowerBoundCase {
            name: format!("fig4-k{k}"),
            spec: FamilySpec::new(Family::Fig4, n).with_k(k),
            pair: sm_mm,
            limit: r2,
        });
    }
    out.push(LowerBoundCase {
        name: "fig5".into(),
        spec: FamilySpec::new(Family::Fig5, 2),
        pair: mm_ms,
        limit: 2f64.sqrt(),
    });
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundResult {
    pub name: String,
    pub pair: Pair,
    pub limit: f64,
    /// Best simultaneous ratio over all committees.
    pub exhaustive: f64,
    /// Ratio of the best-of-candidates selector.
    pub selected: f64,
    pub passed: bool,
}

pub fn run_lower_bound(case: &LowerBoundCase, tol: f64) -> Result<LowerBoundResult, CompatError> {
    let inst = generate(&case.spec).expect("lower-bound specs are valid");
    let an = Analysis::new(&inst);
    let exhaustive = an.exhaustive_best(case.pair)?.simultaneous;
    let selected = an.best_simultaneous(case.pair)?.best.simultaneous;
    let passed = (exhaustive - case.limit).abs() <= tol && (selected - case.limit).abs() <= tol;
    Ok(LowerBoundResult {
        name: case.name.clone(),
        pair: case.pair,
        limit: case.limit,
        exhaustive,
        selected,
        passed,
    })
}

pub fn run_lower_bounds(tol: f64) -> Result<Vec<LowerBoundResult>, CompatError> {
    lower_bound_cases()
        .iter()
        .map(|c| run_lower_bound(c, tol))
        .collect()
}

/// Default tolerance for [`run_lower_bounds`].
pub const DEFAULT_LIMIT_TOL: f64 = LIMIT_TOL;

// SPDX-License-Identifier: Apache-2.0

//! Committee metric: clients and whole committees as points of one space,
//! so that committee selection becomes single-facility location.

use super::instance::{Instance, Solution};
use super::objective::{client_cost, ClientCost};
use super::space::{MetricSpace, PointId};
use crate::solvers::{count_solutions, enumerate_solutions_capped};
use crate::tolerance::slack_of;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Default limit on committees materialised by [`build_committee_metric`].
pub const DEFAULT_COMMITTEE_CAP: u128 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("{count} committees exceed the limit of {cap}")]
    TooManyCommittees { count: u128, cap: u128 },
}

/// Points `0..client_count` are the instance's client entries in order;
/// point `client_count + c` is `committees[c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitteeMetric {
    pub space: MetricSpace,
    pub client_count: usize,
    pub committees: Vec<Solution>,
}

/// Builds the committee metric for `cost`.
///
/// * client to committee: `f(i, A)`
/// * committee to committee: `min_i f(i, A) + f(i, B)`
/// * client to client: `min_A f(i, A) + f(j, A)`
///
/// The client-client entry is the shortest route through a committee, not
/// the ground distance `d(i, j)`. SUM costs grow with `k`, so `f(i, A)` can
/// exceed `d(i, j) + f(j, A)`. With the routed entry the result is a metric
/// whenever `cost` passes [`check_cost_triangle_property`].
pub fn build_committee_metric(
    inst: &Instance,
    cost: ClientCost,
    cap: u128,
) -> Result<CommitteeMetric, ReductionError> {
    let count = count_solutions(inst);
    if count > cap {
        return Err(ReductionError::TooManyCommittees { count, cap });
    }
    let committees: Vec<Solution> = enumerate_solutions_capped(inst, cap)
        .map_err(|_| ReductionError::TooManyCommittees { count, cap })?
        .collect();
    let clients = inst.clients();
    let nc = clients.len();
    let m = committees.len();
    let f: Vec<Vec<f64>> = clients
        .iter()
        .map(|c| {
            committees
                .iter()
                .map(|a| client_cost(inst.space(), c.point, a, cost))
                .collect()
        })
        .collect();
    let n = nc + m;
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..nc {
        for j in (i + 1)..nc {
            let v = (0..m)
                .map(|a| f[i][a] + f[j][a])
                .fold(f64::INFINITY, f64::min);
            d[i][j] = v;
            d[j][i] = v;
        }
        for a in 0..m {
            d[i][nc + a] = f[i][a];
            d[nc + a][i] = f[i][a];
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let v = (0..nc)
                .map(|i| f[i][a] + f[i][b])
                .fold(f64::INFINITY, f64::min);
            d[nc + a][nc + b] = v;
            d[nc + b][nc + a] = v;
        }
    }
    let space = MetricSpace::from_matrix(d).expect("costs are finite and nonnegative");
    Ok(CommitteeMetric {
        space,
        client_count: nc,
        committees,
    })
}

/// How [`check_cost_triangle_property`] chooses `(i, j, A, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleMode {
    /// Every pair of client entries and every pair of committees.
    Exhaustive,
    /// Uniform random clients and committees from a seeded generator.
    Sample { draws: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TriangleCheck {
    Pass {
        checked: usize,
    },
    /// `f(i, A) = lhs > rhs = f(i, B) + f(j, B) + f(j, A)`; `i` and `j` are
    /// ground points.
    Counterexample {
        i: PointId,
        j: PointId,
        a: Solution,
        b: Solution,
        lhs: f64,
        rhs: f64,
    },
}

impl TriangleCheck {
    pub fn passed(&self) -> bool {
        matches!(self, TriangleCheck::Pass { .. })
    }
}

/// Checks `f(i, A) <= f(i, B) + f(j, B) + f(j, A)` over clients `i, j` and
/// committees `A, B`.
///
/// Exhaustive mode enumerates committees without a cap, so it is meant for
/// desk-sized instances only.
pub fn check_cost_triangle_property(
    inst: &Instance,
    cost: ClientCost,
    mode: TriangleMode,
) -> TriangleCheck {
    let space = inst.space();
    let test = |i: PointId, j: PointId, a: &Solution, b: &Solution| -> Option<TriangleCheck> {
        let lhs = client_cost(space, i, a, cost);
        let rhs = client_cost(space, i, b, cost)
            + client_cost(space, j, b, cost)
            + client_cost(space, j, a, cost);
        (lhs - rhs > slack_of(lhs, rhs)).then(|| TriangleCheck::Counterexample {
            i,
            j,
            a: a.clone(),
            b: b.clone(),
            lhs,
            rhs,
        })
    };
    let points: Vec<PointId> = inst.clients().iter().map(|c| c.point).collect();
    let mut checked = 0;
    match mode {
        TriangleMode::Exhaustive => {
            let committees: Vec<Solution> = enumerate_solutions_capped(inst, u128::MAX)
                .expect("uncapped enumeration")
                .collect();
            for &i in &points {
                for &j in &points {
                    for a in &committees {
                        for b in &committees {
                            if let Some(cx) = test(i, j, a, b) {
                                return cx;
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
        TriangleMode::Sample { draws, seed } => {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let slots: Vec<PointId> = inst
                .pool()
                .iter()
                .flat_map(|&(p, m)| std::iter::repeat_n(p, m))
                .collect();
            let k = inst.k();
            let committee = |rng: &mut ChaCha8Rng| {
                let picked = rand::seq::index::sample(rng, slots.len(), k);
                Solution::new(picked.into_iter().map(|s| slots[s]).collect())
            };
            for _ in 0..draws {
                let i = points[rng.gen_range(0..points.len())];
                let j = points[rng.gen_range(0..points.len())];
                let a = committee(&mut rng);
                let b = committee(&mut rng);
                if let Some(cx) = test(i, j, &a, &b) {
                    return cx;
                }
                checked += 1;
            }
        }
    }
    TriangleCheck::Pass { checked }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_core::{validate_metric, Client, Facility};

    fn line(
        coords: &[f64],
        clients: &[(usize, u64)],
        facilities: &[(usize, usize)],
        k: usize,
    ) -> Instance {
        let space = MetricSpace::from_coords(1, coords.iter().map(|&x| vec![x]).collect()).unwrap();
        Instance::new(
            space,
            clients
                .iter()
                .map(|&(point, weight)| Client { point, weight })
                .collect(),
            facilities
                .iter()
                .map(|&(point, mult)| Facility { point, mult })
                .collect(),
            k,
        )
        .unwrap()
    }

    fn two_client_line() -> Instance {
        // A = 0, B = 1, C = sqrt 2; clients at A and B
        line(
            &[0.0, 1.0, 2f64.sqrt()],
            &[(0, 1), (1, 4)],
            &[(0, 1), (1, 1), (2, 1)],
            2,
        )
    }

    #[test]
    fn single_committee() {
        let inst = line(&[0.0, 1.0, 3.0], &[(0, 1), (2, 1)], &[(1, 1), (2, 1)], 2);
        let cm = build_committee_metric(&inst, ClientCost::Sum, DEFAULT_COMMITTEE_CAP).unwrap();
        assert_eq!(cm.committees.len(), 1);
        assert_eq!(cm.space.point_count(), 3);
        assert_eq!(cm.space.dist(0, 2), 4.0);
        assert_eq!(cm.space.dist(1, 2), 2.0);
        assert_eq!(validate_metric(&cm.space), Ok(()));
    }

    #[test]
    fn two_client_line_builds_a_metric() {
        let inst = two_client_line();
        for cost in [ClientCost::Sum, ClientCost::Max] {
            let cm = build_committee_metric(&inst, cost, DEFAULT_COMMITTEE_CAP).unwrap();
            assert_eq!(cm.client_count, 2);
            assert_eq!(cm.committees.len(), 3);
            assert_eq!(validate_metric(&cm.space), Ok(()));
        }
    }

    #[test]
    fn ground_distance_between_clients_breaks_the_metric() {
        // f(A, {B, C}) = 1 + sqrt 2 but d(A, B) + f(B, {B, C}) = sqrt 2
        let inst = two_client_line();
        let mut d = build_committee_metric(&inst, ClientCost::Sum, DEFAULT_COMMITTEE_CAP)
            .unwrap()
            .space
            .matrix();
        d[0][1] = inst.dist(0, 1);
        d[1][0] = inst.dist(0, 1);
        let space = MetricSpace::from_matrix(d).unwrap();
        assert!(matches!(
            validate_metric(&space),
            Err(crate::metric_core::MetricViolation::Violation { .. })
        ));
    }

    #[test]
    fn too_many_committees() {
        let inst = two_client_line();
        assert_eq!(
            build_committee_metric(&inst, ClientCost::Sum, 2),
            Err(ReductionError::TooManyCommittees { count: 3, cap: 2 })
        );
    }

    #[test]
    fn min_cost_fails_on_line_witness() {
        // points 0, 1, 9, 10; clients at the ends, two slots near each end
        let inst = line(
            &[0.0, 1.0, 9.0, 10.0],
            &[(0, 1), (3, 1)],
            &[(1, 2), (2, 2)],
            2,
        );
        match check_cost_triangle_property(&inst, ClientCost::Min, TriangleMode::Exhaustive) {
            TriangleCheck::Counterexample {
                i,
                j,
                a,
                b,
                lhs,
                rhs,
            } => {
                assert_eq!((i, j), (0, 3));
                assert_eq!(a.slots(), &[2, 2]);
                assert_eq!(b.slots(), &[1, 2]);
                assert_eq!((lhs, rhs), (9.0, 3.0));
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
        for cost in [ClientCost::Sum, ClientCost::Max] {
            assert!(check_cost_triangle_property(&inst, cost, TriangleMode::Exhaustive).passed());
        }
    }

    #[test]
    fn sampled_sum_passes() {
        let inst = line(
            &[0.0, 0.5, 2.0, 3.5, 7.0],
            &[(0, 2), (3, 1), (4, 1)],
            &[(1, 2), (2, 1), (4, 2)],
            3,
        );
        assert_eq!(
            check_cost_triangle_property(
                &inst,
                ClientCost::Sum,
                TriangleMode::Sample {
                    draws: 500,
                    seed: 3
                }
            ),
            TriangleCheck::Pass { checked: 500 }
        );
    }
}

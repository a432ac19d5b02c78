// SPDX-License-Identifier: Apache-2.0

//! Per-client costs, aggregators over clients, and objective evaluation.

use super::instance::{Instance, Solution};
use super::space::{MetricSpace, PointId};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// How a single client values a committee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClientCost {
    /// Total distance to all slots.
    Sum,
    /// Distance to the farthest slot.
    Max,
    /// Distance to the `q`-th closest slot, slots counted with multiplicity.
    QSocial(usize),
    /// Distance to the closest slot. Kept for negative tests: it does not
    /// satisfy the cost triangle property.
    Min,
}

/// How client costs are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aggregator {
    /// Largest client cost; weights are ignored.
    Max,
    /// Weighted sum of client costs.
    Sum,
    /// Sum of the `l` largest costs over the weight-expanded clients.
    LCentrum(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectiveSpec {
    pub aggregator: Aggregator,
    pub client_cost: ClientCost,
}

impl ObjectiveSpec {
    pub const SUM_SUM: Self = Self::new(Aggregator::Sum, ClientCost::Sum);
    pub const MAX_SUM: Self = Self::new(Aggregator::Max, ClientCost::Sum);
    pub const SUM_MAX: Self = Self::new(Aggregator::Sum, ClientCost::Max);
    pub const MAX_MAX: Self = Self::new(Aggregator::Max, ClientCost::Max);

    pub const fn new(aggregator: Aggregator, client_cost: ClientCost) -> Self {
        Self {
            aggregator,
            client_cost,
        }
    }

    /// Checks `l` and `q` against the instance.
    pub fn validate(&self, inst: &Instance) -> Result<(), ObjectiveError> {
        if let Aggregator::LCentrum(l) = self.aggregator {
            let n = inst.total_weight();
            if l == 0 || l > n {
                return Err(ObjectiveError::LOutOfRange { l, n });
            }
        }
        validate_cost(self.client_cost, inst.k())
    }
}

pub fn validate_cost(cost: ClientCost, k: usize) -> Result<(), ObjectiveError> {
    if let ClientCost::QSocial(q) = cost {
        if q == 0 || q > k {
            return Err(ObjectiveError::QOutOfRange { q, k });
        }
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectiveError {
    #[error("l-centrum parameter l = {l} outside [1, {n}]")]
    LOutOfRange { l: u64, n: u64 },
    #[error("q-social parameter q = {q} outside [1, {k}]")]
    QOutOfRange { q: usize, k: usize },
    #[error("unrecognised objective `{0}`")]
    Unknown(String),
}

/// Cost of the client at `client_point` for `sol`.
pub fn client_cost(
    space: &MetricSpace,
    client_point: PointId,
    sol: &Solution,
    cost: ClientCost,
) -> f64 {
    let slots = sol.slots();
    match cost {
        ClientCost::Sum => slots.iter().map(|&a| space.dist(client_point, a)).sum(),
        ClientCost::Max => slots
            .iter()
            .map(|&a| space.dist(client_point, a))
            .fold(0.0, f64::max),
        ClientCost::Min => slots
            .iter()
            .map(|&a| space.dist(client_point, a))
            .fold(f64::INFINITY, f64::min),
        ClientCost::QSocial(q) => {
            let mut ds: Vec<f64> = slots.iter().map(|&a| space.dist(client_point, a)).collect();
            let (_, nth, _) = ds.select_nth_unstable_by(q - 1, f64::total_cmp);
            *nth
        }
    }
}

/// Value of `spec` at `sol`. Weighted clients are treated as that many
/// co-located unit clients without materialising them.
pub fn objective_value(
    inst: &Instance,
    sol: &Solution,
    spec: ObjectiveSpec,
) -> Result<f64, ObjectiveError> {
    spec.validate(inst)?;
    Ok(objective_value_unchecked(inst, sol, spec))
}

/// [`objective_value`] without the parameter check, for hot loops that
/// validated `spec` once.
pub fn objective_value_unchecked(inst: &Instance, sol: &Solution, spec: ObjectiveSpec) -> f64 {
    let space = inst.space();
    let costs = inst
        .clients()
        .iter()
        .map(|c| (client_cost(space, c.point, sol, spec.client_cost), c.weight));
    match spec.aggregator {
        Aggregator::Max => costs.map(|(v, _)| v).fold(0.0, f64::max),
        Aggregator::Sum => costs.map(|(v, w)| v * w as f64).sum(),
        Aggregator::LCentrum(l) => top_l_sum(costs.collect(), l),
    }
}

/// Sum of the `l` largest values of the multiset where `(v, w)` stands for
/// `w` copies of `v`.
pub fn top_l_sum(mut weighted: Vec<(f64, u64)>, l: u64) -> f64 {
    weighted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut left = l;
    let mut total = 0.0;
    for (v, w) in weighted {
        if left == 0 {
            break;
        }
        let take = w.min(left);
        total += v * take as f64;
        left -= take;
    }
    total
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("set-pair distance needs two nonempty multisets")]
pub struct EmptySet;

/// `sum_{a in A} sum_{b in B} d(a, b)` over multisets.
pub fn set_pair_distance(
    space: &MetricSpace,
    a: &[PointId],
    b: &[PointId],
) -> Result<f64, EmptySet> {
    if a.is_empty() || b.is_empty() {
        return Err(EmptySet);
    }
    Ok(a.iter()
        .map(|&p| b.iter().map(|&q| space.dist(p, q)).sum::<f64>())
        .sum())
}

impl fmt::Display for ClientCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClientCost::Sum => write!(f, "sum"),
            ClientCost::Max => write!(f, "max"),
            ClientCost::Min => write!(f, "min"),
            ClientCost::QSocial(q) => write!(f, "q:{q}"),
        }
    }
}

impl FromStr for ClientCost {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(ClientCost::Sum),
            "max" => Ok(ClientCost::Max),
            "min" => Ok(ClientCost::Min),
            _ => s
                .strip_prefix("q:")
                .and_then(|q| q.parse().ok())
                .map(ClientCost::QSocial)
                .ok_or_else(|| ObjectiveError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.aggregator {
            Aggregator::Max => write!(f, "max-{}", self.client_cost),
            Aggregator::Sum => write!(f, "sum-{}", self.client_cost),
            Aggregator::LCentrum(l) => write!(f, "centrum:{l}:{}", self.client_cost),
        }
    }
}

impl FromStr for ObjectiveSpec {
    type Err = ObjectiveError;

    /// Accepts `sum-sum`, `max-sum`, `sum-max`, `max-max`, `max-q:<q>`,
    /// `centrum:<l>:<sum|max|q:<q>>` and the like.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || ObjectiveError::Unknown(s.to_string());
        if let Some(rest) = s.strip_prefix("centrum:") {
            let (l, cost) = rest.split_once(':').ok_or_else(unknown)?;
            let l = l.parse().map_err(|_| unknown())?;
            let cost = cost.parse().map_err(|_| unknown())?;
            return Ok(Self::new(Aggregator::LCentrum(l), cost));
        }
        let (agg, cost) = s.split_once('-').ok_or_else(unknown)?;
        let aggregator = match agg {
            "sum" => Aggregator::Sum,
            "max" => Aggregator::Max,
            _ => return Err(unknown()),
        };
        Ok(Self::new(aggregator, cost.parse().map_err(|_| unknown())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_core::{Client, Facility};

    fn line_instance(
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

    #[test]
    fn q_social_counts_multiplicity() {
        let inst = line_instance(&[0.0, 1.0, 5.0], &[(0, 1)], &[(1, 2), (2, 2)], 3);
        let sol = Solution::new(vec![1, 1, 2]);
        let sp = inst.space();
        assert_eq!(client_cost(sp, 0, &sol, ClientCost::QSocial(1)), 1.0);
        assert_eq!(client_cost(sp, 0, &sol, ClientCost::QSocial(2)), 1.0);
        assert_eq!(client_cost(sp, 0, &sol, ClientCost::QSocial(3)), 5.0);
        assert_eq!(client_cost(sp, 0, &sol, ClientCost::Min), 1.0);
        assert_eq!(client_cost(sp, 0, &sol, ClientCost::Max), 5.0);
        assert_eq!(client_cost(sp, 0, &sol, ClientCost::Sum), 7.0);
    }

    #[test]
    fn own_point_k_times_costs_zero() {
        let inst = line_instance(&[0.0, 2.0], &[(1, 1)], &[(1, 3)], 3);
        let sol = Solution::new(vec![1, 1, 1]);
        assert_eq!(client_cost(inst.space(), 1, &sol, ClientCost::Sum), 0.0);
    }

    #[test]
    fn centrum_endpoints_match_max_and_sum() {
        let inst = line_instance(
            &[0.0, 1.0, 3.0, 7.0],
            &[(0, 2), (1, 3), (3, 1)],
            &[(2, 2)],
            2,
        );
        let sol = Solution::new(vec![2, 2]);
        let n = inst.total_weight();
        for cost in [ClientCost::Sum, ClientCost::Max] {
            let max =
                objective_value(&inst, &sol, ObjectiveSpec::new(Aggregator::Max, cost)).unwrap();
            let sum =
                objective_value(&inst, &sol, ObjectiveSpec::new(Aggregator::Sum, cost)).unwrap();
            let c1 = objective_value(
                &inst,
                &sol,
                ObjectiveSpec::new(Aggregator::LCentrum(1), cost),
            )
            .unwrap();
            let cn = objective_value(
                &inst,
                &sol,
                ObjectiveSpec::new(Aggregator::LCentrum(n), cost),
            )
            .unwrap();
            assert_eq!(max, c1);
            assert!((sum - cn).abs() < 1e-12);
        }
        // expanded SUM costs: 2 clients at 6, 3 at 4, 1 at 8 -> top 3 = 8 + 6 + 6
        let c3 = objective_value(
            &inst,
            &sol,
            ObjectiveSpec::new(Aggregator::LCentrum(3), ClientCost::Sum),
        )
        .unwrap();
        assert_eq!(c3, 20.0);
    }

    #[test]
    fn out_of_range_parameters() {
        let inst = line_instance(&[0.0, 1.0], &[(0, 2)], &[(1, 2)], 2);
        let sol = Solution::new(vec![1, 1]);
        assert_eq!(
            objective_value(
                &inst,
                &sol,
                ObjectiveSpec::new(Aggregator::LCentrum(3), ClientCost::Sum)
            ),
            Err(ObjectiveError::LOutOfRange { l: 3, n: 2 })
        );
        assert_eq!(
            objective_value(
                &inst,
                &sol,
                ObjectiveSpec::new(Aggregator::Sum, ClientCost::QSocial(3))
            ),
            Err(ObjectiveError::QOutOfRange { q: 3, k: 2 })
        );
    }

    #[test]
    fn set_pair_distance_multiplicity() {
        let space = MetricSpace::from_coords(1, vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(set_pair_distance(&space, &[0], &[0]), Ok(0.0));
        assert_eq!(set_pair_distance(&space, &[0], &[1, 1]), Ok(2.0));
        assert_eq!(set_pair_distance(&space, &[], &[1]), Err(EmptySet));
    }

    #[test]
    fn set_pair_distance_matches_table_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let coords: Vec<Vec<f64>> = (0..6).map(|_| vec![rng.gen(), rng.gen()]).collect();
        let space = MetricSpace::from_coords(2, coords).unwrap();
        let table = space.matrix();
        let a: Vec<usize> = (0..3).map(|_| rng.gen_range(0..6)).collect();
        let b: Vec<usize> = (0..4).map(|_| rng.gen_range(0..6)).collect();
        let mut expected = 0.0;
        for &p in &a {
            for &q in &b {
                expected += table[p][q];
            }
        }
        assert!((set_pair_distance(&space, &a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn names_round_trip() {
        for name in [
            "sum-sum",
            "max-sum",
            "sum-max",
            "max-max",
            "centrum:2:max",
            "centrum:5:q:3",
            "max-q:2",
        ] {
            let spec: ObjectiveSpec = name.parse().unwrap();
            assert_eq!(spec.to_string(), name);
        }
        assert_eq!(
            "max-sum".parse::<ObjectiveSpec>().unwrap(),
            ObjectiveSpec::MAX_SUM
        );
        assert!("median".parse::<ObjectiveSpec>().is_err());
        assert!("centrum:x:sum".parse::<ObjectiveSpec>().is_err());
    }
}

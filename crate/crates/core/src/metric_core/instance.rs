// SPDX-License-Identifier: Apache-2.0

use super::space::{MetricSpace, PointId};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// `weight` co-located clients at `point`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Client {
    pub point: PointId,
    pub weight: u64,
}

/// A facility location that may be chosen up to `mult` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Facility {
    pub point: PointId,
    pub mult: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("k = {k} exceeds total facility multiplicity {total}")]
    KTooLarge { k: usize, total: usize },
    #[error("{field}[{index}] references point {point}, but the space has {count} points")]
    PointOutOfRange {
        field: &'static str,
        index: usize,
        point: PointId,
        count: usize,
    },
    #[error("clients[{index}] has zero weight")]
    ZeroWeight { index: usize },
    #[error("facilities[{index}] has zero multiplicity")]
    ZeroMultiplicity { index: usize },
    #[error("instance has no clients")]
    NoClients,
    #[error("labels has {len} entries, expected one per point ({expected})")]
    LabelCount { len: usize, expected: usize },
    #[error("solution has {len} slots, expected k = {k}")]
    WrongSize { len: usize, k: usize },
    #[error("solution uses point {point} {used} times, but only {available} slots exist")]
    OverMultiplicity {
        point: PointId,
        used: usize,
        available: usize,
    },
}

/// Clients, a facility multiset and a committee size over a metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    space: MetricSpace,
    clients: Vec<Client>,
    facilities: Vec<Facility>,
    k: usize,
    labels: Option<Vec<String>>,
    // (point, multiplicity), merged and sorted by point id
    pool: Vec<(PointId, usize)>,
    total_weight: u64,
}

impl Instance {
    pub fn new(
        space: MetricSpace,
        clients: Vec<Client>,
        facilities: Vec<Facility>,
        k: usize,
    ) -> Result<Self, InstanceError> {
        let count = space.point_count();
        if clients.is_empty() {
            return Err(InstanceError::NoClients);
        }
        for (index, c) in clients.iter().enumerate() {
            if c.point >= count {
                return Err(InstanceError::PointOutOfRange {
                    field: "clients",
                    index,
                    point: c.point,
                    count,
                });
            }
            if c.weight == 0 {
                return Err(InstanceError::ZeroWeight { index });
            }
        }
        let mut merged = BTreeMap::new();
        for (index, f) in facilities.iter().enumerate() {
            if f.point >= count {
                return Err(InstanceError::PointOutOfRange {
                    field: "facilities",
                    index,
                    point: f.point,
                    count,
                });
            }
            if f.mult == 0 {
                return Err(InstanceError::ZeroMultiplicity { index });
            }
            *merged.entry(f.point).or_insert(0) += f.mult;
        }
        if k == 0 {
            return Err(InstanceError::ZeroK);
        }
        let total: usize = merged.values().sum();
        if k > total {
            return Err(InstanceError::KTooLarge { k, total });
        }
        let total_weight = clients.iter().map(|c| c.weight).sum();
        Ok(Self {
            space,
            clients,
            facilities,
            k,
            labels: None,
            pool: merged.into_iter().collect(),
            total_weight,
        })
    }

    /// Attaches human-readable point names used when printing solutions.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, InstanceError> {
        let expected = self.space.point_count();
        if labels.len() != expected {
            return Err(InstanceError::LabelCount {
                len: labels.len(),
                expected,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn clients(&self) -> &[Client] {
        &self.clients
    }

    pub fn facilities(&self) -> &[Facility] {
        &self.facilities
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Facility multiset as sorted `(point, multiplicity)` pairs with
    /// duplicate entries merged.
    pub fn pool(&self) -> &[(PointId, usize)] {
        &self.pool
    }

    /// Total client weight `n`.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn multiplicity(&self, point: PointId) -> usize {
        self.pool
            .binary_search_by_key(&point, |&(p, _)| p)
            .map(|i| self.pool[i].1)
            .unwrap_or(0)
    }

    pub fn dist(&self, p: PointId, q: PointId) -> f64 {
        self.space.dist(p, q)
    }

    /// Same instance with a different committee size.
    pub fn with_k(&self, k: usize) -> Result<Self, InstanceError> {
        let mut inst = Self::new(
            self.space.clone(),
            self.clients.clone(),
            self.facilities.clone(),
            k,
        )?;
        inst.labels = self.labels.clone();
        Ok(inst)
    }

    /// Equivalent instance where every client has weight 1.
    pub fn expanded(&self) -> Self {
        let clients = self
            .clients
            .iter()
            .flat_map(|c| {
                std::iter::repeat_n(Client {
                    point: c.point,
                    weight: 1,
                }, c.weight as usize)
            })
            .collect();
        let mut inst = Self::new(self.space.clone(), clients, self.facilities.clone(), self.k)
            .expect("expansion preserves validity");
        inst.labels = self.labels.clone();
        inst
    }

    /// Weighted column sum `sum_i w_i d(i, p)`.
    pub fn column_sum(&self, p: PointId) -> f64 {
        self.clients
            .iter()
            .map(|c| c.weight as f64 * self.space.dist(c.point, p))
            .sum()
    }

    /// Largest distance from any client to `p`.
    pub fn eccentricity(&self, p: PointId) -> f64 {
        self.clients
            .iter()
            .map(|c| self.space.dist(c.point, p))
            .fold(0.0, f64::max)
    }

    pub fn check_solution(&self, sol: &Solution) -> Result<(), InstanceError> {
        if sol.len() != self.k {
            return Err(InstanceError::WrongSize {
                len: sol.len(),
                k: self.k,
            });
        }
        for (point, used) in sol.counts() {
            let available = self.multiplicity(point);
            if used > available {
                return Err(InstanceError::OverMultiplicity {
                    point,
                    used,
                    available,
                });
            }
        }
        Ok(())
    }

    pub fn label(&self, p: PointId) -> String {
        match &self.labels {
            Some(l) => l[p].clone(),
            None => p.to_string(),
        }
    }

    /// Renders a solution as `{B,B,D}` using labels when present.
    pub fn display_solution(&self, sol: &Solution) -> String {
        let parts: Vec<_> = sol.slots().iter().map(|&p| self.label(p)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// A multiset of facility points, stored sorted so that the derived ordering
/// is the lexicographic order used for tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Solution {
    slots: Vec<PointId>,
}

impl Solution {
    pub fn new(mut slots: Vec<PointId>) -> Self {
        slots.sort_unstable();
        Self { slots }
    }

    pub fn slots(&self) -> &[PointId] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// `(point, count)` pairs in point order.
    pub fn counts(&self) -> Vec<(PointId, usize)> {
        let mut out: Vec<(PointId, usize)> = Vec::new();
        for &p in &self.slots {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Multiplicity-wise minimum of two multisets.
    pub fn intersection(&self, other: &Solution) -> Solution {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.slots.len() && j < other.slots.len() {
            match self.slots[i].cmp(&other.slots[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.slots[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Solution { slots: out }
    }

    /// Multiset difference `self \ other`.
    pub fn difference(&self, other: &Solution) -> Solution {
        let mut out = Vec::new();
        let mut j = 0;
        for &p in &self.slots {
            while j < other.slots.len() && other.slots[j] < p {
                j += 1;
            }
            if j < other.slots.len() && other.slots[j] == p {
                j += 1;
            } else {
                out.push(p);
            }
        }
        Solution { slots: out }
    }

    /// Multiset sum.
    pub fn union(&self, other: &Solution) -> Solution {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        Solution::new(slots)
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.slots.binary_search(&p).is_ok()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.slots.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl serde::Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.slots, s)
    }
}

impl<'de> serde::Deserialize<'de> for Solution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        <Vec<PointId> as serde::Deserialize>::deserialize(d).map(Solution::new)
    }
}

impl From<Vec<PointId>> for Solution {
    fn from(slots: Vec<PointId>) -> Self {
        Solution::new(slots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> MetricSpace {
        MetricSpace::from_coords(1, (0..n).map(|i| vec![i as f64]).collect()).unwrap()
    }

    #[test]
    fn rejects_k_above_multiplicity() {
        let err = Instance::new(
            line(3),
            vec![Client {
                point: 0,
                weight: 1,
            }],
            vec![Facility { point: 1, mult: 1 }],
            2,
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::KTooLarge { k: 2, total: 1 });
    }

    #[test]
    fn rejects_out_of_range_and_zero_weight() {
        assert!(matches!(
            Instance::new(
                line(2),
                vec![Client {
                    point: 5,
                    weight: 1
                }],
                vec![Facility { point: 0, mult: 1 }],
                1
            ),
            Err(InstanceError::PointOutOfRange {
                field: "clients",
                ..
            })
        ));
        assert!(matches!(
            Instance::new(
                line(2),
                vec![Client {
                    point: 0,
                    weight: 0
                }],
                vec![Facility { point: 0, mult: 1 }],
                1
            ),
            Err(InstanceError::ZeroWeight { index: 0 })
        ));
    }

    #[test]
    fn duplicate_facility_entries_merge() {
        let inst = Instance::new(
            line(3),
            vec![Client {
                point: 0,
                weight: 2,
            }],
            vec![
                Facility { point: 2, mult: 1 },
                Facility { point: 1, mult: 1 },
                Facility { point: 2, mult: 2 },
            ],
            4,
        )
        .unwrap();
        assert_eq!(inst.pool(), &[(1, 1), (2, 3)]);
        assert!(inst
            .check_solution(&Solution::new(vec![2, 2, 1, 2]))
            .is_ok());
        assert!(matches!(
            inst.check_solution(&Solution::new(vec![1, 1, 2, 2])),
            Err(InstanceError::OverMultiplicity { point: 1, .. })
        ));
    }

    #[test]
    fn multiset_algebra() {
        let a = Solution::new(vec![3, 1, 1, 2]);
        let b = Solution::new(vec![1, 2, 2, 4]);
        assert_eq!(a.intersection(&b).slots(), &[1, 2]);
        assert_eq!(a.difference(&b).slots(), &[1, 3]);
        assert_eq!(b.difference(&a).slots(), &[2, 4]);
        assert_eq!(a.intersection(&b).union(&a.difference(&b)), a);
    }

    #[test]
    fn lexicographic_order() {
        assert!(Solution::new(vec![0, 0]) < Solution::new(vec![0, 1]));
        assert!(Solution::new(vec![0, 2]) < Solution::new(vec![1, 1]));
    }
}

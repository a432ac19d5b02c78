// SPDX-License-Identifier: Apache-2.0

use crate::tolerance::slack_of;
use thiserror::Error;

/// Index of a point in a [`MetricSpace`].
pub type PointId = usize;

/// How the distances of a space were supplied.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// Points given by coordinates; distances are Euclidean.
    Euclidean { dim: usize, coords: Vec<Vec<f64>> },
    /// Distances given explicitly.
    Matrix,
}

/// A finite point set with pairwise distances.
///
/// Euclidean input is converted to a dense matrix once at construction, so
/// every consumer reads distances through [`MetricSpace::dist`]. The original
/// geometry is kept only so documents can be written back unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
    geometry: Geometry,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("metric must contain at least one point")]
    Empty,
    #[error("distance matrix row {row} has length {len}, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("coordinate of point {point} has dimension {len}, expected {expected}")]
    BadDimension {
        point: usize,
        len: usize,
        expected: usize,
    },
    #[error("non-finite value at ({p}, {q})")]
    NonFinite { p: usize, q: usize },
    #[error("negative distance d({p}, {q}) = {value}")]
    Negative { p: usize, q: usize, value: f64 },
}

/// Reason a space fails the metric axioms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricViolation {
    #[error("negative distance d({p}, {q})")]
    Negative { p: PointId, q: PointId },
    #[error("nonzero self distance d({p}, {p})")]
    NonzeroSelf { p: PointId },
    #[error("asymmetric distance d({p}, {q}) != d({q}, {p})")]
    Asymmetry { p: PointId, q: PointId },
    #[error(
        "triangle inequality violated: d({p}, {r}) exceeds d({p}, {q}) + d({q}, {r}) by {slack}"
    )]
    Violation {
        p: PointId,
        q: PointId,
        r: PointId,
        slack: f64,
    },
}

impl MetricSpace {
    /// Builds a space from an explicit distance matrix.
    ///
    /// Only shape, finiteness and sign are checked here; use
    /// [`validate_metric`] for the metric axioms.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let n = rows.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let mut dist = Vec::with_capacity(n * n);
        for (p, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::NotSquare {
                    row: p,
                    len: row.len(),
                    expected: n,
                });
            }
            for (q, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(SpaceError::NonFinite { p, q });
                }
                if value < 0.0 {
                    return Err(SpaceError::Negative { p, q, value });
                }
                dist.push(value);
            }
        }
        Ok(Self {
            n,
            dist,
            geometry: Geometry::Matrix,
        })
    }

    /// Builds a Euclidean space from per-point coordinates.
    pub fn from_coords(dim: usize, coords: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let n = coords.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        for (p, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(SpaceError::BadDimension {
                    point: p,
                    len: c.len(),
                    expected: dim,
                });
            }
            if let Some(q) = c.iter().position(|x| !x.is_finite()) {
                return Err(SpaceError::NonFinite { p, q });
            }
        }
        let mut dist = vec![0.0; n * n];
        for p in 0..n {
            for q in (p + 1)..n {
                let d = coords[p]
                    .iter()
                    .zip(&coords[q])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                dist[p * n + q] = d;
                dist[q * n + p] = d;
            }
        }
        Ok(Self {
            n,
            dist,
            geometry: Geometry::Euclidean { dim, coords },
        })
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, p: PointId, q: PointId) -> f64 {
        self.dist[p * self.n + q]
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// Distance matrix as rows.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// Checks the metric axioms on a space: nonnegativity, zero self distance,
/// symmetry and the triangle inequality, in that order. The first offending
/// pair or triple is reported.
pub fn validate_metric(space: &MetricSpace) -> Result<(), MetricViolation> {
    let n = space.point_count();
    for p in 0..n {
        for q in 0..n {
            if space.dist(p, q) < 0.0 {
                return Err(MetricViolation::Negative { p, q });
            }
        }
    }
    for p in 0..n {
        if space.dist(p, p) > crate::tolerance::ABS_TOL {
            return Err(MetricViolation::NonzeroSelf { p });
        }
    }
    for p in 0..n {
        for q in (p + 1)..n {
            let (a, b) = (space.dist(p, q), space.dist(q, p));
            if (a - b).abs() > slack_of(a, b) {
                return Err(MetricViolation::Asymmetry { p, q });
            }
        }
    }
    for p in 0..n {
        for r in 0..n {
            let direct = space.dist(p, r);
            for q in 0..n {
                let detour = space.dist(p, q) + space.dist(q, r);
                let excess = direct - detour;
                if excess > slack_of(direct, detour) {
                    return Err(MetricViolation::Violation {
                        p,
                        q,
                        r,
                        slack: excess,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Shortest-path closure of a symmetric weight matrix (Floyd-Warshall).
pub fn metric_closure(mut weights: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = weights.len();
    for via in 0..n {
        for p in 0..n {
            let through = weights[p][via];
            for q in 0..n {
                let cand = through + weights[via][q];
                if cand < weights[p][q] {
                    weights[p][q] = cand;
                }
            }
        }
    }
    weights
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points_are_metric() {
        let space = MetricSpace::from_matrix(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(validate_metric(&space), Ok(()));
    }

    #[test]
    fn long_edge_violates_triangle() {
        let space = MetricSpace::from_matrix(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ])
        .unwrap();
        match validate_metric(&space) {
            Err(MetricViolation::Violation { p, q, r, slack }) => {
                assert_eq!((p, q, r), (0, 1, 2));
                assert!((slack - 1.0).abs() < 1e-12);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn asymmetry_is_reported() {
        let space = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(
            validate_metric(&space),
            Err(MetricViolation::Asymmetry { p: 0, q: 1 })
        );
    }

    #[test]
    fn constructor_rejects_negative_and_ragged() {
        assert!(matches!(
            MetricSpace::from_matrix(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(SpaceError::Negative { .. })
        ));
        assert!(matches!(
            MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0]]),
            Err(SpaceError::NotSquare { .. })
        ));
        assert!(matches!(
            MetricSpace::from_matrix(vec![vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]),
            Err(SpaceError::NonFinite { .. })
        ));
    }

    #[test]
    fn euclidean_distances() {
        let space = MetricSpace::from_coords(2, vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(space.dist(0, 1), 5.0);
        assert_eq!(space.dist(1, 1), 0.0);
        assert_eq!(validate_metric(&space), Ok(()));
    }

    #[test]
    fn closure_of_random_graph_is_metric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 6;
        let mut w = vec![vec![0.0; n]; n];
        for p in 0..n {
            for q in (p + 1)..n {
                let x = rng.gen_range(0.1..1.0);
                w[p][q] = x;
                w[q][p] = x;
            }
        }
        // the raw weights are generally not a metric
        let closed = metric_closure(w.clone());
        let space = MetricSpace::from_matrix(closed.clone()).unwrap();
        assert_eq!(validate_metric(&space), Ok(()));
        // brute-force recheck: no path of two hops beats any entry
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    assert!(closed[p][r] <= closed[p][q] + closed[q][r] + 1e-12);
                }
                assert!(closed[p][q] <= w[p][q]);
            }
        }
    }
}

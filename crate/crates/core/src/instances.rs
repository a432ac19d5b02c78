// SPDX-License-Identifier: Apache-2.0

//! Lower-bound instance families, seeded random instances and the JSON
//! instance document.

use crate::metric_core::{
    metric_closure, validate_metric, Client, Facility, Geometry, Instance, InstanceError,
    MetricSpace, MetricViolation, PointId, SpaceError,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Line `A = 0, B = 1, C = sqrt 2`; one client at `A`, `n - 1` at `B`;
    /// each location once; `k = 2`.
    Fig2,
    /// Line `A = 0, B = 1, C = 2, D = 2 + (sqrt 7 - 2) / 3`; one client at
    /// `A`, `n - 1` at `C`; `B` and `D` three times each; `k = 3`.
    Fig3,
    /// Line `A = 0, B = 1, C = 2, D = 1 + sqrt 2`; one client at `A`,
    /// `n - 1` at `C`; `B` and `D` `k` times each.
    Fig4,
    /// Triangle with `d(A, C) = d(A, D) = sqrt 2 / 2` and `d(C, D) = 1`;
    /// one client at each of `C` and `D`; `A` twice, `C` and `D` once;
    /// `k = 2`. The client weights are fixed, so `n` is ignored.
    Fig5,
    RandomEuclidean,
    RandomMetric,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Fig2,
        Family::Fig3,
        Family::Fig4,
        Family::Fig5,
        Family::RandomEuclidean,
        Family::RandomMetric,
    ];

    pub fn is_random(self) -> bool {
        matches!(self, Family::RandomEuclidean | Family::RandomMetric)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Fig2 => "fig2",
            Family::Fig3 => "fig3",
            Family::Fig4 => "fig4",
            Family::Fig5 => "fig5",
            Family::RandomEuclidean => "random-euclidean",
            Family::RandomMetric => "random-metric",
        })
    }
}

impl FromStr for Family {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| SpecError::UnknownFamily(s.to_string()))
    }
}

/// Parameters for [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    /// Total client weight.
    pub n: u64,
    /// Committee size. Required for [`Family::Fig4`]; must match the fixed
    /// value for the other figures when given. Random families default to 2.
    pub k: Option<usize>,
    pub seed: u64,
    /// Random families: number of points.
    pub points: usize,
    /// Random families: number of client entries sharing the weight `n`.
    pub clients: usize,
    /// Random families: number of distinct facility points.
    pub facilities: usize,
    /// Random families: facility multiplicities are drawn from `1..=max_mult`.
    pub max_mult: usize,
    /// Random Euclidean family: coordinate dimension.
    pub dim: usize,
}

impl FamilySpec {
    pub fn new(family: Family, n: u64) -> Self {
        Self {
            family,
            n,
            k: None,
            seed: 0,
            points: 6,
            clients: 3,
            facilities: 4,
            max_mult: 2,
            dim: 2,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("{family} requires k = {expected}, got {got}")]
    FixedK {
        family: Family,
        expected: usize,
        got: usize,
    },
    #[error("{family} requires k >= {min}")]
    KTooSmall { family: Family, min: usize },
    #[error("{family} needs n >= {min}, got {n}")]
    TooFewClients { family: Family, min: u64, n: u64 },
    #[error("invalid size parameter: {0}")]
    Size(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn line_space(coords: &[f64]) -> MetricSpace {
    MetricSpace::from_coords(1, coords.iter().map(|&x| vec![x]).collect())
        .expect("finite coordinates")
}

fn fixed_k(spec: &FamilySpec, expected: usize) -> Result<usize, SpecError> {
    match spec.k {
        Some(got) if got != expected => Err(SpecError::FixedK {
            family: spec.family,
            expected,
            got,
        }),
        _ => Ok(expected),
    }
}

/// Two client entries: weight 1 at `near`, weight `n - 1` at `far`.
fn split_clients(spec: &FamilySpec, near: PointId, far: PointId) -> Result<Vec<Client>, SpecError> {
    if spec.n < 2 {
        return Err(SpecError::TooFewClients {
            family: spec.family,
            min: 2,
            n: spec.n,
        });
    }
    Ok(vec![
        Client {
            point: near,
            weight: 1,
        },
        Client {
            point: far,
            weight: spec.n - 1,
        },
    ])
}

pub fn generate(spec: &FamilySpec) -> Result<Instance, SpecError> {
    let inst = match spec.family {
        Family::Fig2 => {
            let k = fixed_k(spec, 2)?;
            let facilities = (0..3).map(|point| Facility { point, mult: 1 }).collect();
            Instance::new(
                line_space(&[0.0, 1.0, 2f64.sqrt()]),
                split_clients(spec, 0, 1)?,
                facilities,
                k,
            )?
            .with_labels(labels(&["A", "B", "C"]))?
        }
        Family::Fig3 => {
            let k = fixed_k(spec, 3)?;
            let d = 2.0 + (7f64.sqrt() - 2.0) / 3.0;
            let facilities = vec![
                Facility { point: 1, mult: 3 },
                Facility { point: 3, mult: 3 },
            ];
            Instance::new(
                line_space(&[0.0, 1.0, 2.0, d]),
                split_clients(spec, 0, 2)?,
                facilities,
                k,
            )?
            .with_labels(labels(&["A", "B", "C", "D"]))?
        }
        Family::Fig4 => {
            let k = spec.k.ok_or(SpecError::KTooSmall {
                family: spec.family,
                min: 2,
            })?;
            if k < 2 {
                return Err(SpecError::KTooSmall {
                    family: spec.family,
                    min: 2,
                });
            }
            let facilities = vec![
                Facility { point: 1, mult: k },
                Facility { point: 3, mult: k },
            ];
            Instance::new(
                line_space(&[0.0, 1.0, 2.0, 1.0 + 2f64.sqrt()]),
                split_clients(spec, 0, 2)?,
                facilities,
                k,
            )?
            .with_labels(labels(&["A", "B", "C", "D"]))?
        }
        Family::Fig5 => {
            let k = fixed_k(spec, 2)?;
            let space =
                MetricSpace::from_coords(2, vec![vec![0.0, 0.5], vec![-0.5, 0.0], vec![0.5, 0.0]])
                    .expect("finite coordinates");
            let clients = vec![
                Client {
                    point: 1,
                    weight: 1,
                },
                Client {
                    point: 2,
                    weight: 1,
                },
            ];
            let facilities = vec![
                Facility { point: 0, mult: 2 },
                Facility { point: 1, mult: 1 },
                Facility { point: 2, mult: 1 },
            ];
            Instance::new(space, clients, facilities, k)?.with_labels(labels(&["A", "C", "D"]))?
        }
        Family::RandomEuclidean | Family::RandomMetric => random(spec)?,
    };
    Ok(inst)
}

fn random(spec: &FamilySpec) -> Result<Instance, SpecError> {
    let k = spec.k.unwrap_or(2);
    let p = spec.points;
    if p == 0 || spec.clients == 0 || spec.facilities == 0 || spec.max_mult == 0 {
        return Err(SpecError::Size(
            "points, clients, facilities and max_mult must be positive".into(),
        ));
    }
    if spec.facilities > p {
        return Err(SpecError::Size(format!(
            "{} facility points exceed {p} points",
            spec.facilities
        )));
    }
    if spec.family == Family::RandomEuclidean && spec.dim == 0 {
        return Err(SpecError::Size("dim must be positive".into()));
    }
    if spec.n < spec.clients as u64 {
        return Err(SpecError::TooFewClients {
            family: spec.family,
            min: spec.clients as u64,
            n: spec.n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let space = match spec.family {
        Family::RandomEuclidean => {
            let coords = (0..p)
                .map(|_| (0..spec.dim).map(|_| rng.gen::<f64>()).collect())
                .collect();
            MetricSpace::from_coords(spec.dim, coords).expect("finite coordinates")
        }
        _ => {
            let mut w = vec![vec![0.0; p]; p];
            for a in 0..p {
                for b in (a + 1)..p {
                    let x = rng.gen_range(0.1..=1.0);
                    w[a][b] = x;
                    w[b][a] = x;
                }
            }
            MetricSpace::from_matrix(metric_closure(w)).expect("closure of positive weights")
        }
    };
    let mut clients: Vec<Client> = (0..spec.clients)
        .map(|_| Client {
            point: rng.gen_range(0..p),
            weight: 1,
        })
        .collect();
    for _ in 0..(spec.n - spec.clients as u64) {
        let c = rng.gen_range(0..clients.len());
        clients[c].weight += 1;
    }
    let mut points = sample(&mut rng, p, spec.facilities).into_vec();
    points.sort_unstable();
    let facilities = points
        .into_iter()
        .map(|point| Facility {
            point,
            mult: rng.gen_range(1..=spec.max_mult),
        })
        .collect();
    Ok(Instance::new(space, clients, facilities, k)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MetricDoc {
    Euclidean { dim: usize, coords: Vec<Vec<f64>> },
    Matrix { d: Vec<Vec<f64>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClientDoc {
    point: PointId,
    weight: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacilityDoc {
    point: PointId,
    mult: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    metric: MetricDoc,
    clients: Vec<ClientDoc>,
    facilities: Vec<FacilityDoc>,
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("metric: {0}")]
    Metric(#[from] SpaceError),
    #[error("metric: {0}")]
    NotMetric(#[from] MetricViolation),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Pretty-printed JSON document; floats are written in shortest round-trip
/// form, so [`parse`] restores the instance exactly.
pub fn serialize(inst: &Instance) -> String {
    let metric = match inst.space().geometry() {
        Geometry::Euclidean { dim, coords } => MetricDoc::Euclidean {
            dim: *dim,
            coords: coords.clone(),
        },
        Geometry::Matrix => MetricDoc::Matrix {
            d: inst.space().matrix(),
        },
    };
    let doc = InstanceDoc {
        metric,
        clients: inst
            .clients()
            .iter()
            .map(|c| ClientDoc {
                point: c.point,
                weight: c.weight,
            })
            .collect(),
        facilities: inst
            .facilities()
            .iter()
            .map(|f| FacilityDoc {
                point: f.point,
                mult: f.mult,
            })
            .collect(),
        k: inst.k(),
        labels: inst.labels().map(<[String]>::to_vec),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    out.push('\n');
    out
}

pub fn parse(text: &str) -> Result<Instance, ParseError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let space = match doc.metric {
        MetricDoc::Euclidean { dim, coords } => MetricSpace::from_coords(dim, coords)?,
        MetricDoc::Matrix { d } => MetricSpace::from_matrix(d)?,
    };
    validate_metric(&space)?;
    let clients = doc
        .clients
        .into_iter()
        .map(|c| Client {
            point: c.point,
            weight: c.weight,
        })
        .collect();
    let facilities = doc
        .facilities
        .into_iter()
        .map(|f| Facility {
            point: f.point,
            mult: f.mult,
        })
        .collect();
    let inst = Instance::new(space, clients, facilities, doc.k)?;
    Ok(match doc.labels {
        Some(l) => inst.with_labels(l)?,
        None => inst,
    })
}

// SPDX-License-Identifier: Apache-2.0

//! Metric spaces, instances, client costs and objective evaluation.

mod instance;
mod objective;
pub mod reduction;
mod space;

pub use instance::{Client, Facility, Instance, InstanceError, Solution};
pub use objective::{
    client_cost, objective_value, objective_value_unchecked, set_pair_distance, top_l_sum,
    validate_cost, Aggregator, ClientCost, EmptySet, ObjectiveError, ObjectiveSpec,
};
pub use reduction::{
    build_committee_metric, check_cost_triangle_property, CommitteeMetric, ReductionError,
    TriangleCheck, TriangleMode, DEFAULT_COMMITTEE_CAP,
};
pub use space::{
    metric_closure, validate_metric, Geometry, MetricSpace, MetricViolation, PointId, SpaceError,
};

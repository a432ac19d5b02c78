// SPDX-License-Identifier: Apache-2.0

//! Simultaneous approximation for metric facility location and committee
//! selection under the Sum-Sum, Max-Sum, Sum-Max and Max-Max objectives.

pub mod cli;
pub mod compat;
pub mod instances;
pub mod metric_core;
pub mod solvers;
pub mod tolerance;
pub mod voting;

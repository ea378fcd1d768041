// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Community detection by maximizing null-model likelihoods.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datasets;
pub mod error;
pub mod graph;
pub mod io;
pub mod lfr;
pub mod louvain;
pub mod metrics;
pub mod models;
pub mod partition;
pub mod run;
pub mod stats;
pub mod strategy;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::Graph;
pub use partition::Partition;
pub use stats::{compute_stats, PartitionStats};

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

//! Small real-world networks with published ground-truth partitions.

use crate::graph::Graph;
use crate::io::{load_edge_list, load_partition, VertexLabels};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dataset {
    /// Zachary's karate club, split by faction.
    Karate,
    /// Lusseau's bottlenose dolphins, two groups.
    Dolphins,
    /// College football 2000 season, split by conference.
    Football,
}

pub struct LoadedDataset {
    pub graph: Graph,
    pub labels: VertexLabels,
    pub ground_truth: Partition,
}

impl Dataset {
    pub const ALL: [Dataset; 3] = [Dataset::Karate, Dataset::Dolphins, Dataset::Football];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::Karate => "karate",
            Dataset::Dolphins => "dolphins",
            Dataset::Football => "football",
        }
    }

    pub fn edge_list(self) -> &'static str {
        match self {
            Dataset::Karate => include_str!("../data/karate.edges"),
            Dataset::Dolphins => include_str!("../data/dolphins.edges"),
            Dataset::Football => include_str!("../data/football.edges"),
        }
    }

    pub fn ground_truth_text(self) -> &'static str {
        match self {
            Dataset::Karate => include_str!("../data/karate.truth"),
            Dataset::Dolphins => include_str!("../data/dolphins.truth"),
            Dataset::Football => include_str!("../data/football.truth"),
        }
    }

    pub fn load(self) -> LoadedDataset {
        let (graph, labels) = load_edge_list(self.edge_list()).expect("bundled edge list is valid");
        let ground_truth =
            load_partition(self.ground_truth_text(), &labels).expect("bundled ground truth is valid");
        LoadedDataset {
            graph,
            labels,
            ground_truth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let expected = [(34, 78.0, 2), (62, 159.0, 2), (115, 613.0, 12)];
        for (ds, (n, m, k)) in Dataset::ALL.iter().zip(expected) {
            let d = ds.load();
            assert_eq!(d.graph.vertex_count(), n, "{}", ds.name());
            assert_eq!(d.graph.total_weight(), m, "{}", ds.name());
            assert_eq!(d.ground_truth.num_communities(), k, "{}", ds.name());
        }
    }
}

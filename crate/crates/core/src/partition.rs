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

use std::collections::HashMap;

use serde::{Serialize, Serializer};

/// Assignment of every vertex to exactly one community.
///
/// Community ids are always dense `0..k`, numbered by first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    num_communities: usize,
}

/// Serializes as the list of community ids.
impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.assignment.serialize(serializer)
    }
}

impl Partition {
    /// Normalizes arbitrary labels to dense ids in first-appearance order.
    pub fn from_assignment<L>(labels: impl IntoIterator<Item = L>) -> Self
    where
        L: std::hash::Hash + Eq,
    {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let assignment: Vec<usize> = labels
            .into_iter()
            .map(|label| {
                let next = ids.len();
                *ids.entry(label).or_insert(next)
            })
            .collect();
        Partition {
            num_communities: ids.len(),
            assignment,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            num_communities: n,
        }
    }

    /// All `n` vertices in a single community.
    pub fn whole(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            num_communities: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn community_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_communities];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Members of each community, in vertex order.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_communities];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Maps a partition of supervertices back onto the vertices of the
    /// level below: vertex `v` lands in `upper[self[v]]`.
    pub fn compose(&self, upper: &Partition) -> Partition {
        Partition::from_assignment(self.assignment.iter().map(|&c| upper.community_of(c)))
    }
}

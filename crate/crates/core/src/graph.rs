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

//! Weighted undirected multigraph with loops.
//!
//! Base graphs are simple with unit weights. Contraction produces supervertex
//! graphs where a loop of weight `w` stores the intra-community weight of the
//! merged community; it adds `w` to the total weight and `2w` to the degree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<(usize, f64)>>,
    edges: Vec<(usize, usize, f64)>,
    degrees: Vec<f64>,
    loops: Vec<f64>,
    sizes: Vec<usize>,
    total_weight: f64,
    sum_dlogd: f64,
}

/// `x log x` with `0 log 0 = 0`.
#[inline]
pub(crate) fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

impl Graph {
    /// Builds a simple unit-weight graph. Loops and repeated pairs are rejected.
    pub fn from_simple_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Validation(format!("self-loop at vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::Validation(format!(
                    "duplicate edge between {} and {}",
                    key.0, key.1
                )));
            }
        }
        Self::from_weighted_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    /// Builds a weighted multigraph. Repeated pairs are merged by summing
    /// their weights; `(u, u, w)` is a loop of weight `w`.
    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Validation(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }
        Ok(Self::assemble(n, merged.into_iter().map(|((u, v), w)| (u, v, w)).collect(), vec![1; n], None))
    }

    fn assemble(
        n: usize,
        edges: Vec<(usize, usize, f64)>,
        sizes: Vec<usize>,
        sum_dlogd: Option<f64>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        let mut degrees = vec![0.0; n];
        let mut loops = vec![0.0; n];
        let mut total_weight = 0.0;
        for &(u, v, w) in &edges {
            total_weight += w;
            if u == v {
                loops[u] += w;
                degrees[u] += 2.0 * w;
            } else {
                adjacency[u].push((v, w));
                adjacency[v].push((u, w));
                degrees[u] += w;
                degrees[v] += w;
            }
        }
        let sum_dlogd = sum_dlogd.unwrap_or_else(|| degrees.iter().map(|&d| xlogx(d)).sum());
        Graph {
            adjacency,
            edges,
            degrees,
            loops,
            sizes,
            total_weight,
            sum_dlogd,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    /// Number of base vertices represented, i.e. the sum of supervertex sizes.
    pub fn base_vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Total edge weight `m`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Edges as `(u, v, weight)` with `u <= v`, sorted, one entry per pair.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn loop_weight(&self, v: usize) -> f64 {
        self.loops[v]
    }

    /// Neighbours of `v` with edge weights, loops excluded.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// Number of base vertices merged into `v`.
    pub fn size(&self, v: usize) -> usize {
        self.sizes[v]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `Σ d(i) log d(i)` over the base vertices. Preserved by contraction.
    pub fn sum_dlogd(&self) -> f64 {
        self.sum_dlogd
    }

    /// True when every weight is 1 and there are no loops.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|&(u, v, w)| u != v && w == 1.0)
    }

    /// Collapses every community of `partition` into a supervertex.
    ///
    /// Supervertex `c` corresponds to community `c`. Its loop carries the
    /// intra-community weight and its size the number of base vertices.
    pub fn contract(&self, partition: &Partition) -> Graph {
        assert_eq!(partition.len(), self.vertex_count(), "partition does not cover graph");
        let k = partition.num_communities();
        let mut sizes = vec![0usize; k];
        for v in 0..self.vertex_count() {
            sizes[partition.community_of(v)] += self.sizes[v];
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(u, v, w) in &self.edges {
            let (a, b) = (partition.community_of(u), partition.community_of(v));
            *merged.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
        }
        Self::assemble(
            k,
            merged.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
            sizes,
            Some(self.sum_dlogd),
        )
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn two_triangles() -> Graph {
        Graph::from_simple_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn triangle_degrees() {
        let g = Graph::from_simple_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.total_weight(), 3.0);
        assert!(g.degrees().iter().all(|&d| d == 2.0));
        assert!(g.is_simple());
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(matches!(
            Graph::from_simple_edges(2, &[(0, 0)]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Graph::from_simple_edges(2, &[(0, 1), (1, 0)]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn loop_counts_twice_in_degree() {
        let g = Graph::from_weighted_edges(2, [(0, 0, 1.5), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.degree(0), 4.0);
        assert_eq!(g.total_weight(), 2.5);
        let sum: f64 = g.degrees().iter().sum();
        assert_eq!(sum, 2.0 * g.total_weight());
    }

    #[test]
    fn contract_two_triangles() {
        let g = two_triangles();
        let p = Partition::from_assignment(vec![0, 0, 0, 1, 1, 1]);
        let c = g.contract(&p);
        assert_eq!(c.vertex_count(), 2);
        assert!(c.neighbors(0).is_empty());
        assert_eq!(c.loop_weight(0), 3.0);
        assert_eq!(c.loop_weight(1), 3.0);
        assert_eq!(c.degrees(), &[6.0, 6.0]);
        assert_eq!(c.sizes(), &[3, 3]);
        assert_eq!(c.total_weight(), 6.0);
        assert_eq!(c.sum_dlogd(), g.sum_dlogd());
    }

    #[test]
    fn contract_triangle_pair_split() {
        let g = Graph::from_simple_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = g.contract(&Partition::from_assignment(vec![0, 0, 1]));
        assert_eq!(c.edges(), &[(0, 0, 1.0), (0, 1, 2.0)]);
        assert_eq!(c.loop_weight(0), 1.0);
        assert_eq!(c.sizes(), &[2, 1]);
    }

    #[test]
    fn singleton_contraction_is_identity() {
        let g = two_triangles();
        let c = g.contract(&Partition::singletons(6));
        assert_eq!(c, g);
    }
}
